#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <biwave/biwave.hpp>

namespace {

int report_checks(const std::vector<biwave::CheckResult>& results) {
    bool all = true;
    for (const auto& c : results) {
        std::printf("[%s] %-34s measured=%.3e %s %.3e  (%s)\n",
                    c.pass ? "PASS" : "FAIL", c.id.c_str(), c.measured,
                    c.comparator.c_str(), c.threshold, c.description.c_str());
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "all checks passed" : "CHECKS FAILED");
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-boundary wavefunction densities on a 1-D grid"};
    app.require_subcommand(1);

    std::string scenario_name, config_path, out_dir;
    bool real_part = false;
    auto* run = app.add_subcommand("run", "run a scenario and emit CSV/JSON results");
    run->add_option("scenario", scenario_name,
                    "two_position | slit | double_slit | stern_gerlach | "
                    "momentum_consistency | triple_measurement")
        ->required();
    run->add_option("--config", config_path, "scenario config JSON (defaults to the "
                                             "built-in reference configuration)");
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_flag("--real-part", real_part, "emit only Re(Q) columns");

    auto* check = app.add_subcommand("check", "run the invariant suite");
    std::string prop_out;
    auto* propcheck =
        app.add_subcommand("propcheck", "run the propagator and two-fermion oracles");
    propcheck->add_option("--out", prop_out,
                          "also export a sample propagator (binary + JSON sidecar)");

    std::string dump_name;
    auto* dump = app.add_subcommand("dump-config", "print a reference scenario config");
    dump->add_option("scenario", dump_name)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            biwave::ScenarioConfig cfg;
            if (config_path.empty()) {
                cfg = biwave::reference_config(scenario_name);
            } else {
                std::ifstream in(config_path);
                if (!in) {
                    std::fprintf(stderr, "cannot open %s\n", config_path.c_str());
                    return 2;
                }
                cfg = biwave::ScenarioConfig::from_json(nlohmann::json::parse(in));
                if (cfg.name != scenario_name) {
                    std::fprintf(stderr, "config is for scenario '%s', not '%s'\n",
                                 cfg.name.c_str(), scenario_name.c_str());
                    return 2;
                }
            }
            const biwave::ScenarioReport rep = biwave::run_scenario(cfg);
            biwave::write_report(rep, out_dir, real_part);
            for (const auto& a : rep.assertions)
                std::printf("[%s] %-32s measured=%.6g %s %.6g\n",
                            a.pass ? "PASS" : "FAIL", a.name.c_str(), a.measured,
                            a.comparator.c_str(), a.threshold);
            for (const auto& f : rep.flags) std::printf("[FLAG] %s\n", f.c_str());
            std::printf("report written to %s\n", out_dir.c_str());
            return rep.pass() ? 0 : 1;
        }
        if (check->parsed()) return report_checks(biwave::run_invariant_checks());
        if (propcheck->parsed()) {
            if (!prop_out.empty()) {
                const biwave::SpatialGrid g{64, 16.0 / 64, -8.0, biwave::Boundary::periodic};
                const auto pot = biwave::PotentialSpec::harmonic(g, 1.0, 0.0, 0.5);
                const auto p = biwave::retarded(g, pot, 0.0, 0.5, 0.01);
                std::filesystem::create_directories(prop_out);
                biwave::write_propagator(std::filesystem::path(prop_out) / "propagator", p);
            }
            return report_checks(biwave::run_propagator_checks());
        }
        if (dump->parsed()) {
            std::cout << biwave::reference_config(dump_name).to_json().dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
