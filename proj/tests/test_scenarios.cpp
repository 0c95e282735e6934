#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <biwave/scenario_runners.hpp>

using namespace biwave;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const Assertion& find_assertion(const ScenarioReport& rep, const std::string& name) {
    for (const auto& a : rep.assertions)
        if (a.name == name) return a;
    FAIL("assertion not found: " << name);
    throw std::logic_error("unreachable");
}

void check_unique_assertions(const ScenarioReport& rep) {
    for (std::size_t i = 0; i < rep.assertions.size(); ++i)
        for (std::size_t j = i + 1; j < rep.assertions.size(); ++j)
            REQUIRE(rep.assertions[i].name != rep.assertions[j].name);
}
} // namespace

TEST_CASE("two_position reference: expand-contract with a symmetric profile") {
    const ScenarioReport rep = run_two_position(reference_config("two_position"));
    check_unique_assertions(rep);
    REQUIRE(rep.pass());
    REQUIRE(find_assertion(rep, "width_ratio_mid_over_edge").measured > 2.0);
    REQUIRE(find_assertion(rep, "time_symmetry_rel_dev").measured < 0.05);

    // amplitude trace constant between events (no events here)
    const cx a0 = rep.amplitude_trace.front().second;
    for (const auto& [t, a] : rep.amplitude_trace) REQUIRE(std::abs(a - a0) < 1e-10);
}

TEST_CASE("two_position: degenerate single-instant run passes trivially") {
    ScenarioConfig cfg = reference_config("two_position");
    cfg.t2 = cfg.t1;
    cfg.snapshot_times = {cfg.t1};
    const ScenarioReport rep = run_two_position(cfg);
    REQUIRE(rep.pass());
    REQUIRE(find_assertion(rep, "width_constant").pass);
}

TEST_CASE("two_position: displaced endpoint tilts the density ridge") {
    ScenarioConfig cfg = reference_config("two_position");
    cfg.psi_f.center = 1.0;
    const ScenarioReport rep = run_two_position(cfg);
    check_unique_assertions(rep);
    REQUIRE(find_assertion(rep, "centroid_monotonic_backstep").pass);
    REQUIRE(find_assertion(rep, "centroid_reaches_end").pass);

    const auto& snaps = rep.tables.at("mass");
    REQUIRE(scen::density_centroid(snaps.front()) == Approx(0.0).margin(0.05));
    REQUIRE(scen::density_centroid(snaps.back()) == Approx(1.0).margin(0.05));
}

TEST_CASE("two_position: causally disconnected boundaries are flagged, not crashed") {
    ScenarioConfig cfg = reference_config("two_position");
    cfg.psi_i.center = -6.0;
    cfg.psi_f.center = 6.0;
    const ScenarioReport rep = run_two_position(cfg);
    REQUIRE_FALSE(rep.flags.empty());
    REQUIRE(rep.flags.front() == "no_consistent_history");
    REQUIRE_FALSE(rep.pass());
}

TEST_CASE("slit reference: confinement and leak-free barrier instant") {
    const ScenarioReport rep = run_slit(reference_config("slit"));
    check_unique_assertions(rep);
    REQUIRE(rep.pass());
    REQUIRE(find_assertion(rep, "barrier_leak_fraction").measured < 1e-6);
    REQUIRE(find_assertion(rep, "psi_f_slit_confinement").measured > 0.9);

    // one mask event applied to both passes leaves A(t) globally constant
    const cx a0 = rep.amplitude_trace.front().second;
    for (const auto& [t, a] : rep.amplitude_trace)
        REQUIRE(std::abs(a - a0) < 1e-10 * std::abs(a0) + 1e-12);
}

TEST_CASE("slit with a wide-open mask reproduces the free run bit-for-bit") {
    ScenarioConfig cfg = reference_config("slit");
    cfg.masks[0].halfwidth = 1e6; // everything open

    ScenarioConfig free_cfg = cfg;
    free_cfg.name = "two_position";
    free_cfg.masks.clear();

    const ScenarioReport masked = run_slit(cfg);
    const ScenarioReport free_run = run_two_position(free_cfg);
    const auto& a = masked.tables.at("mass");
    const auto& b = free_run.tables.at("mass");
    REQUIRE(a.size() == b.size());
    for (std::size_t m = 0; m < a.size(); ++m)
        REQUIRE((a[m].values - b[m].values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("slit with a closed mask reports no consistent history") {
    ScenarioConfig cfg = reference_config("slit");
    cfg.masks[0].centers = {};
    const ScenarioReport rep = run_slit(cfg);
    REQUIRE_FALSE(rep.flags.empty());
    REQUIRE_FALSE(rep.pass());
}

TEST_CASE("double slit reference: symmetric open flow, suppressed closed corridor") {
    const ScenarioReport rep = run_double_slit(reference_config("double_slit"));
    check_unique_assertions(rep);
    REQUIRE(rep.pass());
    REQUIRE(find_assertion(rep, "open_corridor_asymmetry").measured < 0.02);
    REQUIRE(find_assertion(rep, "closed_corridor_ratio").measured < 0.05);
    REQUIRE(rep.tables.count("mass") == 1);
    REQUIRE(rep.tables.count("mass_one_slit") == 1);
}

TEST_CASE("double slit with both slits closed is flagged") {
    ScenarioConfig cfg = reference_config("double_slit");
    cfg.masks[0].halfwidth = 0.0;
    cfg.masks[0].centers = {-1e9, 1e9}; // keeps the two-aperture shape, passes nothing
    const ScenarioReport rep = run_double_slit(cfg);
    REQUIRE_FALSE(rep.flags.empty());
}

TEST_CASE("stern_gerlach reference: branch suppression and backward overlap") {
    const ScenarioReport rep = run_stern_gerlach(reference_config("stern_gerlach"));
    check_unique_assertions(rep);
    REQUIRE(rep.pass());
    REQUIRE(find_assertion(rep, "unmatched_branch_fraction").measured < 1e-8);
    REQUIRE(find_assertion(rep, "branch_separation_sigmas").measured > 6.0);
    REQUIRE(find_assertion(rep, "pre_measurement_overlap").measured > 0.1);

    // per-channel traces are emitted and the minus channel carries nothing
    const auto& minus = rep.tables.at("mass_channel_minus");
    for (const auto& d : minus) REQUIRE(d.values.cwiseAbs().maxCoeff() == 0.0);
    const cx a0 = rep.amplitude_trace.front().second;
    for (const auto& [t, a] : rep.amplitude_trace)
        REQUIRE(std::abs(a - a0) < 1e-10 * std::abs(a0) + 1e-12);
}

TEST_CASE("stern_gerlach without a magnet never separates") {
    ScenarioConfig cfg = reference_config("stern_gerlach");
    cfg.extra["lambda"] = 0.0;
    cfg.psi_f = StateSpec{"gaussian", 0.0, 1.9, 0.0, 0, {}, {}};
    cfg.assertions = {{"separation_min_sigmas", -1.0}, {"unmatched_max", 2.0}};
    const ScenarioReport rep = run_stern_gerlach(cfg);
    REQUIRE(find_assertion(rep, "branch_separation_sigmas").measured ==
            Approx(0.0).margin(0.05));
    // density follows the single packet at the origin
    REQUIRE(scen::density_centroid(rep.tables.at("mass").back()) ==
            Approx(0.0).margin(0.1));
}

TEST_CASE("stern_gerlach mirrored final channel gives the mirror image") {
    ScenarioConfig cfg = reference_config("stern_gerlach");
    cfg.extra["psi_f_channel"] = "minus";
    cfg.psi_f.center = -cfg.psi_f.center;
    cfg.psi_f.wavenumber = -cfg.psi_f.wavenumber;
    const ScenarioReport rep = run_stern_gerlach(cfg);
    REQUIRE(rep.pass());
    const auto& plus = rep.tables.at("mass_channel_plus");
    for (const auto& d : plus) REQUIRE(d.values.cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(scen::density_centroid(rep.tables.at("mass").back()) > 1.0);
}

TEST_CASE("momentum consistency sweep passes and excludes orthogonal probes") {
    ScenarioConfig cfg = reference_config("momentum_consistency");
    const ScenarioReport rep = run_momentum_consistency(cfg);
    REQUIRE(rep.pass());
    REQUIRE(find_assertion(rep, "max_total_minus_eigenvalue").measured < 1e-8);
    REQUIRE(rep.flags.empty());

    cfg.extra["include_orthogonal_probe"] = true;
    const ScenarioReport probed = run_momentum_consistency(cfg);
    REQUIRE(probed.pass());
    REQUIRE_FALSE(probed.flags.empty());
    REQUIRE(probed.flags.front() == "orthogonal_draws_skipped");
}

TEST_CASE("triple measurement: zero jump for identical symmetric boundaries") {
    ScenarioConfig cfg = reference_config("triple_measurement");
    const nlohmann::json same = {{"kind", "gaussian"}, {"center", 0.0}, {"width", 1.0},
                                 {"wavenumber", 0.0}};
    cfg.extra["psi_1"] = same;
    cfg.extra["psi_2"] = same;
    cfg.extra["psi_3"] = same;
    const ScenarioReport rep = run_triple_measurement(cfg);
    double jump = -1.0;
    for (const auto& s : rep.aux)
        if (s.name == "jump_magnitude") jump = s.rows[0][0];
    REQUIRE(jump >= 0.0);
    REQUIRE(jump < 1e-11);
}

TEST_CASE("triple measurement: distinct states produce the documented jump") {
    const ScenarioReport rep = run_triple_measurement(reference_config("triple_measurement"));
    REQUIRE(rep.assertions.empty()); // diagnostic only
    double jump = -1.0;
    for (const auto& s : rep.aux)
        if (s.name == "jump_magnitude") jump = s.rows[0][0];
    REQUIRE(jump > 1e-3);

    // definitional cross-check against the emitted density tables
    const auto& before = rep.tables.at("mass_before").front();
    const auto& after = rep.tables.at("mass_after").front();
    double l2 = 0.0;
    for (int k = 0; k < before.grid.n_points; ++k)
        l2 += std::norm(after.values[k] - before.values[k]) * before.grid.weight(k);
    l2 = std::sqrt(l2 * before.grid.dx);
    REQUIRE(jump == Approx(l2).margin(1e-15));
}

TEST_CASE("scenario emission is deterministic and re-derivable") {
    const fs::path dir_a = fs::temp_directory_path() / "biwave_scn_a";
    const fs::path dir_b = fs::temp_directory_path() / "biwave_scn_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    const ScenarioConfig cfg = reference_config("two_position");
    const ScenarioReport rep_a = run_two_position(cfg);
    const ScenarioReport rep_b = run_two_position(cfg);
    write_report(rep_a, dir_a);
    write_report(rep_b, dir_b);
    REQUIRE(slurp(dir_a / "mass.csv") == slurp(dir_b / "mass.csv"));
    REQUIRE(slurp(dir_a / "report.json") == slurp(dir_b / "report.json"));
    REQUIRE(slurp(dir_a / "amplitude_trace.csv") == slurp(dir_b / "amplitude_trace.csv"));

    // width ratio re-derived from the CSV alone matches the report
    std::ifstream in(dir_a / "mass.csv");
    std::string line;
    std::getline(in, line); // header
    std::map<double, std::vector<std::pair<double, double>>> by_time; // t -> (x, |rho|)
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (double& v : vals) {
            std::getline(row, cell, ',');
            v = std::strtod(cell.c_str(), nullptr); // stod rejects denormal tails
        }
        by_time[vals[0]].emplace_back(vals[1], std::hypot(vals[2], vals[3]));
    }
    std::vector<double> widths;
    for (const auto& [t, rows] : by_time) {
        double wsum = 0.0, mean = 0.0;
        for (const auto& [x, w] : rows) {
            wsum += w;
            mean += w * x;
        }
        mean /= wsum;
        double var = 0.0;
        for (const auto& [x, w] : rows) var += w * (x - mean) * (x - mean);
        widths.push_back(std::sqrt(var / wsum));
    }
    const double ratio =
        widths[widths.size() / 2] / std::max(widths.front(), widths.back());
    REQUIRE(ratio ==
            Approx(find_assertion(rep_a, "width_ratio_mid_over_edge").measured)
                .epsilon(1e-12));
}

TEST_CASE("scenario config JSON round trip preserves the run") {
    for (const std::string name :
         {"two_position", "slit", "double_slit", "stern_gerlach",
          "momentum_consistency", "triple_measurement"}) {
        const ScenarioConfig cfg = reference_config(name);
        const ScenarioConfig back = ScenarioConfig::from_json(cfg.to_json());
        REQUIRE(back.name == cfg.name);
        REQUIRE(back.grid == cfg.grid);
        REQUIRE(back.t1 == cfg.t1);
        REQUIRE(back.t2 == cfg.t2);
        REQUIRE(back.dt == cfg.dt);
        REQUIRE(back.snapshot_times == cfg.snapshot_times);
        REQUIRE(back.to_json() == cfg.to_json());
    }
    REQUIRE_THROWS_AS(ScenarioConfig::from_json({{"name", "slit"}}), ConfigError);
}

TEST_CASE("unit factors rescale emitted coordinates, not the kernels") {
    ScenarioConfig cfg = reference_config("two_position");
    nlohmann::json j = cfg.to_json();
    j["units"] = {{"length", 2.0}, {"time", 10.0}};
    const ScenarioConfig scaled_cfg = ScenarioConfig::from_json(j);
    REQUIRE(scaled_cfg.length_unit == 2.0);

    const ScenarioReport plain = run_scenario(cfg);
    const ScenarioReport scaled = run_scenario(scaled_cfg);
    // identical physics: assertions agree exactly
    REQUIRE(scaled.assertions.size() == plain.assertions.size());
    for (std::size_t i = 0; i < plain.assertions.size(); ++i)
        REQUIRE(scaled.assertions[i].measured == plain.assertions[i].measured);

    const fs::path dir_p = fs::temp_directory_path() / "biwave_units_p";
    const fs::path dir_s = fs::temp_directory_path() / "biwave_units_s";
    write_report(plain, dir_p);
    write_report(scaled, dir_s);
    auto second_line = [](const fs::path& p) {
        std::ifstream in(p);
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        return line;
    };
    // x column doubles, t column scales by 10, values unchanged
    const std::string row_p = second_line(dir_p / "mass.csv");
    const std::string row_s = second_line(dir_s / "mass.csv");
    REQUIRE(row_p.rfind("0,-10,", 0) == 0);
    REQUIRE(row_s.rfind("0,-20,", 0) == 0);
    REQUIRE(row_p.substr(row_p.find("-10,") + 4) == row_s.substr(row_s.find("-20,") + 4));
}

TEST_CASE("shipped configs match the built-in reference configurations") {
    for (const std::string name :
         {"two_position", "slit", "double_slit", "stern_gerlach",
          "momentum_consistency", "triple_measurement"}) {
        const fs::path path = fs::path(BIWAVE_CONFIG_DIR) / (name + ".json");
        std::ifstream in(path);
        REQUIRE(in.good());
        const ScenarioConfig shipped = ScenarioConfig::from_json(nlohmann::json::parse(in));
        REQUIRE(shipped.to_json() == reference_config(name).to_json());
    }
}

TEST_CASE("scenario config validation rejects out-of-range snapshots") {
    ScenarioConfig cfg = reference_config("two_position");
    cfg.snapshot_times = {cfg.t1, cfg.t2 + 1.0};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
    cfg.snapshot_times = {cfg.t1 + 0.02, cfg.t1 + 0.01};
    REQUIRE_THROWS_AS(cfg.validate(), ConfigError);
}
