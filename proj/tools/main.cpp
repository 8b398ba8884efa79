// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.
//
// CLI entry point. Subcommands:
//   coverage    closed-form D2D/BS coverage for one parameter point, with an
//               optional Monte Carlo cross-check
//   optimize    solve the optimal caching distribution for a config file
//   experiment  run a full sweep (fig3|fig4|fig5|validate) and emit
//               results.csv / plot.svg

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "d2dcache/d2dcache.hpp"

namespace {

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("D2DCACHE_OUT_DIR"); env && *env)
        return env;
    return "out";
}

int report_checks(const std::vector<d2dcache::CheckResult>& checks,
                  const std::filesystem::path& out_dir) {
    bool all_ok = true;
    for (const auto& check : checks) {
        std::cout << (check.passed ? "[ok]   " : "[FAIL] ") << check.name;
        if (!check.detail.empty())
            std::cout << " (" << check.detail << ")";
        std::cout << '\n';
        all_ok &= check.passed;
    }
    if (!all_ok) {
        nlohmann::json failures = nlohmann::json::array();
        for (const auto& check : checks)
            if (!check.passed)
                failures.push_back({{"check", check.name}, {"detail", check.detail}});
        const auto path = out_dir / "failures.json";
        std::ofstream out(path);
        out << failures.dump(2) << '\n';
        std::cerr << failures.dump() << '\n';
        std::cerr << "failure list written to " << path.string() << '\n';
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustered D2D caching network analysis"};
    app.require_subcommand(1);

    // --- coverage ---
    double sigma = 10.0, theta_db = 0.0, alpha = 4.0, lambda_p_per_km2 = 50.0;
    double p_d_dbm = 23.0, window_m = 0.0;
    std::int64_t mc_realizations = 0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    auto* coverage = app.add_subcommand("coverage", "closed-form coverage at one point");
    coverage->add_option("--sigma", sigma, "displacement std deviation (m)")->required();
    coverage->add_option("--theta-db", theta_db, "SIR threshold (dB)");
    coverage->add_option("--alpha", alpha, "path-loss exponent");
    coverage->add_option("--lambda-p", lambda_p_per_km2, "cluster density (per km^2)");
    coverage->add_option("--p-d-dbm", p_d_dbm, "D2D transmit power (dBm)");
    coverage->add_option("--mc", mc_realizations, "Monte Carlo realizations (0 = skip)");
    coverage->add_option("--window", window_m, "simulation window radius (m, 0 = auto)");
    coverage->add_option("--seed", seed, "master seed");
    coverage->add_option("--threads", threads, "worker threads (0 = hardware)");

    // --- optimize ---
    std::string config_path;
    std::string out_dir_flag;
    auto* optimize = app.add_subcommand("optimize", "solve the optimal caching distribution");
    optimize->add_option("--config", config_path, "config file (JSON)")->required();
    optimize->add_option("--out", out_dir_flag, "output directory");

    // --- experiment ---
    std::string experiment_kind;
    std::string exp_config_path;
    std::string exp_out_dir;
    std::uint64_t exp_seed = 1;
    unsigned exp_threads = 0;
    auto* experiment = app.add_subcommand("experiment", "run a sweep and emit CSV/SVG");
    experiment->add_option("kind", experiment_kind, "fig3|fig4|fig5|validate")->required();
    experiment->add_option("--config", exp_config_path, "config file (JSON)")->required();
    experiment->add_option("--out", exp_out_dir, "output directory");
    experiment->add_option("--seed", exp_seed, "master seed");
    experiment->add_option("--threads", exp_threads, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (coverage->parsed()) {
            d2dcache::LinkParams link;
            link.sigma_m = sigma;
            link.theta = d2dcache::db_to_linear(theta_db);
            link.alpha = alpha;
            link.lambda_p_per_m2 = lambda_p_per_km2 * 1e-6;
            link.tx_power_w = d2dcache::dbm_to_watts(p_d_dbm);
            const auto d2d = d2dcache::d2d_coverage(link);
            const auto bs = d2dcache::bs_coverage(link.theta, alpha);
            std::cout << "d2d_coverage_analytic," << d2dcache::format_double(d2d.probability)
                      << '\n';
            std::cout << "bs_coverage_analytic," << d2dcache::format_double(bs.probability)
                      << '\n';
            if (mc_realizations > 0) {
                d2dcache::McConfig mc;
                mc.realizations = mc_realizations;
                mc.seed = seed;
                mc.window_radius_m = window_m;
                mc.network.sigma_m = sigma;
                mc.network.theta_db = theta_db;
                mc.network.alpha = alpha;
                mc.network.lambda_p_per_km2 = lambda_p_per_km2;
                mc.network.p_d_dbm = p_d_dbm;
                const auto estimate = d2dcache::simulate_d2d_coverage(mc, link.theta, threads);
                std::cout << "d2d_coverage_mc," << d2dcache::format_double(estimate.probability)
                          << ",ci," << d2dcache::format_double(estimate.ci_halfwidth)
                          << ",realizations," << estimate.realizations << '\n';
            }
            return 0;
        }

        if (optimize->parsed()) {
            const auto cfg = d2dcache::load_config(config_path);
            const auto params = d2dcache::make_energy_params(cfg.network, cfg.content);
            const auto solution = d2dcache::solve_optimal(params, cfg.content.cache_size);
            const auto report = d2dcache::cluster_energy(solution.policy, params);

            const std::filesystem::path out_dir =
                out_dir_flag.empty() ? default_out_dir() : std::filesystem::path(out_dir_flag);
            std::filesystem::create_directories(out_dir);

            const auto policy_path = out_dir / "optimal_policy.csv";
            std::ofstream policy_csv(policy_path, std::ios::binary);
            d2dcache::write_policy_csv(policy_csv, solution.policy);

            nlohmann::json summary{
                {"v_star", solution.multiplier},
                {"kkt_residual", solution.kkt_residual},
                {"iterations", solution.iterations},
                {"energy_joules", report.total_j},
                {"normalized_energy", report.per_device_normalized},
                {"cache_mass", solution.policy.total()},
            };
            if (!solution.note.empty())
                summary["note"] = solution.note;
            const auto summary_path = out_dir / "optimizer_result.json";
            std::ofstream summary_out(summary_path);
            summary_out << summary.dump(2) << '\n';

            std::cout << summary.dump(2) << '\n';
            std::cout << "policy written to " << policy_path.string() << '\n';
            return 0;
        }

        if (experiment->parsed()) {
            auto cfg = d2dcache::load_config(exp_config_path);
            const std::filesystem::path out_dir =
                exp_out_dir.empty() ? default_out_dir() : std::filesystem::path(exp_out_dir);

            d2dcache::ExperimentResult result;
            if (experiment_kind == "validate") {
                result = d2dcache::run_validate_all(cfg, exp_seed, exp_threads);
            } else {
                cfg.experiment.kind = d2dcache::parse_experiment_kind(experiment_kind);
                result = d2dcache::run_experiment(cfg, exp_seed, exp_threads);
            }

            const auto emitted = d2dcache::emit_outputs(result.table, result.plot, out_dir);
            if (!emitted.warning.empty())
                std::cerr << "warning: " << emitted.warning << '\n';
            std::cout << "results written to " << emitted.csv_path.string() << '\n';
            if (emitted.svg_written)
                std::cout << "plot written to " << emitted.svg_path.string() << '\n';
            return report_checks(result.checks, out_dir);
        }
    } catch (const d2dcache::ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
    return 0;
}
