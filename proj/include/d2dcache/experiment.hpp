// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "d2dcache/cache.hpp"
#include "d2dcache/config.hpp"
#include "d2dcache/coverage.hpp"
#include "d2dcache/energy.hpp"
#include "d2dcache/io.hpp"
#include "d2dcache/monte_carlo.hpp"

namespace d2dcache {

/// One invariant verified during a run; failures drive the CLI exit code.
struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentResult {
    ResultTable table;
    PlotSpec plot;
    std::vector<CheckResult> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

inline void add_check(std::vector<CheckResult>& checks, std::string name, bool passed,
                      std::string detail) {
    checks.push_back({std::move(name), passed, std::move(detail)});
}

inline CachingPolicy scheme_policy(Scheme scheme, const EnergyParams& params,
                                   const ContentConfig& content) {
    switch (scheme) {
    case Scheme::PC: return solve_optimal(params, content.cache_size).policy;
    case Scheme::CPF: return baseline_cpf(content);
    case Scheme::RC: return baseline_rc(content);
    case Scheme::Zipf: return baseline_zipf(content);
    }
    throw std::logic_error("scheme_policy: unreachable");
}

/// Random feasible policy: uniform weights scaled to mass M with clipping,
/// used by the placement validation sweep.
inline CachingPolicy random_policy(int n_files, int cache_size, RngStream& rng) {
    std::vector<double> raw(static_cast<std::size_t>(n_files));
    for (double& v : raw)
        v = 0.05 + rng.uniform(); // bounded away from zero so scaling is stable
    CachingPolicy policy;
    policy.b.assign(raw.size(), 0.0);
    std::vector<bool> clipped(raw.size(), false);
    double mass = static_cast<double>(cache_size);
    for (;;) {
        double weight = 0.0;
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (!clipped[i])
                weight += raw[i];
        for (std::size_t i = 0; i < raw.size(); ++i)
            if (!clipped[i])
                policy.b[i] = mass * raw[i] / weight;
        bool any = false;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!clipped[i] && policy.b[i] >= 1.0) {
                policy.b[i] = 1.0;
                clipped[i] = true;
                mass -= 1.0;
                any = true;
            }
        }
        if (!any)
            break;
    }
    return policy;
}

} // namespace detail

/// Coverage-versus-sigma sweep: analytic curve plus Monte Carlo points with
/// confidence intervals, one curve per threshold.
inline ExperimentResult run_fig3(const LoadedConfig& cfg, std::uint64_t seed,
                                 unsigned threads = 0) {
    cfg.network.validate();
    cfg.experiment.validate();
    const auto& spec = cfg.experiment;

    ExperimentResult result;
    result.table.columns = {"sigma_m",         "theta_db",        "coverage_analytic",
                            "coverage_mc",     "mc_ci_halfwidth", "mc_realizations",
                            "lambda_p_per_km2", "alpha",          "window_radius_m",
                            "seed"};

    std::vector<double> thetas_linear;
    for (double theta_db : spec.theta_db_grid)
        thetas_linear.push_back(db_to_linear(theta_db));

    // analytic[t][s], mc[t][s] indexed by theta then sigma
    std::vector<std::vector<double>> analytic(spec.theta_db_grid.size()),
        mc_value(spec.theta_db_grid.size()), mc_ci(spec.theta_db_grid.size());

    McConfig mc;
    mc.realizations = spec.mc.realizations;
    mc.seed = seed;
    mc.window_radius_m = spec.mc.window_radius_m;
    mc.network = cfg.network;
    const double window = mc.effective_window_radius();

    for (double sigma : spec.sigma_grid_m) {
        mc.network.sigma_m = sigma;
        const auto estimates = simulate_d2d_coverage_multi(mc, thetas_linear, threads);
        for (std::size_t t = 0; t < thetas_linear.size(); ++t) {
            LinkParams link = cfg.network.d2d_link();
            link.sigma_m = sigma;
            link.theta = thetas_linear[t];
            const double exact = d2d_coverage(link).probability;
            analytic[t].push_back(exact);
            mc_value[t].push_back(estimates[t].probability);
            mc_ci[t].push_back(estimates[t].ci_halfwidth);
            result.table.rows.push_back({sigma, spec.theta_db_grid[t], exact,
                                         estimates[t].probability, estimates[t].ci_halfwidth,
                                         estimates[t].realizations, cfg.network.lambda_p_per_km2,
                                         cfg.network.alpha, window,
                                         static_cast<std::int64_t>(seed)});
        }
    }

    for (std::size_t t = 0; t < thetas_linear.size(); ++t) {
        bool decreasing = true;
        for (std::size_t s = 1; s < analytic[t].size(); ++s)
            decreasing &= analytic[t][s] < analytic[t][s - 1];
        detail::add_check(result.checks,
                          "analytic coverage strictly decreasing in sigma (theta_db=" +
                              format_double(spec.theta_db_grid[t], 6) + ")",
                          decreasing, "");

        double worst = 0.0;
        for (std::size_t s = 0; s < analytic[t].size(); ++s)
            worst = std::max(worst, std::abs(analytic[t][s] - mc_value[t][s]));
        detail::add_check(result.checks,
                          "analytic vs MC within 0.01 (theta_db=" +
                              format_double(spec.theta_db_grid[t], 6) + ")",
                          worst <= 0.01, "max |analytic - mc| = " + format_double(worst, 6));
    }
    if (thetas_linear.size() > 1) {
        // check thresholds in increasing order
        std::vector<std::size_t> order(thetas_linear.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return thetas_linear[a] < thetas_linear[b];
        });
        bool decreasing = true;
        for (std::size_t k = 1; k < order.size(); ++k)
            for (std::size_t s = 0; s < spec.sigma_grid_m.size(); ++s)
                decreasing &= analytic[order[k]][s] < analytic[order[k - 1]][s];
        detail::add_check(result.checks, "analytic coverage strictly decreasing in theta",
                          decreasing, "");
    }

    result.plot.title = "D2D coverage probability vs displacement std deviation";
    result.plot.x_label = "sigma (m)";
    result.plot.y_label = "coverage probability";
    for (std::size_t t = 0; t < thetas_linear.size(); ++t) {
        Series exact{"analytic, theta=" + format_double(spec.theta_db_grid[t], 6) + " dB", {}};
        Series sim{"MC, theta=" + format_double(spec.theta_db_grid[t], 6) + " dB", {}};
        for (std::size_t s = 0; s < spec.sigma_grid_m.size(); ++s) {
            exact.points.push_back({spec.sigma_grid_m[s], analytic[t][s]});
            sim.points.push_back({spec.sigma_grid_m[s], mc_value[t][s]});
        }
        result.plot.series.push_back(std::move(exact));
        result.plot.series.push_back(std::move(sim));
    }
    return result;
}

/// Normalized energy versus popularity exponent for the optimal distribution
/// and the benchmark schemes.
inline ExperimentResult run_fig4(const LoadedConfig& cfg, std::uint64_t seed) {
    cfg.network.validate();
    cfg.content.validate();
    cfg.experiment.validate();
    const auto& spec = cfg.experiment;

    ExperimentResult result;
    result.table.columns = {"beta",     "scheme",   "total_energy_j", "normalized_energy",
                            "n",        "n_files",  "cache_size",     "theta_db",
                            "alpha",    "lambda_p_per_km2", "sigma_m", "seed"};

    std::vector<double> betas = spec.beta_grid;
    std::sort(betas.begin(), betas.end());
    std::map<Scheme, std::vector<double>> normalized;

    for (double beta : betas) {
        ContentConfig content = cfg.content;
        content.zipf_beta = beta;
        const EnergyParams params = make_energy_params(cfg.network, content);
        for (Scheme scheme : spec.schemes) {
            const CachingPolicy policy = detail::scheme_policy(scheme, params, content);
            const EnergyReport report = cluster_energy(policy, params);
            normalized[scheme].push_back(report.per_device_normalized);
            result.table.rows.push_back(
                {beta, std::string(scheme_name(scheme)), report.total_j,
                 report.per_device_normalized, static_cast<std::int64_t>(cfg.network.n),
                 static_cast<std::int64_t>(content.n_files),
                 static_cast<std::int64_t>(content.cache_size), cfg.network.theta_db,
                 cfg.network.alpha, cfg.network.lambda_p_per_km2, cfg.network.sigma_m,
                 static_cast<std::int64_t>(seed)});
        }
    }

    const bool has_pc = normalized.count(Scheme::PC) != 0;
    if (has_pc) {
        bool dominant = true;
        double worst_gap = 0.0;
        for (const auto& [scheme, values] : normalized) {
            if (scheme == Scheme::PC)
                continue;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double gap = normalized.at(Scheme::PC)[i] - values[i];
                worst_gap = std::max(worst_gap, gap);
                dominant &= gap <= 1e-9;
            }
        }
        detail::add_check(result.checks, "optimal scheme minimal at every beta", dominant,
                          "max (PC - other) = " + format_double(worst_gap, 6));
    }
    if (normalized.count(Scheme::RC)) {
        const auto& rc = normalized.at(Scheme::RC);
        const auto [lo, hi] = std::minmax_element(rc.begin(), rc.end());
        detail::add_check(result.checks, "RC energy constant across beta", *hi - *lo <= 1e-9,
                          "range = " + format_double(*hi - *lo, 6));
    }
    for (Scheme scheme : {Scheme::CPF, Scheme::Zipf}) {
        if (!normalized.count(scheme))
            continue;
        const auto& values = normalized.at(scheme);
        bool non_increasing = true;
        for (std::size_t i = 1; i < values.size(); ++i)
            non_increasing &= values[i] <= values[i - 1] + 1e-12;
        detail::add_check(result.checks,
                          std::string(scheme_name(scheme)) + " energy non-increasing in beta",
                          non_increasing, "");
    }
    if (!betas.empty() && betas.front() == 0.0 && normalized.count(Scheme::RC) &&
        normalized.count(Scheme::Zipf)) {
        const double gap =
            std::abs(normalized.at(Scheme::RC).front() - normalized.at(Scheme::Zipf).front());
        detail::add_check(result.checks, "Zipf scheme equals RC at beta=0", gap <= 1e-12,
                          "|Zipf - RC| = " + format_double(gap, 6));
    }

    result.plot.title = "Normalized energy vs popularity exponent";
    result.plot.x_label = "beta";
    result.plot.y_label = "normalized energy";
    for (Scheme scheme : spec.schemes) {
        Series series{scheme_name(scheme), {}};
        for (std::size_t i = 0; i < betas.size(); ++i)
            series.points.push_back({betas[i], normalized.at(scheme)[i]});
        result.plot.series.push_back(std::move(series));
    }
    return result;
}

/// Normalized energy versus cluster size; the optimal distribution is
/// re-solved at every n.
inline ExperimentResult run_fig5(const LoadedConfig& cfg, std::uint64_t seed) {
    cfg.network.validate();
    cfg.content.validate();
    cfg.experiment.validate();
    const auto& spec = cfg.experiment;

    ExperimentResult result;
    result.table.columns = {"n",        "scheme",  "total_energy_j", "normalized_energy",
                            "beta",     "n_files", "cache_size",     "theta_db",
                            "alpha",    "lambda_p_per_km2", "sigma_m", "seed"};

    std::vector<int> n_grid = spec.n_grid;
    std::sort(n_grid.begin(), n_grid.end());
    std::map<Scheme, std::vector<double>> normalized;

    for (int n : n_grid) {
        NetworkConfig network = cfg.network;
        network.n = n;
        const EnergyParams params = make_energy_params(network, cfg.content);
        for (Scheme scheme : spec.schemes) {
            const CachingPolicy policy = detail::scheme_policy(scheme, params, cfg.content);
            const EnergyReport report = cluster_energy(policy, params);
            normalized[scheme].push_back(report.per_device_normalized);
            result.table.rows.push_back(
                {static_cast<std::int64_t>(n), std::string(scheme_name(scheme)),
                 report.total_j, report.per_device_normalized, cfg.content.zipf_beta,
                 static_cast<std::int64_t>(cfg.content.n_files),
                 static_cast<std::int64_t>(cfg.content.cache_size), cfg.network.theta_db,
                 cfg.network.alpha, cfg.network.lambda_p_per_km2, cfg.network.sigma_m,
                 static_cast<std::int64_t>(seed)});
        }
    }

    if (normalized.count(Scheme::PC)) {
        const auto& pc = normalized.at(Scheme::PC);
        bool non_increasing = true;
        for (std::size_t i = 1; i < pc.size(); ++i)
            non_increasing &= pc[i] <= pc[i - 1] + 1e-12;
        detail::add_check(result.checks, "optimal energy non-increasing in n", non_increasing,
                          "");
        if (pc.size() >= 3) {
            const double early_drop = pc.front() - pc[2];
            const double late_drop = pc[pc.size() - 3] - pc.back();
            detail::add_check(result.checks, "energy gain flattens at large n",
                              late_drop < early_drop,
                              "late drop " + format_double(late_drop, 6) + " vs early drop " +
                                  format_double(early_drop, 6));
        }
    }

    result.plot.title = "Normalized energy vs devices per cluster";
    result.plot.x_label = "n (devices per cluster)";
    result.plot.y_label = "normalized energy";
    for (Scheme scheme : spec.schemes) {
        Series series{scheme_name(scheme), {}};
        for (std::size_t i = 0; i < n_grid.size(); ++i)
            series.points.push_back({static_cast<double>(n_grid[i]), normalized.at(scheme)[i]});
        result.plot.series.push_back(std::move(series));
    }
    return result;
}

namespace detail {

inline void validate_coverage_suite(const LoadedConfig& cfg, std::uint64_t seed,
                                    unsigned threads, ExperimentResult& result) {
    const auto& spec = cfg.experiment;
    McConfig mc;
    mc.realizations = spec.mc.realizations;
    mc.seed = seed;
    mc.window_radius_m = spec.mc.window_radius_m;
    mc.network = cfg.network;
    const double theta = cfg.network.theta_linear();
    for (double sigma : spec.sigma_grid_m) {
        mc.network.sigma_m = sigma;
        const CoverageResult estimate = simulate_d2d_coverage(mc, theta, threads);
        LinkParams link = cfg.network.d2d_link();
        link.sigma_m = sigma;
        const double exact = d2d_coverage(link).probability;
        const double gap = std::abs(exact - estimate.probability);
        result.table.rows.push_back({std::string("coverage sigma=") + format_double(sigma, 6),
                                     static_cast<std::int64_t>(gap <= 0.01),
                                     estimate.probability, exact, 0.01,
                                     "ci=" + format_double(estimate.ci_halfwidth, 4)});
        add_check(result.checks,
                  "coverage MC matches closed form at sigma=" + format_double(sigma, 6),
                  gap <= 0.01, "|exact - mc| = " + format_double(gap, 6));
    }
}

inline void validate_laplace_suite(const LoadedConfig& cfg, std::uint64_t seed,
                                   unsigned threads, ExperimentResult& result) {
    McConfig mc;
    mc.realizations = cfg.experiment.mc.realizations;
    mc.seed = seed;
    mc.window_radius_m = cfg.experiment.mc.window_radius_m;
    mc.network = cfg.network;

    const double p_d = cfg.network.p_d_w();
    std::vector<double> s_values;
    for (double scaled : {0.01, 0.1, 1.0, 10.0, 100.0})
        s_values.push_back(scaled / p_d); // s P_d spans three decades around 1
    const auto estimates = estimate_laplace_multi(mc, s_values, threads);
    for (std::size_t j = 0; j < s_values.size(); ++j) {
        const double exact = laplace_inter_cluster(s_values[j], cfg.network.lambda_p_per_m2(),
                                                   p_d, cfg.network.alpha);
        const double gap = std::abs(exact - estimates[j].value);
        const bool ok = gap <= estimates[j].ci_halfwidth;
        result.table.rows.push_back(
            {std::string("laplace sP_d=") + format_double(s_values[j] * p_d, 6),
             static_cast<std::int64_t>(ok), estimates[j].value, exact,
             estimates[j].ci_halfwidth, ""});
        add_check(result.checks,
                  "Laplace estimate within CI at sP_d=" + format_double(s_values[j] * p_d, 6),
                  ok, "|exact - mc| = " + format_double(gap, 8) + ", ci = " +
                          format_double(estimates[j].ci_halfwidth, 8));
    }

    // displacement invariance: the transform does not depend on sigma
    McConfig mc5 = mc;
    mc5.network.sigma_m = 5.0;
    McConfig mc40 = mc;
    mc40.network.sigma_m = 40.0;
    mc40.seed = mix64(seed + 1); // independent samples for the two sigmas
    const double s_mid = 1.0 / p_d;
    const LaplaceEstimate e5 = estimate_laplace(mc5, s_mid, threads);
    const LaplaceEstimate e40 = estimate_laplace(mc40, s_mid, threads);
    const double gap = std::abs(e5.value - e40.value);
    const bool ok = gap <= e5.ci_halfwidth + e40.ci_halfwidth;
    result.table.rows.push_back({std::string("laplace sigma-invariance"),
                                 static_cast<std::int64_t>(ok), e5.value, e40.value,
                                 e5.ci_halfwidth + e40.ci_halfwidth, "sigma 5 vs 40"});
    add_check(result.checks, "Laplace estimate independent of sigma (5 vs 40 m)", ok,
              "|L(5) - L(40)| = " + format_double(gap, 8));
}

inline void validate_placement_suite(const LoadedConfig& cfg, std::uint64_t seed,
                                     ExperimentResult& result) {
    const int n_files = cfg.content.n_files;
    const int cache_size = cfg.content.cache_size;
    constexpr int kPolicies = 5;
    constexpr std::int64_t kDraws = 100000;

    for (int p = 0; p < kPolicies; ++p) {
        RngStream policy_rng(seed, 1000 + static_cast<std::uint64_t>(p));
        const CachingPolicy policy = random_policy(n_files, cache_size, policy_rng);
        std::vector<std::int64_t> hits(policy.b.size(), 0);
        bool distinct_ok = true;
        RngStream draw_rng(seed, 2000 + static_cast<std::uint64_t>(p));
        for (std::int64_t d = 0; d < kDraws; ++d) {
            const auto chosen = place_files(policy, draw_rng);
            distinct_ok &= chosen.size() == static_cast<std::size_t>(cache_size);
            for (std::size_t k = 1; k < chosen.size(); ++k)
                distinct_ok &= chosen[k] != chosen[k - 1];
            for (int file : chosen)
                ++hits[static_cast<std::size_t>(file)];
        }
        double max_z = 0.0;
        for (std::size_t i = 0; i < policy.b.size(); ++i) {
            const double expected = policy.b[i];
            const double freq =
                static_cast<double>(hits[i]) / static_cast<double>(kDraws);
            const double sd =
                std::sqrt(std::max(expected * (1.0 - expected), 1e-300) /
                          static_cast<double>(kDraws));
            if (expected <= 0.0 || expected >= 1.0) {
                if (freq != expected)
                    max_z = std::numeric_limits<double>::infinity();
                continue;
            }
            max_z = std::max(max_z, std::abs(freq - expected) / sd);
        }
        // 4.5 sigma: comfortably beyond 3-sigma noise for hundreds of files
        const bool freq_ok = max_z <= 4.5;
        result.table.rows.push_back({std::string("placement policy ") + std::to_string(p),
                                     static_cast<std::int64_t>(distinct_ok && freq_ok), max_z,
                                     0.0, 4.5, "max |freq-b|/sd over files"});
        add_check(result.checks, "placement marginals match policy " + std::to_string(p),
                  freq_ok, "max z = " + format_double(max_z, 4));
        add_check(result.checks,
                  "placement draws exactly M distinct files, policy " + std::to_string(p),
                  distinct_ok, "");
    }
}

} // namespace detail

/// Validation experiments; `kind` selects one suite, run_validate_all runs
/// the full set.
inline ExperimentResult run_validate(const LoadedConfig& cfg, ExperimentKind kind,
                                     std::uint64_t seed, unsigned threads = 0) {
    ExperimentResult result;
    result.table.columns = {"check", "passed", "observed", "expected", "tolerance", "detail"};
    switch (kind) {
    case ExperimentKind::validate_coverage:
        detail::validate_coverage_suite(cfg, seed, threads, result);
        break;
    case ExperimentKind::validate_laplace:
        detail::validate_laplace_suite(cfg, seed, threads, result);
        break;
    case ExperimentKind::validate_placement:
        detail::validate_placement_suite(cfg, seed, result);
        break;
    default:
        throw std::invalid_argument("run_validate: not a validation kind");
    }
    return result;
}

inline ExperimentResult run_validate_all(const LoadedConfig& cfg, std::uint64_t seed,
                                         unsigned threads = 0) {
    ExperimentResult result;
    result.table.columns = {"check", "passed", "observed", "expected", "tolerance", "detail"};
    detail::validate_coverage_suite(cfg, seed, threads, result);
    detail::validate_laplace_suite(cfg, seed, threads, result);
    detail::validate_placement_suite(cfg, seed, result);
    return result;
}

/// Dispatch on the experiment kind in the config.
inline ExperimentResult run_experiment(const LoadedConfig& cfg, std::uint64_t seed,
                                       unsigned threads = 0) {
    switch (cfg.experiment.kind) {
    case ExperimentKind::fig3_coverage_vs_sigma: return run_fig3(cfg, seed, threads);
    case ExperimentKind::fig4_energy_vs_beta: return run_fig4(cfg, seed);
    case ExperimentKind::fig5_energy_vs_n: return run_fig5(cfg, seed);
    case ExperimentKind::validate_coverage:
    case ExperimentKind::validate_laplace:
    case ExperimentKind::validate_placement:
        return run_validate(cfg, cfg.experiment.kind, seed, threads);
    }
    throw std::logic_error("run_experiment: unreachable");
}

} // namespace d2dcache
