// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "d2dcache/cache.hpp"
#include "d2dcache/coverage.hpp"

namespace d2dcache {

/// Config/validation failure with the offending field path.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), field_path_(std::move(path)) {}

    const std::string& field_path() const noexcept { return field_path_; }

  private:
    std::string field_path_;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Network geometry and physical-layer parameters in the units the config
/// file uses. All downstream math goes through the SI accessors; dB and
/// per-km^2 values never leave this struct.
struct NetworkConfig {
    double lambda_p_per_km2 = 50.0; // cluster density
    int n = 10;                     // devices per cluster
    double sigma_m = 10.0;          // member displacement std deviation
    double lambda_bs_per_km2 = 5.0; // BS density (spatial sampling only)
    double p_d_dbm = 23.0;
    double p_b_dbm = 43.0;
    double w_d_mhz = 20.0;
    double w_b_mhz = 20.0;
    double theta_db = 0.0;
    double alpha = 4.0;

    double lambda_p_per_m2() const { return lambda_p_per_km2 * 1e-6; }
    double lambda_bs_per_m2() const { return lambda_bs_per_km2 * 1e-6; }
    double p_d_w() const { return dbm_to_watts(p_d_dbm); }
    double p_b_w() const { return dbm_to_watts(p_b_dbm); }
    double w_d_hz() const { return w_d_mhz * 1e6; }
    double w_b_hz() const { return w_b_mhz * 1e6; }
    double theta_linear() const { return db_to_linear(theta_db); }

    LinkParams d2d_link() const {
        return {theta_linear(), alpha, sigma_m, lambda_p_per_m2(), p_d_w(), w_d_hz()};
    }

    void validate(const std::string& path = "network") const {
        auto positive = [&path](double v, const char* field) {
            if (!(v > 0.0))
                throw ConfigError(path + "." + field, "must be > 0");
        };
        positive(lambda_p_per_km2, "lambda_p_per_km2");
        if (n < 1)
            throw ConfigError(path + ".n", "must be >= 1");
        positive(sigma_m, "sigma_m");
        positive(lambda_bs_per_km2, "lambda_bs_per_km2");
        positive(w_d_mhz, "w_d_mhz");
        positive(w_b_mhz, "w_b_mhz");
        if (!(alpha > 2.0))
            throw ConfigError(path + ".alpha", "must be > 2 (Gamma(1 - 2/alpha) pole at 2)");
        if (!(theta_linear() > 0.0))
            throw ConfigError(path + ".theta_db", "must map to a positive linear threshold");
        if (!(p_d_w() > 0.0) || !std::isfinite(p_d_w()))
            throw ConfigError(path + ".p_d_dbm", "must map to a finite positive power");
        if (!(p_b_w() > 0.0) || !std::isfinite(p_b_w()))
            throw ConfigError(path + ".p_b_dbm", "must map to a finite positive power");
    }
};

enum class ExperimentKind {
    fig3_coverage_vs_sigma,
    fig4_energy_vs_beta,
    fig5_energy_vs_n,
    validate_coverage,
    validate_laplace,
    validate_placement,
};

enum class Scheme { PC, CPF, RC, Zipf };

inline const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::PC: return "PC";
    case Scheme::CPF: return "CPF";
    case Scheme::RC: return "RC";
    case Scheme::Zipf: return "Zipf";
    }
    return "?";
}

inline ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "fig3" || name == "fig3_coverage_vs_sigma")
        return ExperimentKind::fig3_coverage_vs_sigma;
    if (name == "fig4" || name == "fig4_energy_vs_beta")
        return ExperimentKind::fig4_energy_vs_beta;
    if (name == "fig5" || name == "fig5_energy_vs_n")
        return ExperimentKind::fig5_energy_vs_n;
    if (name == "validate_coverage")
        return ExperimentKind::validate_coverage;
    if (name == "validate_laplace")
        return ExperimentKind::validate_laplace;
    if (name == "validate_placement")
        return ExperimentKind::validate_placement;
    throw ConfigError("experiment.kind", "unknown experiment kind '" + name + "'");
}

/// Monte Carlo execution settings. window_radius_m <= 0 selects the default
/// 20 / sqrt(lambda_p) window.
struct McSettings {
    std::int64_t realizations = 100000;
    double window_radius_m = 0.0;
};

/// A full experiment description: what to sweep, which schemes to compare,
/// and how many Monte Carlo realizations to spend per point.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::fig3_coverage_vs_sigma;
    std::vector<double> sigma_grid_m = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    std::vector<double> theta_db_grid = {0.0, 3.0};
    std::vector<double> beta_grid = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    std::vector<int> n_grid = {2,  3,  4,  5,  6,  7,  8,  9,  10, 11,
                               12, 13, 14, 15, 16, 17, 18, 19, 20};
    std::vector<Scheme> schemes = {Scheme::PC, Scheme::CPF, Scheme::RC, Scheme::Zipf};
    McSettings mc;

    void validate() const {
        auto non_empty = [](const auto& grid, const char* field) {
            if (grid.empty())
                throw ConfigError(std::string("experiment.sweep.") + field, "must be non-empty");
        };
        non_empty(sigma_grid_m, "sigma_m");
        non_empty(theta_db_grid, "theta_db");
        non_empty(beta_grid, "beta");
        non_empty(n_grid, "n");
        if (schemes.empty())
            throw ConfigError("experiment.schemes", "must be non-empty");
        if (mc.realizations < 1)
            throw ConfigError("experiment.mc.realizations", "must be >= 1");
        for (double s : sigma_grid_m)
            if (!(s > 0.0))
                throw ConfigError("experiment.sweep.sigma_m", "entries must be > 0");
        for (int n : n_grid)
            if (n < 1)
                throw ConfigError("experiment.sweep.n", "entries must be >= 1");
        for (double b : beta_grid)
            if (b < 0.0)
                throw ConfigError("experiment.sweep.beta", "entries must be >= 0");
    }
};

struct LoadedConfig {
    NetworkConfig network;
    ContentConfig content;
    ExperimentSpec experiment;
};

namespace detail {

inline const nlohmann::json& require_member(const nlohmann::json& obj, const std::string& path,
                                            const std::string& key) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError(path.empty() ? key : path + "." + key, "missing required field");
    return obj.at(key);
}

inline double require_number(const nlohmann::json& obj, const std::string& path,
                             const std::string& key) {
    const auto& v = require_member(obj, path, key);
    if (!v.is_number())
        throw ConfigError(path + "." + key, "must be a number");
    return v.get<double>();
}

inline int require_int(const nlohmann::json& obj, const std::string& path,
                       const std::string& key) {
    const auto& v = require_member(obj, path, key);
    if (!v.is_number_integer())
        throw ConfigError(path + "." + key, "must be an integer");
    return v.get<int>();
}

} // namespace detail

/// Parse and fully validate a config document. Units are converted to SI at
/// this boundary; everything downstream is linear/SI.
inline LoadedConfig parse_config(const nlohmann::json& doc) {
    LoadedConfig cfg;

    const auto& net = detail::require_member(doc, "", "network");
    cfg.network.lambda_p_per_km2 = detail::require_number(net, "network", "lambda_p_per_km2");
    cfg.network.n = detail::require_int(net, "network", "n");
    cfg.network.sigma_m = detail::require_number(net, "network", "sigma_m");
    cfg.network.lambda_bs_per_km2 = detail::require_number(net, "network", "lambda_bs_per_km2");
    cfg.network.p_d_dbm = detail::require_number(net, "network", "p_d_dbm");
    cfg.network.p_b_dbm = detail::require_number(net, "network", "p_b_dbm");
    cfg.network.w_d_mhz = detail::require_number(net, "network", "w_d_mhz");
    cfg.network.w_b_mhz = detail::require_number(net, "network", "w_b_mhz");
    cfg.network.theta_db = detail::require_number(net, "network", "theta_db");
    cfg.network.alpha = detail::require_number(net, "network", "alpha");
    cfg.network.validate();

    const auto& content = detail::require_member(doc, "", "content");
    cfg.content.n_files = detail::require_int(content, "content", "n_files");
    cfg.content.cache_size = detail::require_int(content, "content", "cache_size");
    cfg.content.zipf_beta = detail::require_number(content, "content", "zipf_beta");
    const double mean_size = detail::require_number(content, "content", "mean_size_mbits");
    if (content.contains("file_sizes_mbits")) {
        const auto& sizes = content.at("file_sizes_mbits");
        if (!sizes.is_array())
            throw ConfigError("content.file_sizes_mbits", "must be an array");
        cfg.content.file_sizes_mbits = sizes.get<std::vector<double>>();
    } else {
        if (!(mean_size > 0.0))
            throw ConfigError("content.mean_size_mbits", "must be > 0");
        cfg.content.file_sizes_mbits.assign(static_cast<std::size_t>(cfg.content.n_files),
                                            mean_size);
    }
    try {
        cfg.content.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError("content", err.what());
    }

    if (doc.contains("experiment")) {
        const auto& exp = doc.at("experiment");
        if (exp.contains("kind"))
            cfg.experiment.kind = parse_experiment_kind(exp.at("kind").get<std::string>());
        if (exp.contains("schemes")) {
            cfg.experiment.schemes.clear();
            for (const auto& s : exp.at("schemes")) {
                const std::string name = s.get<std::string>();
                if (name == "PC")
                    cfg.experiment.schemes.push_back(Scheme::PC);
                else if (name == "CPF")
                    cfg.experiment.schemes.push_back(Scheme::CPF);
                else if (name == "RC")
                    cfg.experiment.schemes.push_back(Scheme::RC);
                else if (name == "Zipf")
                    cfg.experiment.schemes.push_back(Scheme::Zipf);
                else
                    throw ConfigError("experiment.schemes", "unknown scheme '" + name + "'");
            }
        }
        if (exp.contains("sweep")) {
            const auto& sweep = exp.at("sweep");
            if (sweep.contains("sigma_m"))
                cfg.experiment.sigma_grid_m = sweep.at("sigma_m").get<std::vector<double>>();
            if (sweep.contains("theta_db"))
                cfg.experiment.theta_db_grid = sweep.at("theta_db").get<std::vector<double>>();
            if (sweep.contains("beta"))
                cfg.experiment.beta_grid = sweep.at("beta").get<std::vector<double>>();
            if (sweep.contains("n"))
                cfg.experiment.n_grid = sweep.at("n").get<std::vector<int>>();
        }
        if (exp.contains("mc")) {
            const auto& mc = exp.at("mc");
            if (mc.contains("realizations"))
                cfg.experiment.mc.realizations = mc.at("realizations").get<std::int64_t>();
            if (mc.contains("window_radius_m"))
                cfg.experiment.mc.window_radius_m = mc.at("window_radius_m").get<double>();
        }
    }
    cfg.experiment.validate();
    return cfg;
}

/// Load a config file from disk. Throws ConfigError with a field path on any
/// structural or invariant failure.
inline LoadedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& err) {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + err.what());
    }
    return parse_config(doc);
}

} // namespace d2dcache
