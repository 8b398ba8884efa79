// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "d2dcache/rng.hpp"

namespace d2dcache {

/// Content library description: N_f files, per-device cache of M files,
/// Zipf exponent beta, per-file sizes in Mbit.
struct ContentConfig {
    int n_files = 500;
    int cache_size = 10; // M
    double zipf_beta = 1.0;
    std::vector<double> file_sizes_mbits; // size n_files once validated

    void validate() const {
        if (n_files < 1)
            throw std::invalid_argument("ContentConfig: n_files must be >= 1");
        if (cache_size < 1 || cache_size >= n_files)
            throw std::invalid_argument("ContentConfig: cache size must satisfy 1 <= M < N_f");
        if (zipf_beta < 0.0)
            throw std::invalid_argument("ContentConfig: zipf_beta must be >= 0");
        if (file_sizes_mbits.size() != static_cast<std::size_t>(n_files))
            throw std::invalid_argument("ContentConfig: file_sizes length != n_files");
        for (double s : file_sizes_mbits)
            if (!(s > 0.0))
                throw std::invalid_argument("ContentConfig: file sizes must be > 0");
    }
};

/// Request distribution over the library, descending.
struct Popularity {
    std::vector<double> q;
};

/// Per-file caching probabilities b with sum(b) = M.
struct CachingPolicy {
    std::vector<double> b;

    double total() const {
        double sum = 0.0;
        for (double v : b)
            sum += v;
        return sum;
    }

    /// Invariants: 0 <= b_i <= 1 and sum(b) within 1e-9 of an integer M >= 1.
    void validate() const {
        if (b.empty())
            throw std::invalid_argument("CachingPolicy: empty");
        for (double v : b)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("CachingPolicy: b_i outside [0,1]");
        const double sum = total();
        const double m = std::round(sum);
        if (m < 1.0 || std::abs(sum - m) > 1e-9)
            throw std::invalid_argument("CachingPolicy: sum(b) = " + std::to_string(sum) +
                                        " is not an integer cache size");
    }

    int cache_size() const { return static_cast<int>(std::lround(total())); }
};

/// Self/D2D/BS request-resolution probabilities per file.
struct AccessSplit {
    std::vector<double> p_self;
    std::vector<double> p_d2d;
    std::vector<double> p_bs;
};

/// Zipf popularity q_i = i^-beta / sum_k k^-beta (beta = 0 is uniform).
inline Popularity zipf_popularity(int n_files, double beta) {
    if (n_files < 1)
        throw std::invalid_argument("zipf_popularity: n_files must be >= 1");
    if (beta < 0.0)
        throw std::invalid_argument("zipf_popularity: beta must be >= 0");
    Popularity pop;
    pop.q.resize(static_cast<std::size_t>(n_files));
    double norm = 0.0;
    for (int i = 0; i < n_files; ++i) {
        pop.q[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i + 1), -beta);
        norm += pop.q[static_cast<std::size_t>(i)];
    }
    for (double& v : pop.q)
        v /= norm;
    return pop;
}

/// Deterministic core of the block placement sampler: the b_i amounts fill M
/// unit blocks sequentially, one shared u in [0,1) picks a segment in every
/// block. Returns M distinct 0-based file indices, ascending.
inline std::vector<int> place_files_at(const CachingPolicy& policy, double u) {
    policy.validate();
    if (!(u >= 0.0 && u < 1.0))
        throw std::invalid_argument("place_files_at: u must be in [0,1)");
    const int m = policy.cache_size();
    std::vector<double> edges(policy.b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < policy.b.size(); ++i) {
        acc += policy.b[i];
        edges[i] = acc;
    }
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(m));
    for (int block = 0; block < m; ++block) {
        const double target = static_cast<double>(block) + u;
        auto it = std::upper_bound(edges.begin(), edges.end(), target);
        if (it == edges.end())
            --it; // target fell past the last edge by rounding of sum(b)
        chosen.push_back(static_cast<int>(it - edges.begin()));
    }
    return chosen;
}

/// Random placement of exactly M distinct files per the block construction.
inline std::vector<int> place_files(const CachingPolicy& policy, RngStream& rng) {
    return place_files_at(policy, rng.uniform());
}

/// Closed-form request split for a cluster of n devices:
/// self = b_i, d2d = (1-b_i) - (1-b_i)^n, bs = (1-b_i)^n.
inline AccessSplit access_split(const CachingPolicy& policy, int n_devices) {
    if (n_devices < 1)
        throw std::invalid_argument("access_split: device count must be >= 1");
    AccessSplit split;
    const std::size_t n_files = policy.b.size();
    split.p_self.resize(n_files);
    split.p_d2d.resize(n_files);
    split.p_bs.resize(n_files);
    for (std::size_t i = 0; i < n_files; ++i) {
        const double miss = 1.0 - policy.b[i];
        const double all_miss = std::pow(miss, static_cast<double>(n_devices));
        split.p_self[i] = policy.b[i];
        split.p_d2d[i] = miss - all_miss;
        split.p_bs[i] = all_miss;
    }
    return split;
}

/// Cache-popular-files benchmark: the M most popular files, deterministically.
inline CachingPolicy baseline_cpf(const ContentConfig& content) {
    content.validate();
    CachingPolicy policy;
    policy.b.assign(static_cast<std::size_t>(content.n_files), 0.0);
    for (int i = 0; i < content.cache_size; ++i)
        policy.b[static_cast<std::size_t>(i)] = 1.0;
    return policy;
}

/// Random caching benchmark: b_i = M / N_f for every file.
inline CachingPolicy baseline_rc(const ContentConfig& content) {
    content.validate();
    CachingPolicy policy;
    policy.b.assign(static_cast<std::size_t>(content.n_files),
                    static_cast<double>(content.cache_size) / content.n_files);
    return policy;
}

/// Zipf-proportional benchmark: b_i proportional to q_i with sum M. Mass
/// exceeding 1 is clipped and redistributed over the remaining files until
/// every b_i <= 1.
inline CachingPolicy baseline_zipf(const ContentConfig& content) {
    content.validate();
    const Popularity pop = zipf_popularity(content.n_files, content.zipf_beta);
    const std::size_t n = pop.q.size();
    CachingPolicy policy;
    policy.b.assign(n, 0.0);
    std::vector<bool> clipped(n, false);
    double mass = static_cast<double>(content.cache_size);
    for (;;) {
        double weight = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (!clipped[i])
                weight += pop.q[i];
        for (std::size_t i = 0; i < n; ++i)
            if (!clipped[i])
                policy.b[i] = mass * pop.q[i] / weight;
        bool any_clipped = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!clipped[i] && policy.b[i] >= 1.0) {
                policy.b[i] = 1.0;
                clipped[i] = true;
                mass -= 1.0;
                any_clipped = true;
            }
        }
        if (!any_clipped)
            break;
    }
    return policy;
}

/// CSV serialization, columns: file_index,b.
inline void write_policy_csv(std::ostream& out, const CachingPolicy& policy) {
    out << "file_index,b\n";
    for (std::size_t i = 0; i < policy.b.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", policy.b[i]);
        out << i << ',' << buf << '\n';
    }
}

inline CachingPolicy read_policy_csv(std::istream& in) {
    CachingPolicy policy;
    std::string line;
    if (!std::getline(in, line) || line.rfind("file_index,b", 0) != 0)
        throw std::invalid_argument("read_policy_csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("read_policy_csv: malformed row: " + line);
        const std::size_t index = std::stoul(line.substr(0, comma));
        if (index != policy.b.size())
            throw std::invalid_argument("read_policy_csv: non-contiguous file_index");
        policy.b.push_back(std::stod(line.substr(comma + 1)));
    }
    policy.validate();
    return policy;
}

} // namespace d2dcache
