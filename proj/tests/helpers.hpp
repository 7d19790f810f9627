#pragma once

// Shared fixtures and independent oracles for the test suite. The oracles
// deliberately avoid the library's lgamma/caching code paths: marginal
// likelihoods come from exact integer factorials and joints from brute-force
// enumeration, so agreement is meaningful.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mrf/citest.hpp"
#include "mrf/dataset.hpp"
#include "mrf/graph.hpp"
#include "mrf/io.hpp"
#include "mrf/mrf_sim.hpp"
#include "mrf/rng.hpp"

namespace testutil {

inline std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Exact log marginal likelihood for unit pseudo-counts:
//   DM(counts) = (C-1)! * prod(n_c!) / (N+C-1)!
// All factorials stay far below 2^53 for the N <= 6 tables this serves, so
// the double conversions are exact and the only rounding is in std::log.
inline double log_dm_factorial(const std::vector<std::int64_t>& counts) {
    const int cells = static_cast<int>(counts.size());
    std::int64_t total = 0;
    double log_num = std::log(static_cast<double>(factorial(cells - 1)));
    for (std::int64_t c : counts) {
        total += c;
        log_num += std::log(static_cast<double>(factorial(static_cast<int>(c))));
    }
    return log_num - std::log(static_cast<double>(factorial(static_cast<int>(total) + cells - 1)));
}

// Brute-force posterior of independence with unit pseudo-counts: recounts
// the data directly and uses the factorial oracle per Z-configuration.
inline double oracle_log_posterior_indep(const mrf::Dataset& d, int i, int k, std::vector<int> z,
                                         double prior_independence = 0.5) {
    const int ri = d.cardinality(i);
    const int rk = d.cardinality(k);
    std::map<std::vector<int>, std::vector<std::int64_t>> groups;
    for (int r = 0; r < d.n_rows(); ++r) {
        std::vector<int> cfg;
        for (int v : z) cfg.push_back(d.value(r, v));
        auto& counts = groups[cfg];
        if (counts.empty()) counts.assign(static_cast<size_t>(ri) * rk, 0);
        ++counts[static_cast<size_t>(d.value(r, i)) * rk + d.value(r, k)];
    }
    double log_ml_dep = 0.0, log_ml_ind = 0.0;
    for (const auto& [cfg, counts] : groups) {
        log_ml_dep += log_dm_factorial(counts);
        std::vector<std::int64_t> rows(static_cast<size_t>(ri), 0), cols(static_cast<size_t>(rk), 0);
        for (int a = 0; a < ri; ++a)
            for (int b = 0; b < rk; ++b) {
                rows[static_cast<size_t>(a)] += counts[static_cast<size_t>(a) * rk + b];
                cols[static_cast<size_t>(b)] += counts[static_cast<size_t>(a) * rk + b];
            }
        log_ml_ind += log_dm_factorial(rows) + log_dm_factorial(cols);
    }
    // log( pi*MLi / (pi*MLi + (1-pi)*MLd) ) without the library's logsumexp
    const double log_odds =
        std::log1p(-prior_independence) - std::log(prior_independence) + log_ml_dep - log_ml_ind;
    return -std::log1p(std::exp(log_odds));
}

// Row-major state index with variable 0 most significant.
inline size_t state_index(const std::vector<int>& state, const std::vector<int>& cards) {
    size_t idx = 0;
    for (size_t v = 0; v < state.size(); ++v)
        idx = idx * static_cast<size_t>(cards[v]) + static_cast<size_t>(state[v]);
    return idx;
}

inline size_t joint_size(const std::vector<int>& cards) {
    size_t s = 1;
    for (int c : cards) s *= static_cast<size_t>(c);
    return s;
}

// Normalized joint of the model by full enumeration of its factorization.
inline std::vector<double> exact_joint(const mrf::MrfModel& m) {
    const std::vector<int>& cards = m.cards;
    const int n = m.graph.n();
    std::vector<double> joint(joint_size(cards), 0.0);
    std::vector<int> state(static_cast<size_t>(n), 0);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (const mrf::CliquePotential& c : m.cliques) {
            size_t idx = 0;
            for (int v : c.members)
                idx = idx * static_cast<size_t>(cards[static_cast<size_t>(v)]) +
                      static_cast<size_t>(state[static_cast<size_t>(v)]);
            w *= c.values[idx];
        }
        joint[state_index(state, cards)] = w;
        total += w;
        int v = n - 1;
        while (v >= 0 && ++state[static_cast<size_t>(v)] == cards[static_cast<size_t>(v)]) {
            state[static_cast<size_t>(v)] = 0;
            --v;
        }
        if (v < 0) break;
    }
    for (double& p : joint) p /= total;
    return joint;
}

inline std::vector<double> empirical_joint(const mrf::Dataset& d) {
    std::vector<double> joint(joint_size(d.cardinalities()), 0.0);
    std::vector<int> state(static_cast<size_t>(d.n_vars()));
    for (int r = 0; r < d.n_rows(); ++r) {
        for (int v = 0; v < d.n_vars(); ++v) state[static_cast<size_t>(v)] = d.value(r, v);
        joint[state_index(state, d.cardinalities())] += 1.0;
    }
    for (double& p : joint) p /= static_cast<double>(d.n_rows());
    return joint;
}

inline double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / 2.0;
}

inline mrf::Dataset random_dataset(int n_vars, int n_rows, int card, mrf::Rng& rng) {
    std::vector<int> values(static_cast<size_t>(n_vars) * n_rows);
    for (int& v : values) v = mrf::uniform_index(rng, card);
    return mrf::Dataset(n_vars, std::vector<int>(static_cast<size_t>(n_vars), card), std::move(values));
}

// Scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        std::string tpl = (std::filesystem::temp_directory_path() / "mrftest-XXXXXX").string();
        if (!mkdtemp(tpl.data())) throw std::runtime_error("mkdtemp failed");
        path_ = tpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Run the CLI with shell-quoted arguments, capturing both streams.
inline CliResult run_cli(const std::string& cli_path, const std::string& args) {
    TempDir dir;
    const std::string out_path = dir.file("out");
    const std::string err_path = dir.file("err");
    const std::string cmd = cli_path + " " + args + " >" + out_path + " 2>" + err_path;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = mrf::read_text_file(out_path);
    r.err = mrf::read_text_file(err_path);
    return r;
}

} // namespace testutil
