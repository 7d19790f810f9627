#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mrf/dataset.hpp"
#include "mrf/rng.hpp"

namespace mrf {

inline double log_sum_exp(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// log(1 - exp(x)) for x <= 0 without losing precision near either end.
inline double log1mexp(double x) {
    if (x >= 0.0) return -std::numeric_limits<double>::infinity();
    if (x > -0.6931471805599453)  // -ln 2
        return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

// Log marginal likelihood of counts under a symmetric Dirichlet(alpha) prior
// on a multinomial over `cells` categories:
//   lgamma(A) - lgamma(A+N) + sum_c [lgamma(alpha+n_c) - lgamma(alpha)]
// with A = alpha * cells and N the count total. Zero cells contribute nothing.
inline double log_dirichlet_multinomial(const std::int64_t* counts, int cells, double alpha) {
    std::int64_t total = 0;
    double s = 0.0;
    for (int c = 0; c < cells; ++c) {
        if (counts[c] == 0) continue;
        total += counts[c];
        s += std::lgamma(alpha + static_cast<double>(counts[c])) - std::lgamma(alpha);
    }
    const double a = alpha * cells;
    return std::lgamma(a) - std::lgamma(a + static_cast<double>(total)) + s;
}

inline double log_dirichlet_multinomial(const std::vector<std::int64_t>& counts, double alpha) {
    return log_dirichlet_multinomial(counts.data(), static_cast<int>(counts.size()), alpha);
}

enum class AssertionKind { Independence, Dependence };

// One conditional (in)dependence statement (i _||_ k | Z) in canonical form:
// i < k, Z sorted ascending and disjoint from {i, k}. The two orientations of
// a pair denote the same assertion.
struct Assertion {
    AssertionKind kind = AssertionKind::Independence;
    int i = 0;
    int k = 0;
    std::vector<int> z;

    static Assertion make(AssertionKind kind, int i, int k, std::vector<int> z) {
        if (i == k) throw std::invalid_argument("assertion: target variables must differ");
        if (i > k) std::swap(i, k);
        std::sort(z.begin(), z.end());
        z.erase(std::unique(z.begin(), z.end()), z.end());
        if (std::binary_search(z.begin(), z.end(), i) || std::binary_search(z.begin(), z.end(), k))
            throw std::invalid_argument("assertion: conditioning set overlaps the target pair");
        return Assertion{kind, i, k, std::move(z)};
    }

    static Assertion indep(int i, int k, std::vector<int> z = {}) {
        return make(AssertionKind::Independence, i, k, std::move(z));
    }
    static Assertion dep(int i, int k, std::vector<int> z = {}) {
        return make(AssertionKind::Dependence, i, k, std::move(z));
    }

    Assertion negated() const {
        Assertion a = *this;
        a.kind = kind == AssertionKind::Independence ? AssertionKind::Dependence
                                                     : AssertionKind::Independence;
        return a;
    }

    friend bool operator==(const Assertion& a, const Assertion& b) {
        return a.kind == b.kind && a.i == b.i && a.k == b.k && a.z == b.z;
    }
    friend bool operator<(const Assertion& a, const Assertion& b) {
        if (a.i != b.i) return a.i < b.i;
        if (a.k != b.k) return a.k < b.k;
        if (a.z != b.z) return a.z < b.z;
        return a.kind < b.kind;
    }

    std::string to_string() const {
        std::ostringstream out;
        out << (kind == AssertionKind::Independence ? "indep" : "dep") << ' ' << i << ' ' << k << " |";
        for (int v : z) out << ' ' << v;
        return out.str();
    }
};

struct CiTestOptions {
    double alpha = 1.0;              // Dirichlet pseudo-count per joint cell
    double marginal_alpha = 1.0;     // pseudo-count per marginal cell
    double prior_independence = 0.5; // hypothesis prior
};

// Bayesian test of conditional independence on discrete data. For each
// observed Z-configuration the dependent model is one multinomial over the
// r_i x r_k joint table and the independent model is the product of the two
// marginal multinomials; both are scored by their Dirichlet-multinomial
// marginal likelihood and combined into a posterior over the two hypotheses.
//
// Results are memoized per canonical (i, k, Z); the cache is internally
// synchronized so one engine can serve concurrent readers. Everything is
// deterministic, so cached and recomputed values are bit-identical.
class CiTestEngine {
public:
    explicit CiTestEngine(const Dataset& data, CiTestOptions opt = {})
        : data_(&data), opt_(opt) {
        if (!(opt_.alpha > 0.0) || !(opt_.marginal_alpha > 0.0))
            throw std::invalid_argument("citest: pseudo-counts must be positive");
        if (!(opt_.prior_independence > 0.0) || !(opt_.prior_independence < 1.0))
            throw std::invalid_argument("citest: independence prior must lie in (0,1)");
        log_prior_ind_ = std::log(opt_.prior_independence);
        log_prior_dep_ = std::log1p(-opt_.prior_independence);
    }

    const Dataset& dataset() const { return *data_; }
    const CiTestOptions& options() const { return opt_; }

    // log P(i _||_ k | Z given the data), always in (-inf, 0].
    double log_posterior_independence(int i, int k, std::vector<int> z) const {
        if (i == k) throw std::invalid_argument("citest: target variables must differ");
        Key key{std::min(i, k), std::max(i, k), std::move(z)};
        std::sort(key.z.begin(), key.z.end());
        key.z.erase(std::unique(key.z.begin(), key.z.end()), key.z.end());
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const double value = compute(key);
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.emplace(std::move(key), value).first->second;
    }

    double log_posterior(const Assertion& a) const {
        const double ind = log_posterior_independence(a.i, a.k, a.z);
        return a.kind == AssertionKind::Independence ? ind : log1mexp(ind);
    }

    // Number of distinct tests computed from data so far.
    size_t tests_computed() const {
        std::lock_guard<std::mutex> lock(mu_);
        return cache_.size();
    }

private:
    struct Key {
        int a;
        int b;
        std::vector<int> z;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        size_t operator()(const Key& k) const {
            std::uint64_t h = 0xcbf29ce484222325ULL;
            auto mix = [&h](std::uint64_t v) {
                h ^= v;
                h *= 0x100000001b3ULL;
            };
            mix(static_cast<std::uint64_t>(k.a));
            mix(static_cast<std::uint64_t>(k.b));
            for (int v : k.z) mix(static_cast<std::uint64_t>(v) + 0x9e3779b9ULL);
            return static_cast<size_t>(h);
        }
    };

    double compute(const Key& key) const {
        const ContingencyTable table = count_table(*data_, key.a, key.b, key.z);
        double log_ml_dep = 0.0;
        double log_ml_ind = 0.0;
        std::vector<std::int64_t> rows(table.ri), cols(table.rk);
        for (const auto& [cfg, counts] : table.configs) {
            log_ml_dep += log_dirichlet_multinomial(counts, opt_.alpha);
            std::fill(rows.begin(), rows.end(), 0);
            std::fill(cols.begin(), cols.end(), 0);
            for (int a = 0; a < table.ri; ++a)
                for (int b = 0; b < table.rk; ++b) {
                    const std::int64_t c = counts[static_cast<size_t>(a) * table.rk + b];
                    rows[a] += c;
                    cols[b] += c;
                }
            log_ml_ind += log_dirichlet_multinomial(rows, opt_.marginal_alpha) +
                          log_dirichlet_multinomial(cols, opt_.marginal_alpha);
        }
        const double li = log_prior_ind_ + log_ml_ind;
        const double ld = log_prior_dep_ + log_ml_dep;
        return li - log_sum_exp(li, ld);
    }

    const Dataset* data_;
    CiTestOptions opt_;
    double log_prior_ind_ = 0.0;
    double log_prior_dep_ = 0.0;
    mutable std::mutex mu_;
    mutable std::unordered_map<Key, double, KeyHash> cache_;
};

} // namespace mrf
