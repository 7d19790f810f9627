#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mrf/citest.hpp"
#include "mrf/format.hpp"
#include "mrf/graph.hpp"

namespace mrf {

enum class AssertionSource { EvaluatedFromData, InferredAsOne };

struct ScoredAssertion {
    Assertion assertion;
    AssertionSource source = AssertionSource::EvaluatedFromData;
    double log_value = 0.0; // log posterior when evaluated, exactly 0 when inferred
};

struct BlanketTerms {
    int variable = 0; // whose blanket closure these assertions cover
    std::vector<ScoredAssertion> terms;
};

struct ScoreBreakdown {
    UndirectedGraph graph;
    DegreeOrdering ordering;
    std::vector<BlanketTerms> blankets;
    double total = 0.0;

    size_t evaluated_count() const { return count(AssertionSource::EvaluatedFromData); }
    size_t inferred_count() const { return count(AssertionSource::InferredAsOne); }

private:
    size_t count(AssertionSource s) const {
        size_t c = 0;
        for (const auto& b : blankets)
            for (const auto& t : b.terms)
                if (t.source == s) ++c;
        return c;
    }
};

// The n-1 statements that pin down variable i's Markov blanket: independence
// of every non-neighbor given the full blanket, then dependence on every
// neighbor given the rest of the blanket.
inline std::vector<Assertion> blanket_closure(const UndirectedGraph& g, int i) {
    const std::vector<int> mb = blanket(g, i);
    std::vector<Assertion> out;
    out.reserve(static_cast<size_t>(g.n()) - 1);
    for (int k = 0; k < g.n(); ++k) {
        if (k == i || g.has_edge(i, k)) continue;
        out.push_back(Assertion::indep(i, k, mb));
    }
    for (int k : mb) {
        std::vector<int> z;
        z.reserve(mb.size() - 1);
        for (int m : mb)
            if (m != k) z.push_back(m);
        out.push_back(Assertion::dep(i, k, std::move(z)));
    }
    return out;
}

namespace detail {

inline void require_same_dims(const UndirectedGraph& g, const CiTestEngine& e) {
    if (g.n() != e.dataset().n_vars())
        throw std::invalid_argument("score: graph and dataset disagree on variable count");
}

} // namespace detail

// Blankets Joint Posterior, in log space. Blankets are scored in the
// degree ordering; each unordered pair is tested from data exactly once —
// in the blanket of whichever endpoint comes first — and inferred as
// probability one in the other endpoint's blanket. Exactly n(n-1)/2 test
// evaluations total.
inline ScoreBreakdown bjp_score(const UndirectedGraph& g, const CiTestEngine& e) {
    detail::require_same_dims(g, e);
    ScoreBreakdown b{g, degree_ordering(g), {}, 0.0};
    b.blankets.reserve(static_cast<size_t>(g.n()));
    for (int p = 0; p < g.n(); ++p) {
        const int v = b.ordering.psi[static_cast<size_t>(p)];
        BlanketTerms bt{v, {}};
        for (Assertion& a : blanket_closure(g, v)) {
            const int other = a.i == v ? a.k : a.i;
            if (b.ordering.rank[static_cast<size_t>(other)] > p) {
                const double lv = e.log_posterior(a);
                b.total += lv;
                bt.terms.push_back({std::move(a), AssertionSource::EvaluatedFromData, lv});
            } else {
                bt.terms.push_back({std::move(a), AssertionSource::InferredAsOne, 0.0});
            }
        }
        b.blankets.push_back(std::move(bt));
    }
    return b;
}

// Independence-based baseline score: every closure assertion of every
// blanket is evaluated from data (n(n-1) evaluations before caching) and
// the total is the sum of their log posteriors.
inline ScoreBreakdown ib_score(const UndirectedGraph& g, const CiTestEngine& e) {
    detail::require_same_dims(g, e);
    ScoreBreakdown b{g, degree_ordering(g), {}, 0.0};
    b.blankets.reserve(static_cast<size_t>(g.n()));
    for (int i = 0; i < g.n(); ++i) {
        BlanketTerms bt{i, {}};
        for (Assertion& a : blanket_closure(g, i)) {
            const double lv = e.log_posterior(a);
            b.total += lv;
            bt.terms.push_back({std::move(a), AssertionSource::EvaluatedFromData, lv});
        }
        b.blankets.push_back(std::move(bt));
    }
    return b;
}

// Sum of the evaluated log values whose target pair is {i, j}; the local
// share of the score attributable to that edge slot. Contributions over all
// pairs partition the total.
inline double edge_contribution(const ScoreBreakdown& b, int i, int j) {
    b.graph.check_node(i);
    b.graph.check_node(j);
    if (i == j) throw std::invalid_argument("edge_contribution: pair members must differ");
    if (i > j) std::swap(i, j);
    double s = 0.0;
    for (const auto& bt : b.blankets)
        for (const auto& t : bt.terms)
            if (t.source == AssertionSource::EvaluatedFromData && t.assertion.i == i &&
                t.assertion.k == j)
                s += t.log_value;
    return s;
}

// One assertion per line (kind, pair, conditioning set, source, log value),
// then the total. Stable across runs for fixed inputs.
inline std::string breakdown_report(const ScoreBreakdown& b) {
    std::ostringstream out;
    for (const auto& bt : b.blankets) {
        out << "blanket " << bt.variable << '\n';
        for (const auto& t : bt.terms) {
            out << "  " << t.assertion.to_string() << "  "
                << (t.source == AssertionSource::EvaluatedFromData ? "evaluated" : "inferred")
                << "  " << format_g17(t.log_value) << '\n';
        }
    }
    out << "total " << format_g17(b.total) << '\n';
    return out.str();
}

} // namespace mrf
