#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "mrf/scores.hpp"

namespace mrf {

using ScoreFunction = std::function<ScoreBreakdown(const UndirectedGraph&, const CiTestEngine&)>;

struct TrajectoryStep {
    int i = 0;
    int j = 0;        // edge slot flipped to reach this state
    double score = 0; // total after accepting the flip
};

struct SearchResult {
    UndirectedGraph best_graph{1};
    double best_score = -std::numeric_limits<double>::infinity();
    std::uint64_t iterations = 0;  // proposal steps (hill climb) / graphs visited (exhaustive)
    std::uint64_t evaluations = 0; // full score computations
    std::vector<TrajectoryStep> trajectory; // accepted moves, scores strictly increasing
};

struct ExhaustiveOptions {
    int max_n = 6;   // 2^C(6,2) = 32768 graphs; raise consciously
    int threads = 1; // partitioning never changes the result
};

// Score every graph on n nodes by walking edge-set bitmasks in ascending
// order; ties go to the smallest bitmask, so the result is deterministic and
// independent of how the range is partitioned across threads.
inline SearchResult exhaustive_search(int n, const ScoreFunction& score, const CiTestEngine& e,
                                      ExhaustiveOptions opt = {}) {
    if (n < 1) throw std::invalid_argument("exhaustive_search: need at least one node");
    if (n > opt.max_n) throw std::invalid_argument("exhaustive_search: node count exceeds the cap");
    const int slots = pair_count(n);
    if (slots >= 63) throw std::invalid_argument("exhaustive_search: search space too large");
    const std::uint64_t total = std::uint64_t{1} << slots;

    struct Local {
        double best = -std::numeric_limits<double>::infinity();
        std::uint64_t mask = 0;
        bool any = false;
    };
    auto scan = [&](std::uint64_t lo, std::uint64_t hi, Local& out) {
        for (std::uint64_t mask = lo; mask < hi; ++mask) {
            const double s = score(graph_from_mask(n, mask), e).total;
            if (!out.any || s > out.best) {
                out.any = true;
                out.best = s;
                out.mask = mask;
            }
        }
    };

    int workers = opt.threads < 1 ? 1 : opt.threads;
    if (static_cast<std::uint64_t>(workers) > total) workers = static_cast<int>(total);
    std::vector<Local> locals(static_cast<size_t>(workers));
    if (workers == 1) {
        scan(0, total, locals[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const std::uint64_t lo = total / workers * w + std::min<std::uint64_t>(w, total % workers);
            const std::uint64_t len = total / workers + (static_cast<std::uint64_t>(w) < total % workers ? 1 : 0);
            pool.emplace_back(scan, lo, lo + len, std::ref(locals[static_cast<size_t>(w)]));
        }
        for (auto& t : pool) t.join();
    }

    Local best;
    for (const Local& l : locals) { // ascending ranges: strict > keeps the smallest mask
        if (!l.any) continue;
        if (!best.any || l.best > best.best) best = l;
    }

    SearchResult r;
    r.best_graph = graph_from_mask(n, best.mask);
    r.best_score = best.best;
    r.iterations = total;
    r.evaluations = total;
    return r;
}

// Greedy ascent from the empty graph. Each step proposes exactly one
// neighbor: flip the edge slot with the lowest local contribution to the
// current score (ties broken by lexicographic pair order). The move is
// accepted only on strict improvement; the first rejected proposal ends the
// search. The iteration cap is a safety net — strict ascent over finitely
// many cached test values cannot cycle, so hitting it means a defect.
inline SearchResult hill_climb(int n, const ScoreFunction& score, const CiTestEngine& e) {
    if (n < 1) throw std::invalid_argument("hill_climb: need at least one node");
    UndirectedGraph current(n);
    ScoreBreakdown state = score(current, e);
    SearchResult r;
    r.evaluations = 1;
    const std::uint64_t cap = 2ull * static_cast<std::uint64_t>(pair_count(n)) * static_cast<std::uint64_t>(n);

    while (true) {
        ++r.iterations;
        if (cap > 0 && r.iterations > cap)
            throw std::logic_error("hill_climb: iteration cap exceeded");

        bool found = false;
        int bi = -1, bj = -1;
        double lowest = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double c = edge_contribution(state, i, j);
                if (!found || c < lowest) {
                    found = true;
                    lowest = c;
                    bi = i;
                    bj = j;
                }
            }
        if (!found) break; // single node: nothing to flip

        ScoreBreakdown cand = score(current.toggled(bi, bj), e);
        ++r.evaluations;
        if (cand.total > state.total) {
            current = current.toggled(bi, bj);
            state = std::move(cand);
            r.trajectory.push_back({bi, bj, state.total});
        } else {
            break;
        }
    }

    r.best_graph = std::move(current);
    r.best_score = state.total;
    return r;
}

} // namespace mrf
