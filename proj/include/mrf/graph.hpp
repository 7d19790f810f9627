#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrf/errors.hpp"
#include "mrf/rng.hpp"

namespace mrf {

// Undirected independence structure over nodes 0..n-1. No self-loops, each
// edge stored once; adjacency is kept symmetric. Values are cheap to copy and
// treated as immutable once built, so they can be shared freely.
class UndirectedGraph {
public:
    UndirectedGraph() = default;

    explicit UndirectedGraph(int n) : n_(n), adj_(static_cast<size_t>(n) * n, 0) {
        if (n < 0) throw std::invalid_argument("node count must be non-negative");
    }

    UndirectedGraph(int n, const std::vector<std::pair<int, int>>& edges) : UndirectedGraph(n) {
        for (const auto& [i, j] : edges) add_edge(i, j);
    }

    int n() const { return n_; }
    int edge_count() const { return edge_count_; }

    bool has_edge(int i, int j) const {
        check_node(i);
        check_node(j);
        return i != j && adj_[idx(i, j)] != 0;
    }

    void add_edge(int i, int j) {
        check_node(i);
        check_node(j);
        if (i == j) throw std::invalid_argument("self-loop rejected");
        if (!adj_[idx(i, j)]) {
            adj_[idx(i, j)] = adj_[idx(j, i)] = 1;
            ++degree_at(i);
            ++degree_at(j);
            ++edge_count_;
        }
    }

    void remove_edge(int i, int j) {
        check_node(i);
        check_node(j);
        if (i != j && adj_[idx(i, j)]) {
            adj_[idx(i, j)] = adj_[idx(j, i)] = 0;
            --degree_at(i);
            --degree_at(j);
            --edge_count_;
        }
    }

    // Copy with one edge slot flipped; the receiver stays untouched.
    UndirectedGraph toggled(int i, int j) const {
        UndirectedGraph g(*this);
        if (g.has_edge(i, j))
            g.remove_edge(i, j);
        else
            g.add_edge(i, j);
        return g;
    }

    int degree(int i) const {
        check_node(i);
        return degrees_.empty() ? 0 : degrees_[i];
    }

    // Neighbors of i in ascending order.
    std::vector<int> neighbors(int i) const {
        check_node(i);
        std::vector<int> out;
        out.reserve(degree(i));
        for (int j = 0; j < n_; ++j)
            if (adj_[idx(i, j)]) out.push_back(j);
        return out;
    }

    // Canonical (i < j) edge list in lexicographic order.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(edge_count_);
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (adj_[idx(i, j)]) out.emplace_back(i, j);
        return out;
    }

    friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
        return a.n_ == b.n_ && a.adj_ == b.adj_;
    }
    friend bool operator!=(const UndirectedGraph& a, const UndirectedGraph& b) { return !(a == b); }

    void check_node(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("node index out of range");
    }

private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }

    int& degree_at(int i) {
        if (degrees_.empty()) degrees_.assign(n_, 0);
        return degrees_[i];
    }

    int n_ = 0;
    int edge_count_ = 0;
    std::vector<char> adj_;
    std::vector<int> degrees_;
};

// Permutation of the nodes with degrees in non-decreasing order, ties broken
// by ascending node index. rank is the inverse permutation.
struct DegreeOrdering {
    std::vector<int> psi;
    std::vector<int> rank;
};

// Markov blanket of node i: its neighbor set.
inline std::vector<int> blanket(const UndirectedGraph& g, int i) { return g.neighbors(i); }

inline DegreeOrdering degree_ordering(const UndirectedGraph& g) {
    DegreeOrdering ord;
    ord.psi.resize(g.n());
    std::iota(ord.psi.begin(), ord.psi.end(), 0);
    std::sort(ord.psi.begin(), ord.psi.end(), [&g](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) < g.degree(b);
        return a < b;
    });
    ord.rank.resize(g.n());
    for (int p = 0; p < g.n(); ++p) ord.rank[ord.psi[p]] = p;
    return ord;
}

// Sum over edges of the absolute degree difference of the endpoints.
// Zero exactly for regular graphs.
inline long long irregularity(const UndirectedGraph& g) {
    long long total = 0;
    for (const auto& [i, j] : g.edges()) total += std::abs(g.degree(i) - g.degree(j));
    return total;
}

// Size of the symmetric difference of the edge sets (false positives plus
// false negatives when comparing a learned structure against the truth).
inline int hamming_distance(const UndirectedGraph& a, const UndirectedGraph& b) {
    if (a.n() != b.n()) throw std::invalid_argument("hamming_distance: node counts differ");
    int d = 0;
    for (int i = 0; i < a.n(); ++i)
        for (int j = i + 1; j < a.n(); ++j)
            if (a.has_edge(i, j) != b.has_edge(i, j)) ++d;
    return d;
}

// --- edge-slot <-> bitmask mapping used by exhaustive enumeration ---

inline int pair_count(int n) { return n * (n - 1) / 2; }

// Lexicographic slot index of the pair (i, j), i < j.
inline int pair_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline std::pair<int, int> pair_from_index(int n, int slot) {
    for (int i = 0; i < n - 1; ++i) {
        int row = n - 1 - i;
        if (slot < row) return {i, i + 1 + slot};
        slot -= row;
    }
    throw std::out_of_range("pair slot out of range");
}

inline UndirectedGraph graph_from_mask(int n, std::uint64_t mask) {
    UndirectedGraph g(n);
    for (int s = 0; s < pair_count(n); ++s)
        if (mask >> s & 1) {
            auto [i, j] = pair_from_index(n, s);
            g.add_edge(i, j);
        }
    return g;
}

// --- generators ---

// h hub nodes (0..h-1), each connected to every non-hub node; hubs are not
// connected to each other. Layout is a pure function of (n, h).
inline UndirectedGraph gen_hub(int n, int h) {
    if (h < 1 || h >= n) throw std::invalid_argument("gen_hub: need 1 <= h < n");
    UndirectedGraph g(n);
    for (int u = 0; u < h; ++u)
        for (int v = h; v < n; ++v) g.add_edge(u, v);
    return g;
}

// Preferential attachment starting from an (m+1)-clique; every later node
// attaches to m distinct existing nodes with probability proportional to
// their current degree.
inline UndirectedGraph gen_scale_free(int n, int m, Rng& rng) {
    if (m < 1 || m >= n) throw std::invalid_argument("gen_scale_free: need 1 <= m < n");
    UndirectedGraph g(n);
    std::vector<int> repeats;  // node id repeated once per unit of degree
    for (int i = 0; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j) {
            g.add_edge(i, j);
            repeats.push_back(i);
            repeats.push_back(j);
        }
    for (int v = m + 1; v < n; ++v) {
        std::set<int> targets;
        while (static_cast<int>(targets.size()) < m)
            targets.insert(repeats[uniform_index(rng, static_cast<int>(repeats.size()))]);
        for (int t : targets) {
            g.add_edge(v, t);
            repeats.push_back(v);
            repeats.push_back(t);
        }
    }
    return g;
}

// Erdos-Renyi: each pair present independently with probability p.
inline UndirectedGraph gen_random(int n, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gen_random: p must be in [0,1]");
    UndirectedGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) g.add_edge(i, j);
    return g;
}

// --- edge-list text format ---
// First non-comment line: node count n. Each further non-empty line: "i j"
// with 0 <= i, j < n. Lines starting with '#' are comments. LF or CRLF.

inline UndirectedGraph read_edge_list(const std::string& text,
                                      std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_n = false;
    int n = 0;
    UndirectedGraph g;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        const auto first = trimmed.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        if (trimmed[first] == '#') continue;
        std::istringstream fields(trimmed);
        if (!have_n) {
            if (!(fields >> n) || n < 0)
                throw DataError("edge list line " + std::to_string(lineno) + ": expected node count");
            std::string extra;
            if (fields >> extra)
                throw DataError("edge list line " + std::to_string(lineno) + ": trailing tokens after node count");
            g = UndirectedGraph(n);
            have_n = true;
            continue;
        }
        int i, j;
        if (!(fields >> i >> j))
            throw DataError("edge list line " + std::to_string(lineno) + ": expected \"i j\"");
        std::string extra;
        if (fields >> extra)
            throw DataError("edge list line " + std::to_string(lineno) + ": trailing tokens after edge");
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw DataError("edge list line " + std::to_string(lineno) + ": node index out of range");
        if (i == j)
            throw DataError("edge list line " + std::to_string(lineno) + ": self-loop rejected");
        if (g.has_edge(i, j)) {
            if (warnings)
                warnings->push_back("edge list line " + std::to_string(lineno) + ": duplicate edge " +
                                    std::to_string(i) + " " + std::to_string(j) + " ignored");
            continue;
        }
        g.add_edge(i, j);
    }
    if (!have_n) throw DataError("edge list: missing node count line");
    return g;
}

inline std::string write_edge_list(const UndirectedGraph& g) {
    std::ostringstream out;
    out << g.n() << '\n';
    for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
    return out.str();
}

} // namespace mrf
