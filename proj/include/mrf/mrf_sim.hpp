#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mrf/dataset.hpp"
#include "mrf/errors.hpp"
#include "mrf/format.hpp"
#include "mrf/graph.hpp"
#include "mrf/rng.hpp"

namespace mrf {

// Potential table over one clique. Members are sorted ascending; the value
// index treats the first member as most significant, the last as least:
//   index = sum_j state[member_j] * prod_{l>j} card[member_l]
struct CliquePotential {
    std::vector<int> members;
    std::vector<double> values;
};

struct MrfModel {
    UndirectedGraph graph{1};
    std::vector<int> cards;
    std::vector<CliquePotential> cliques; // the maximal cliques, sorted by member list
};

namespace detail {

inline void bk_recurse(const UndirectedGraph& g, std::vector<int>& r, std::vector<int> p,
                       std::vector<int> x, int cap, std::vector<std::vector<int>>& out) {
    if (p.empty() && x.empty()) {
        out.push_back(r);
        return;
    }
    int pivot = -1;
    size_t best = 0;
    auto consider = [&](int u) {
        size_t cnt = 0;
        for (int v : p)
            if (g.has_edge(u, v)) ++cnt;
        if (pivot < 0 || cnt > best) {
            pivot = u;
            best = cnt;
        }
    };
    for (int u : p) consider(u);
    for (int u : x) consider(u);

    std::vector<int> candidates;
    for (int v : p)
        if (!g.has_edge(pivot, v)) candidates.push_back(v);

    for (int v : candidates) {
        r.push_back(v);
        if (cap > 0 && static_cast<int>(r.size()) > cap)
            throw std::invalid_argument("maximal_cliques: clique exceeds the size cap");
        std::vector<int> np, nx;
        for (int w : p)
            if (g.has_edge(v, w)) np.push_back(w);
        for (int w : x)
            if (g.has_edge(v, w)) nx.push_back(w);
        bk_recurse(g, r, std::move(np), std::move(nx), cap, out);
        r.pop_back();
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

} // namespace detail

// Bron-Kerbosch with pivoting. Isolated vertices come back as singleton
// cliques, so every variable is covered. Output sorted lexicographically.
inline std::vector<std::vector<int>> maximal_cliques(const UndirectedGraph& g, int max_clique_size = 12) {
    std::vector<int> r, p(static_cast<size_t>(g.n()));
    for (int i = 0; i < g.n(); ++i) p[static_cast<size_t>(i)] = i;
    std::vector<std::vector<int>> out;
    detail::bk_recurse(g, r, std::move(p), {}, max_clique_size, out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline size_t table_size(const std::vector<int>& members, const std::vector<int>& cards) {
    size_t s = 1;
    for (int m : members) s *= static_cast<size_t>(cards[static_cast<size_t>(m)]);
    return s;
}

inline void check_cards(const std::vector<int>& cards, int n) {
    if (static_cast<int>(cards.size()) != n)
        throw std::invalid_argument("model: cardinality list length must equal node count");
    for (int c : cards)
        if (c < 2) throw std::invalid_argument("model: cardinalities must be at least 2");
}

} // namespace detail

// Verify the model invariants: cliques are exactly the maximal cliques of
// the graph, tables have the right sizes, and every potential is positive.
inline void check_model(const MrfModel& m, int max_clique_size = 12) {
    detail::check_cards(m.cards, m.graph.n());
    std::vector<std::vector<int>> expect = maximal_cliques(m.graph, max_clique_size);
    if (expect.size() != m.cliques.size())
        throw std::invalid_argument("model: clique list does not match the graph's maximal cliques");
    for (size_t c = 0; c < expect.size(); ++c) {
        if (m.cliques[c].members != expect[c])
            throw std::invalid_argument("model: clique list does not match the graph's maximal cliques");
        if (m.cliques[c].values.size() != detail::table_size(expect[c], m.cards))
            throw std::invalid_argument("model: potential table size mismatch");
        for (double v : m.cliques[c].values)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument("model: potentials must be positive and finite");
    }
}

// Attach i.i.d. uniform(0,1) potentials (exact zeros rejected) to the
// maximal cliques of g. Draws happen in clique order, table index order, so
// the model is a pure function of (g, cards, rng state).
inline MrfModel random_model(const UndirectedGraph& g, const std::vector<int>& cards, Rng& rng,
                             int max_clique_size = 12) {
    detail::check_cards(cards, g.n());
    MrfModel m{g, cards, {}};
    for (const std::vector<int>& members : maximal_cliques(g, max_clique_size)) {
        CliquePotential cp{members, {}};
        cp.values.resize(detail::table_size(members, cards));
        for (double& v : cp.values) v = uniform_open01(rng);
        m.cliques.push_back(std::move(cp));
    }
    return m;
}

// P(X_i | everything else) — proportional to the product over the cliques
// containing i of their potentials with i's state varied. Depends only on
// the blanket entries of `assignment`; assignment[i] itself is ignored.
inline std::vector<double> conditional_distribution(const MrfModel& m, int i,
                                                    const std::vector<int>& assignment) {
    m.graph.check_node(i);
    if (static_cast<int>(assignment.size()) != m.graph.n())
        throw std::invalid_argument("conditional_distribution: assignment length mismatch");
    for (int v = 0; v < m.graph.n(); ++v) {
        if (v == i) continue;
        if (assignment[static_cast<size_t>(v)] < 0 ||
            assignment[static_cast<size_t>(v)] >= m.cards[static_cast<size_t>(v)])
            throw std::out_of_range("conditional_distribution: state out of range");
    }
    const int ri = m.cards[static_cast<size_t>(i)];
    std::vector<double> p(static_cast<size_t>(ri), 1.0);
    for (const CliquePotential& c : m.cliques) {
        size_t base = 0;
        size_t stride_i = 0;
        size_t stride = 1;
        bool has_i = false;
        for (size_t j = c.members.size(); j-- > 0;) {
            const int v = c.members[j];
            if (v == i) {
                has_i = true;
                stride_i = stride;
            } else {
                base += static_cast<size_t>(assignment[static_cast<size_t>(v)]) * stride;
            }
            stride *= static_cast<size_t>(m.cards[static_cast<size_t>(v)]);
        }
        if (!has_i) continue;
        for (int s = 0; s < ri; ++s)
            p[static_cast<size_t>(s)] *= c.values[base + static_cast<size_t>(s) * stride_i];
    }
    double total = 0.0;
    for (double v : p) total += v;
    for (double& v : p) v /= total;
    return p;
}

namespace detail {

// Flattened per-variable view of the cliques touching it, for the sampler's
// inner loop: value = table[base(other members' states) + s * stride_i].
struct CliqueRef {
    const double* table;
    size_t stride_i;
    std::vector<std::pair<int, size_t>> others; // (variable, stride)
};

inline std::vector<std::vector<CliqueRef>> clique_refs(const MrfModel& m) {
    std::vector<std::vector<CliqueRef>> refs(static_cast<size_t>(m.graph.n()));
    for (const CliquePotential& c : m.cliques) {
        std::vector<size_t> strides(c.members.size());
        size_t stride = 1;
        for (size_t j = c.members.size(); j-- > 0;) {
            strides[j] = stride;
            stride *= static_cast<size_t>(m.cards[static_cast<size_t>(c.members[j])]);
        }
        for (size_t j = 0; j < c.members.size(); ++j) {
            CliqueRef ref{c.values.data(), strides[j], {}};
            for (size_t l = 0; l < c.members.size(); ++l)
                if (l != j) ref.others.emplace_back(c.members[l], strides[l]);
            refs[static_cast<size_t>(c.members[j])].push_back(std::move(ref));
        }
    }
    return refs;
}

} // namespace detail

// One independent Gibbs chain per emitted row: random full assignment, then
// burn_in + iterations_per_sample full sweeps (each resamples every variable
// once in index order), emitting the final state. Row r's chain is seeded by
// mixing (seed, r), so output is identical for any worker count.
inline Dataset gibbs_sample(const MrfModel& m, int n_rows, int burn_in, int iterations_per_sample,
                            std::uint64_t seed, int threads = 1) {
    if (n_rows < 1) throw std::invalid_argument("gibbs_sample: need at least one row");
    if (burn_in < 0 || iterations_per_sample < 0)
        throw std::invalid_argument("gibbs_sample: sweep counts cannot be negative");
    const int n = m.graph.n();
    const auto refs = detail::clique_refs(m);
    const int sweeps = burn_in + iterations_per_sample;
    int max_card = 2;
    for (int c : m.cards) max_card = std::max(max_card, c);

    std::vector<int> values(static_cast<size_t>(n_rows) * static_cast<size_t>(n));

    auto run_rows = [&](int row_lo, int row_hi) {
        std::vector<int> state(static_cast<size_t>(n));
        std::vector<double> p(static_cast<size_t>(max_card));
        for (int row = row_lo; row < row_hi; ++row) {
            Rng rng = make_rng(mix_seed(seed, static_cast<std::uint64_t>(row)));
            for (int v = 0; v < n; ++v)
                state[static_cast<size_t>(v)] = uniform_index(rng, m.cards[static_cast<size_t>(v)]);
            for (int sweep = 0; sweep < sweeps; ++sweep) {
                for (int v = 0; v < n; ++v) {
                    const int card = m.cards[static_cast<size_t>(v)];
                    for (int s = 0; s < card; ++s) p[static_cast<size_t>(s)] = 1.0;
                    for (const detail::CliqueRef& ref : refs[static_cast<size_t>(v)]) {
                        size_t base = 0;
                        for (const auto& [other, stride] : ref.others)
                            base += static_cast<size_t>(state[static_cast<size_t>(other)]) * stride;
                        for (int s = 0; s < card; ++s)
                            p[static_cast<size_t>(s)] *= ref.table[base + static_cast<size_t>(s) * ref.stride_i];
                    }
                    double total = 0.0;
                    for (int s = 0; s < card; ++s) total += p[static_cast<size_t>(s)];
                    const double u = uniform01(rng) * total;
                    double cum = 0.0;
                    int pick = card - 1;
                    for (int s = 0; s < card; ++s) {
                        cum += p[static_cast<size_t>(s)];
                        if (u < cum) {
                            pick = s;
                            break;
                        }
                    }
                    state[static_cast<size_t>(v)] = pick;
                }
            }
            std::copy(state.begin(), state.end(),
                      values.begin() + static_cast<size_t>(row) * static_cast<size_t>(n));
        }
    };

    int workers = threads < 1 ? 1 : threads;
    if (workers > n_rows) workers = n_rows;
    if (workers == 1) {
        run_rows(0, n_rows);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const int lo = static_cast<int>(static_cast<std::int64_t>(n_rows) * w / workers);
            const int hi = static_cast<int>(static_cast<std::int64_t>(n_rows) * (w + 1) / workers);
            pool.emplace_back(run_rows, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    return Dataset(n, m.cards, std::move(values));
}

// Model file: line-oriented text. "vars", "cards", "cliques" headers, then
// per clique a "clique <members...>" line and a "values <table...>" line in
// configuration-lexicographic order. Doubles round-trip exactly.
inline std::string write_model(const MrfModel& m) {
    std::ostringstream out;
    out << "vars " << m.graph.n() << '\n';
    out << "cards";
    for (int c : m.cards) out << ' ' << c;
    out << '\n';
    out << "cliques " << m.cliques.size() << '\n';
    for (const CliquePotential& c : m.cliques) {
        out << "clique";
        for (int v : c.members) out << ' ' << v;
        out << '\n';
        out << "values";
        for (double v : c.values) out << ' ' << format_g17(v);
        out << '\n';
    }
    return out.str();
}

inline MrfModel read_model(const std::string& text, int max_clique_size = 12) {
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    auto next_line = [&]() -> std::istringstream {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos || line[start] == '#') continue;
            return std::istringstream(line);
        }
        throw DataError("model: unexpected end of file");
    };
    auto expect_word = [&](std::istringstream& ls, const std::string& word) {
        std::string w;
        if (!(ls >> w) || w != word)
            throw DataError("model: expected '" + word + "' at line " + std::to_string(line_no));
    };

    std::istringstream ls = next_line();
    expect_word(ls, "vars");
    int n = 0;
    if (!(ls >> n) || n < 1) throw DataError("model: bad variable count at line " + std::to_string(line_no));

    ls = next_line();
    expect_word(ls, "cards");
    std::vector<int> cards(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        if (!(ls >> cards[static_cast<size_t>(i)]) || cards[static_cast<size_t>(i)] < 2)
            throw DataError("model: bad cardinality at line " + std::to_string(line_no));

    ls = next_line();
    expect_word(ls, "cliques");
    size_t n_cliques = 0;
    if (!(ls >> n_cliques) || n_cliques < 1)
        throw DataError("model: bad clique count at line " + std::to_string(line_no));

    MrfModel m{UndirectedGraph(n), cards, {}};
    for (size_t c = 0; c < n_cliques; ++c) {
        ls = next_line();
        expect_word(ls, "clique");
        std::vector<int> members;
        int v = 0;
        while (ls >> v) {
            if (v < 0 || v >= n) throw DataError("model: clique member out of range at line " + std::to_string(line_no));
            members.push_back(v);
        }
        std::sort(members.begin(), members.end());
        if (members.empty() || std::adjacent_find(members.begin(), members.end()) != members.end())
            throw DataError("model: bad clique member list at line " + std::to_string(line_no));

        ls = next_line();
        expect_word(ls, "values");
        const size_t want = detail::table_size(members, cards);
        std::vector<double> vals;
        vals.reserve(want);
        std::string tok;
        while (ls >> tok) {
            double d = 0.0;
            try {
                d = parse_double(tok);
            } catch (const std::invalid_argument&) {
                throw DataError("model: bad potential value at line " + std::to_string(line_no));
            }
            vals.push_back(d);
        }
        if (vals.size() != want)
            throw DataError("model: expected " + std::to_string(want) + " potential values at line " +
                            std::to_string(line_no));
        for (size_t a = 0; a + 1 < members.size(); ++a)
            for (size_t b = a + 1; b < members.size(); ++b)
                m.graph.add_edge(members[a], members[b]);
        m.cliques.push_back(CliquePotential{std::move(members), std::move(vals)});
    }
    std::sort(m.cliques.begin(), m.cliques.end(),
              [](const CliquePotential& a, const CliquePotential& b) { return a.members < b.members; });
    try {
        check_model(m, max_clique_size);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("model: ") + e.what());
    }
    return m;
}

} // namespace mrf
