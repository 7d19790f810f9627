#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mrf/citest.hpp"
#include "mrf/errors.hpp"
#include "mrf/format.hpp"
#include "mrf/graph.hpp"
#include "mrf/io.hpp"
#include "mrf/mrf_sim.hpp"
#include "mrf/rng.hpp"
#include "mrf/scores.hpp"
#include "mrf/search.hpp"

namespace mrf {

struct StructureSpec {
    std::string id;   // [A-Za-z0-9_-]+, used in seeds and CSV keys
    std::string kind; // hub | star | scale-free | random | file | edges
    int n = 0;
    int hubs = 1;    // hub
    int m = 1;       // scale-free attachments per new node
    double p = 0.5;  // random edge probability
    std::string path;  // kind == file: edge-list path
    std::string edges; // kind == edges: inline edge-list text
};

struct GibbsSettings {
    int burn_in = 100;
    int iterations_per_sample = 1000;
};

struct ExperimentConfig {
    std::vector<StructureSpec> structures;
    std::vector<std::string> scores{"bjp"}; // bjp | ib
    std::string method = "exhaustive";      // exhaustive | hc
    std::vector<int> dataset_sizes;
    int distributions_per_structure = 1;
    int datasets_per_distribution = 1;
    std::optional<std::uint64_t> base_seed; // resolved by the caller if absent
    CiTestOptions citest;
    GibbsSettings gibbs;
    int cardinality = 2;
    int max_clique_size = 12;
    int exhaustive_cap = 6;
    int threads = 1;
};

struct ResultRecord {
    std::string structure;
    std::string score;
    int nd = 0;
    int dist = 0; // distribution index within the structure
    int rep = 0;  // dataset index within the distribution
    std::string edges; // learned graph as "i-j;i-j", empty for the empty graph
    int hamming = -1;  // -1 when the cell errored
    bool success = false;
    double seconds = 0.0; // wall time of the learn call only
    std::string error;    // empty on success
};

struct SummaryRow {
    std::string structure;
    int n = 0;
    long long irr = 0;
    std::string score;
    int nd = 0;
    int records = 0;
    int errors = 0;
    double hamming_mean = 0.0;
    double hamming_std = 0.0;
    double success_rate = 0.0;
    double runtime_mean = 0.0;
    double runtime_std = 0.0;
};

struct ExperimentOutput {
    std::vector<ResultRecord> records;
    std::vector<std::pair<std::string, UndirectedGraph>> structures; // id -> true graph
};

namespace detail {

inline void require_id(const std::string& id) {
    if (id.empty()) throw DataError("config: structure id must not be empty");
    for (char c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
            throw DataError("config: structure id '" + id + "' may use only letters, digits, '_', '-'");
}

inline void ensure_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                        const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw DataError("config: unknown key '" + it.key() + "' in " + where);
    }
}

} // namespace detail

inline UndirectedGraph resolve_structure(const StructureSpec& s, std::uint64_t base_seed) {
    const auto gen_seed = mix_seed(mix_seed(base_seed, "structure"), s.id);
    if (s.kind == "hub") return gen_hub(s.n, s.hubs);
    if (s.kind == "star") return gen_hub(s.n, 1);
    if (s.kind == "scale-free") {
        Rng rng = make_rng(gen_seed);
        return gen_scale_free(s.n, s.m, rng);
    }
    if (s.kind == "random") {
        Rng rng = make_rng(gen_seed);
        return gen_random(s.n, s.p, rng);
    }
    if (s.kind == "file") return read_edge_list(read_text_file(s.path));
    if (s.kind == "edges") return read_edge_list(s.edges);
    throw DataError("config: unknown structure kind '" + s.kind + "'");
}

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("config: ") + e.what());
    }
    try {
        if (!j.is_object()) throw DataError("config: top level must be an object");
        detail::ensure_keys(j,
                            {"structures", "scores", "method", "dataset_sizes",
                             "distributions_per_structure", "datasets_per_distribution", "base_seed",
                             "citest", "gibbs", "cardinality", "max_clique_size", "exhaustive_cap",
                             "threads"},
                            "config");
        ExperimentConfig c;
        if (!j.contains("structures") || !j["structures"].is_array() || j["structures"].empty())
            throw DataError("config: 'structures' must be a non-empty array");
        for (const auto& js : j["structures"]) {
            detail::ensure_keys(js, {"id", "kind", "n", "hubs", "m", "p", "path", "edges"},
                                "structure entry");
            StructureSpec s;
            s.id = js.at("id").get<std::string>();
            detail::require_id(s.id);
            s.kind = js.at("kind").get<std::string>();
            if (js.contains("n")) s.n = js["n"].get<int>();
            if (js.contains("hubs")) s.hubs = js["hubs"].get<int>();
            if (js.contains("m")) s.m = js["m"].get<int>();
            if (js.contains("p")) s.p = js["p"].get<double>();
            if (js.contains("path")) s.path = js["path"].get<std::string>();
            if (js.contains("edges")) s.edges = js["edges"].get<std::string>();
            for (const auto& other : c.structures)
                if (other.id == s.id) throw DataError("config: duplicate structure id '" + s.id + "'");
            c.structures.push_back(std::move(s));
        }
        if (j.contains("scores")) {
            c.scores = j["scores"].get<std::vector<std::string>>();
            if (c.scores.empty()) throw DataError("config: 'scores' must not be empty");
            for (const auto& s : c.scores)
                if (s != "bjp" && s != "ib") throw DataError("config: unknown score '" + s + "'");
        }
        if (j.contains("method")) c.method = j["method"].get<std::string>();
        if (c.method != "exhaustive" && c.method != "hc")
            throw DataError("config: unknown method '" + c.method + "'");
        if (!j.contains("dataset_sizes")) throw DataError("config: 'dataset_sizes' is required");
        c.dataset_sizes = j["dataset_sizes"].get<std::vector<int>>();
        if (c.dataset_sizes.empty()) throw DataError("config: 'dataset_sizes' must not be empty");
        for (int nd : c.dataset_sizes)
            if (nd < 1) throw DataError("config: dataset sizes must be positive");
        if (j.contains("distributions_per_structure"))
            c.distributions_per_structure = j["distributions_per_structure"].get<int>();
        if (j.contains("datasets_per_distribution"))
            c.datasets_per_distribution = j["datasets_per_distribution"].get<int>();
        if (c.distributions_per_structure < 1 || c.datasets_per_distribution < 1)
            throw DataError("config: repetition counts must be at least 1");
        if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("citest")) {
            const auto& jc = j["citest"];
            detail::ensure_keys(jc, {"alpha", "marginal_alpha", "prior_independence"}, "citest");
            if (jc.contains("alpha")) c.citest.alpha = jc["alpha"].get<double>();
            if (jc.contains("marginal_alpha")) c.citest.marginal_alpha = jc["marginal_alpha"].get<double>();
            if (jc.contains("prior_independence"))
                c.citest.prior_independence = jc["prior_independence"].get<double>();
        }
        if (j.contains("gibbs")) {
            const auto& jg = j["gibbs"];
            detail::ensure_keys(jg, {"burn_in", "iterations_per_sample"}, "gibbs");
            if (jg.contains("burn_in")) c.gibbs.burn_in = jg["burn_in"].get<int>();
            if (jg.contains("iterations_per_sample"))
                c.gibbs.iterations_per_sample = jg["iterations_per_sample"].get<int>();
        }
        if (j.contains("cardinality")) c.cardinality = j["cardinality"].get<int>();
        if (c.cardinality < 2) throw DataError("config: cardinality must be at least 2");
        if (j.contains("max_clique_size")) c.max_clique_size = j["max_clique_size"].get<int>();
        if (j.contains("exhaustive_cap")) c.exhaustive_cap = j["exhaustive_cap"].get<int>();
        if (j.contains("threads")) c.threads = j["threads"].get<int>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    }
}

namespace detail {

inline std::string edges_string(const UndirectedGraph& g) {
    std::ostringstream out;
    bool first = true;
    for (const auto& [i, j] : g.edges()) {
        if (!first) out << ';';
        out << i << '-' << j;
        first = false;
    }
    return out.str();
}

inline ScoreFunction score_by_name(const std::string& name) {
    if (name == "bjp") return bjp_score;
    if (name == "ib") return ib_score;
    throw std::invalid_argument("unknown score '" + name + "'");
}

} // namespace detail

// Run the full (structure x distribution x dataset x size x score) grid.
// Every cell's randomness is derived from the base seed and the cell's
// coordinates, so results do not depend on execution order and the grid can
// be extended without disturbing existing cells. Model or sampler failures
// are recorded in the affected cells' `error` field rather than aborting.
inline ExperimentOutput run_experiment(const ExperimentConfig& c) {
    if (!c.base_seed) throw std::invalid_argument("run_experiment: base seed not resolved");
    const std::uint64_t base = *c.base_seed;

    ExperimentOutput out;
    for (const StructureSpec& spec : c.structures)
        out.structures.emplace_back(spec.id, resolve_structure(spec, base));

    int max_nd = 0;
    for (int nd : c.dataset_sizes) max_nd = std::max(max_nd, nd);

    auto emit = [&](const std::string& structure, int dist, int rep, const std::string& score,
                    int nd, ResultRecord rec) {
        rec.structure = structure;
        rec.score = score;
        rec.nd = nd;
        rec.dist = dist;
        rec.rep = rep;
        out.records.push_back(std::move(rec));
    };
    auto emit_error = [&](const std::string& structure, int dist, int rep, int nd,
                          const std::string& message) {
        for (const std::string& score : c.scores) {
            ResultRecord rec;
            rec.error = message;
            emit(structure, dist, rep, score, nd, std::move(rec));
        }
    };

    for (size_t si = 0; si < out.structures.size(); ++si) {
        const std::string& id = out.structures[si].first;
        const UndirectedGraph& truth = out.structures[si].second;
        const std::vector<int> cards(static_cast<size_t>(truth.n()), c.cardinality);
        for (int dist = 0; dist < c.distributions_per_structure; ++dist) {
            MrfModel model;
            std::string model_error;
            try {
                Rng rng = make_rng(mix_seed(mix_seed(mix_seed(base, "model"), id),
                                            static_cast<std::uint64_t>(dist)));
                model = random_model(truth, cards, rng, c.max_clique_size);
            } catch (const std::exception& e) {
                model_error = e.what();
            }
            for (int rep = 0; rep < c.datasets_per_distribution; ++rep) {
                if (!model_error.empty()) {
                    for (int nd : c.dataset_sizes) emit_error(id, dist, rep, nd, model_error);
                    continue;
                }
                Dataset full(1, {2}, {0});
                std::string data_error;
                try {
                    const std::uint64_t data_seed =
                        mix_seed(mix_seed(mix_seed(mix_seed(base, "data"), id),
                                          static_cast<std::uint64_t>(dist)),
                                 static_cast<std::uint64_t>(rep));
                    full = gibbs_sample(model, max_nd, c.gibbs.burn_in, c.gibbs.iterations_per_sample,
                                        data_seed, c.threads);
                } catch (const std::exception& e) {
                    data_error = e.what();
                }
                for (int nd : c.dataset_sizes) {
                    if (!data_error.empty()) {
                        emit_error(id, dist, rep, nd, data_error);
                        continue;
                    }
                    std::vector<int> vals(full.row(0), full.row(0) + static_cast<size_t>(nd) * full.n_vars());
                    const Dataset data(full.n_vars(), cards, std::move(vals));
                    const CiTestEngine engine(data, c.citest);
                    for (const std::string& score : c.scores) {
                        ResultRecord rec;
                        try {
                            const ScoreFunction fn = detail::score_by_name(score);
                            const auto t0 = std::chrono::steady_clock::now();
                            const SearchResult sr =
                                c.method == "exhaustive"
                                    ? exhaustive_search(truth.n(), fn, engine,
                                                        {c.exhaustive_cap, c.threads})
                                    : hill_climb(truth.n(), fn, engine);
                            const auto t1 = std::chrono::steady_clock::now();
                            rec.seconds = std::chrono::duration<double>(t1 - t0).count();
                            rec.edges = detail::edges_string(sr.best_graph);
                            rec.hamming = static_cast<int>(hamming_distance(sr.best_graph, truth));
                            rec.success = rec.hamming == 0;
                        } catch (const std::exception& e) {
                            rec = ResultRecord{};
                            rec.error = e.what();
                        }
                        emit(id, dist, rep, score, nd, std::move(rec));
                    }
                }
            }
        }
    }
    return out;
}

// Per (structure, score, size) means, sample standard deviations, and the
// success rate. Errored cells count against success and are excluded from
// the hamming/runtime moments; `errors` reports how many there were.
inline std::vector<SummaryRow> aggregate(const ExperimentOutput& out) {
    if (out.records.empty()) throw std::invalid_argument("aggregate: no records");
    std::vector<SummaryRow> rows;
    for (const auto& [id, truth] : out.structures) {
        std::vector<std::string> scores;
        std::vector<int> sizes;
        for (const ResultRecord& r : out.records) {
            if (r.structure != id) continue;
            if (std::find(scores.begin(), scores.end(), r.score) == scores.end())
                scores.push_back(r.score);
            if (std::find(sizes.begin(), sizes.end(), r.nd) == sizes.end()) sizes.push_back(r.nd);
        }
        for (const std::string& score : scores)
            for (int nd : sizes) {
                SummaryRow row;
                row.structure = id;
                row.n = truth.n();
                row.irr = irregularity(truth);
                row.score = score;
                row.nd = nd;
                std::vector<double> hams, secs;
                int successes = 0;
                for (const ResultRecord& r : out.records) {
                    if (r.structure != id || r.score != score || r.nd != nd) continue;
                    ++row.records;
                    if (!r.error.empty()) {
                        ++row.errors;
                        continue;
                    }
                    hams.push_back(static_cast<double>(r.hamming));
                    secs.push_back(r.seconds);
                    if (r.success) ++successes;
                }
                if (row.records == 0) continue;
                auto mean_std = [](const std::vector<double>& xs) -> std::pair<double, double> {
                    if (xs.empty()) return {0.0, 0.0};
                    double mean = 0.0;
                    for (double x : xs) mean += x;
                    mean /= static_cast<double>(xs.size());
                    if (xs.size() < 2) return {mean, 0.0};
                    double ss = 0.0;
                    for (double x : xs) ss += (x - mean) * (x - mean);
                    return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
                };
                std::tie(row.hamming_mean, row.hamming_std) = mean_std(hams);
                std::tie(row.runtime_mean, row.runtime_std) = mean_std(secs);
                row.success_rate = static_cast<double>(successes) / static_cast<double>(row.records);
                rows.push_back(std::move(row));
            }
    }
    return rows;
}

// results.csv holds everything deterministic; wall times go to timings.csv
// so a rerun with the same config and seed reproduces results.csv exactly.
inline std::string results_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    out << "structure,score,nd,dist,rep,edges,hamming,success,error\n";
    for (const ResultRecord& r : records) {
        out << r.structure << ',' << r.score << ',' << r.nd << ',' << r.dist << ',' << r.rep << ',';
        if (r.error.empty()) {
            out << r.edges << ',' << r.hamming << ',' << (r.success ? 1 : 0) << ',';
        } else {
            std::string msg = r.error;
            for (char& ch : msg)
                if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
            out << ",,0," << msg;
        }
        out << '\n';
    }
    return out.str();
}

inline std::string timings_csv(const std::vector<ResultRecord>& records) {
    std::ostringstream out;
    out << "structure,score,nd,dist,rep,seconds\n";
    char buf[40];
    for (const ResultRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.seconds);
        out << r.structure << ',' << r.score << ',' << r.nd << ',' << r.dist << ',' << r.rep << ','
            << buf << '\n';
    }
    return out.str();
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "structure,n,irr,score,nd,records,errors,hamming_mean,hamming_std,success_rate,"
           "runtime_mean,runtime_std\n";
    char buf[160];
    for (const SummaryRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.6g,%.6g", r.hamming_mean, r.hamming_std,
                      r.success_rate, r.runtime_mean, r.runtime_std);
        out << r.structure << ',' << r.n << ',' << r.irr << ',' << r.score << ',' << r.nd << ','
            << r.records << ',' << r.errors << ',' << buf << '\n';
    }
    return out.str();
}

} // namespace mrf
