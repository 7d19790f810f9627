#include <cstdint>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mrf/bench.hpp"
#include "mrf/citest.hpp"
#include "mrf/dataset.hpp"
#include "mrf/errors.hpp"
#include "mrf/format.hpp"
#include "mrf/graph.hpp"
#include "mrf/io.hpp"
#include "mrf/mrf_sim.hpp"
#include "mrf/rng.hpp"
#include "mrf/scores.hpp"
#include "mrf/search.hpp"

namespace {

// Effective seed for a stochastic command: the user's, or a fresh one.
// Either way it is echoed so the run can be reproduced.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
    std::uint64_t seed;
    if (given) {
        seed = *given;
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::cerr << "seed: " << seed << '\n';
    return seed;
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        mrf::write_text_file(out_path, content);
}

int run(int argc, char** argv) {
    CLI::App app{"Markov network structure learning from discrete data"};
    app.require_subcommand(1);

    // gen-graph
    auto* gen = app.add_subcommand("gen-graph", "Generate a graph and write its edge list");
    std::string gen_kind;
    int gen_n = 0, gen_hubs = 1, gen_m = 1;
    double gen_p = 0.5;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    gen->add_option("--kind", gen_kind, "hub | star | scale-free | random")
        ->required()
        ->check(CLI::IsMember({"hub", "star", "scale-free", "random"}));
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--hubs", gen_hubs, "hub count (kind=hub)");
    gen->add_option("--m", gen_m, "attachments per node (kind=scale-free)");
    gen->add_option("--p", gen_p, "edge probability (kind=random)");
    gen->add_option("--seed", gen_seed, "RNG seed (stochastic kinds)");
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // sample
    auto* smp = app.add_subcommand("sample", "Draw a dataset from a model via Gibbs sampling");
    std::string smp_model, smp_graph, smp_out;
    int smp_nd = 0, smp_burn = 100, smp_iters = 1000, smp_card = 2, smp_threads = 1;
    std::optional<std::uint64_t> smp_seed;
    auto* smp_model_opt = smp->add_option("--model", smp_model, "model file to sample from");
    smp->add_option("--graph", smp_graph, "edge-list file; potentials drawn uniformly at random")
        ->excludes(smp_model_opt);
    smp->add_option("--nd", smp_nd, "rows to sample")->required();
    smp->add_option("--burn-in", smp_burn, "burn-in sweeps per row");
    smp->add_option("--iters", smp_iters, "sampling sweeps per row");
    smp->add_option("--card", smp_card, "cardinality of every variable (with --graph)");
    smp->add_option("--seed", smp_seed, "RNG seed");
    smp->add_option("--threads", smp_threads, "row-parallel workers");
    smp->add_option("--out", smp_out, "output CSV path (default stdout)");

    // learn
    auto* lrn = app.add_subcommand("learn", "Learn a structure from a CSV dataset");
    std::string lrn_data, lrn_score = "bjp", lrn_method = "hc", lrn_out;
    double lrn_alpha = 1.0, lrn_malpha = 1.0, lrn_prior = 0.5;
    int lrn_cap = 6, lrn_threads = 1;
    lrn->add_option("--data", lrn_data, "dataset CSV")->required();
    lrn->add_option("--score", lrn_score, "bjp | ib")->check(CLI::IsMember({"bjp", "ib"}));
    lrn->add_option("--method", lrn_method, "exhaustive | hc")
        ->check(CLI::IsMember({"exhaustive", "hc"}));
    lrn->add_option("--alpha", lrn_alpha, "Dirichlet pseudo-count per joint cell");
    lrn->add_option("--marginal-alpha", lrn_malpha, "pseudo-count per marginal cell");
    lrn->add_option("--prior-indep", lrn_prior, "prior probability of independence");
    lrn->add_option("--cap", lrn_cap, "exhaustive search node cap");
    lrn->add_option("--threads", lrn_threads, "exhaustive search workers");
    lrn->add_option("--out", lrn_out, "edge-list output path (default stdout)");

    // eval
    auto* evl = app.add_subcommand("eval", "Compare a learned graph against the truth");
    std::string evl_learned, evl_truth;
    evl->add_option("--learned", evl_learned, "learned edge-list file")->required();
    evl->add_option("--truth", evl_truth, "true edge-list file")->required();

    // bench
    auto* bch = app.add_subcommand("bench", "Run an experiment grid from a JSON config");
    std::string bch_config, bch_outdir = ".";
    std::optional<std::uint64_t> bch_seed;
    bch->add_option("--config", bch_config, "experiment config JSON")->required();
    bch->add_option("--out-dir", bch_outdir, "directory for results/timings/summary CSVs");
    bch->add_option("--seed", bch_seed, "base seed (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1; // help/version exit 0, usage errors exit 1
    }

    if (gen->parsed()) {
        mrf::UndirectedGraph g{1};
        if (gen_kind == "hub") {
            g = mrf::gen_hub(gen_n, gen_hubs);
        } else if (gen_kind == "star") {
            g = mrf::gen_hub(gen_n, 1);
        } else {
            mrf::Rng rng = mrf::make_rng(resolve_seed(gen_seed));
            g = gen_kind == "scale-free" ? mrf::gen_scale_free(gen_n, gen_m, rng)
                                         : mrf::gen_random(gen_n, gen_p, rng);
        }
        emit(gen_out, mrf::write_edge_list(g));
        return 0;
    }

    if (smp->parsed()) {
        if (smp_model.empty() && smp_graph.empty())
            throw std::invalid_argument("sample: one of --model or --graph is required");
        if (smp_nd < 1) throw std::invalid_argument("sample: --nd must be at least 1");
        const std::uint64_t seed = resolve_seed(smp_seed);
        mrf::MrfModel model;
        if (!smp_model.empty()) {
            model = mrf::read_model(mrf::read_text_file(smp_model));
        } else {
            const mrf::UndirectedGraph g = mrf::read_edge_list(mrf::read_text_file(smp_graph));
            mrf::Rng rng = mrf::make_rng(mrf::mix_seed(seed, "model"));
            model = mrf::random_model(g, std::vector<int>(static_cast<size_t>(g.n()), smp_card), rng);
        }
        std::cerr << "burn-in: " << smp_burn << '\n';
        std::cerr << "iterations-per-sample: " << smp_iters << '\n';
        const mrf::Dataset data = mrf::gibbs_sample(model, smp_nd, smp_burn, smp_iters,
                                                    mrf::mix_seed(seed, "data"), smp_threads);
        emit(smp_out, mrf::write_csv(data));
        return 0;
    }

    if (lrn->parsed()) {
        const mrf::Dataset data = mrf::read_csv(mrf::read_text_file(lrn_data));
        mrf::CiTestOptions opts;
        opts.alpha = lrn_alpha;
        opts.marginal_alpha = lrn_malpha;
        opts.prior_independence = lrn_prior;
        const mrf::CiTestEngine engine(data, opts);
        const mrf::ScoreFunction fn = lrn_score == "bjp" ? mrf::bjp_score : mrf::ib_score;
        const mrf::SearchResult sr =
            lrn_method == "exhaustive"
                ? mrf::exhaustive_search(data.n_vars(), fn, engine, {lrn_cap, lrn_threads})
                : mrf::hill_climb(data.n_vars(), fn, engine);
        const mrf::ScoreBreakdown best = fn(sr.best_graph, engine);
        std::cerr << "score: " << lrn_score << '\n';
        std::cerr << "method: " << lrn_method << '\n';
        std::cerr << "graphs-scored: " << sr.evaluations << '\n';
        std::cerr << "evaluated-assertions: " << best.evaluated_count() << '\n';
        std::cerr << "distinct-data-tests: " << engine.tests_computed() << '\n';
        std::cerr << "total: " << mrf::format_g17(sr.best_score) << '\n';
        emit(lrn_out, mrf::write_edge_list(sr.best_graph));
        return 0;
    }

    if (evl->parsed()) {
        const mrf::UndirectedGraph learned = mrf::read_edge_list(mrf::read_text_file(evl_learned));
        const mrf::UndirectedGraph truth = mrf::read_edge_list(mrf::read_text_file(evl_truth));
        if (learned.n() != truth.n())
            throw mrf::DataError("eval: graphs disagree on node count");
        std::cout << "hamming: " << mrf::hamming_distance(learned, truth) << '\n';
        std::cout << "irregularity-learned: " << mrf::irregularity(learned) << '\n';
        std::cout << "irregularity-truth: " << mrf::irregularity(truth) << '\n';
        return 0;
    }

    if (bch->parsed()) {
        mrf::ExperimentConfig config = mrf::parse_experiment_config(mrf::read_text_file(bch_config));
        if (bch_seed) config.base_seed = *bch_seed;
        config.base_seed = resolve_seed(config.base_seed);
        const mrf::ExperimentOutput out = mrf::run_experiment(config);
        const std::vector<mrf::SummaryRow> summary = mrf::aggregate(out);
        mrf::write_text_file(bch_outdir + "/results.csv", mrf::results_csv(out.records));
        mrf::write_text_file(bch_outdir + "/timings.csv", mrf::timings_csv(out.records));
        mrf::write_text_file(bch_outdir + "/summary.csv", mrf::summary_csv(summary));
        std::cerr << "records: " << out.records.size() << '\n';
        std::cerr << "wrote: " << bch_outdir << "/results.csv, timings.csv, summary.csv\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mrf::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
