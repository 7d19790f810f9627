#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "mrf/bench.hpp"

using namespace mrf;

namespace {

const char* kSmallConfig = R"({
  "base_seed": 7,
  "structures": [{"id": "star3", "kind": "star", "n": 3}],
  "scores": ["bjp", "ib"],
  "method": "exhaustive",
  "dataset_sizes": [150],
  "distributions_per_structure": 1,
  "datasets_per_distribution": 1,
  "gibbs": {"burn_in": 20, "iterations_per_sample": 10}
})";

} // namespace

TEST_CASE("config parsing applies defaults and validates") {
    const ExperimentConfig c = parse_experiment_config(kSmallConfig);
    REQUIRE(c.structures.size() == 1);
    REQUIRE(c.structures[0].id == "star3");
    REQUIRE(c.scores == std::vector<std::string>{"bjp", "ib"});
    REQUIRE(c.dataset_sizes == std::vector<int>{150});
    REQUIRE(c.base_seed.has_value());
    REQUIRE(*c.base_seed == 7);
    REQUIRE(c.citest.alpha == 1.0);
    REQUIRE(c.cardinality == 2);
    REQUIRE(c.gibbs.burn_in == 20);
}

TEST_CASE("config parsing rejects malformed input") {
    REQUIRE_THROWS_AS(parse_experiment_config("{"), DataError);
    REQUIRE_THROWS_AS(parse_experiment_config("[]"), DataError);
    REQUIRE_THROWS_AS(parse_experiment_config("{}"), DataError);
    REQUIRE_THROWS_AS(parse_experiment_config(
                          R"({"structures": [{"id": "a", "kind": "star", "n": 3}]})"),
                      DataError); // no dataset_sizes
    REQUIRE_THROWS_AS(parse_experiment_config(
                          R"({"structures": [{"id": "a", "kind": "star", "n": 3}],
                              "dataset_sizes": [0]})"),
                      DataError);
    REQUIRE_THROWS_AS(parse_experiment_config(
                          R"({"structures": [{"id": "a", "kind": "star", "n": 3}],
                              "dataset_sizes": [10], "scores": ["mpl"]})"),
                      DataError);
    REQUIRE_THROWS_AS(parse_experiment_config(
                          R"({"structures": [{"id": "a", "kind": "star", "n": 3}],
                              "dataset_sizes": [10], "typo_key": 1})"),
                      DataError);
    REQUIRE_THROWS_AS(parse_experiment_config(
                          R"({"structures": [{"id": "a", "kind": "star", "n": 3},
                                             {"id": "a", "kind": "star", "n": 4}],
                              "dataset_sizes": [10]})"),
                      DataError);
    REQUIRE_THROWS_AS(parse_experiment_config(
                          R"({"structures": [{"id": "bad id!", "kind": "star", "n": 3}],
                              "dataset_sizes": [10]})"),
                      DataError);
}

TEST_CASE("structures resolve by kind") {
    REQUIRE(resolve_structure({"s", "star", 4, 1, 1, 0.5, "", ""}, 1) == gen_hub(4, 1));
    REQUIRE(resolve_structure({"h", "hub", 5, 2, 1, 0.5, "", ""}, 1) == gen_hub(5, 2));
    const UndirectedGraph inline_graph =
        resolve_structure({"e", "edges", 0, 1, 1, 0.5, "", "3\n0 1\n"}, 1);
    REQUIRE(inline_graph == UndirectedGraph(3, {{0, 1}}));

    // stochastic kinds are a pure function of (base seed, id)
    const StructureSpec sf{"sf", "scale-free", 8, 1, 2, 0.5, "", ""};
    REQUIRE(resolve_structure(sf, 9) == resolve_structure(sf, 9));
    const StructureSpec er{"er", "random", 8, 1, 1, 0.4, "", ""};
    REQUIRE(resolve_structure(er, 9) == resolve_structure(er, 9));

    REQUIRE_THROWS_AS(resolve_structure({"x", "mystery", 3, 1, 1, 0.5, "", ""}, 1), DataError);
}

TEST_CASE("a one-cell grid yields one record per score") {
    const ExperimentConfig c = parse_experiment_config(kSmallConfig);
    const ExperimentOutput out = run_experiment(c);
    REQUIRE(out.records.size() == 2);
    REQUIRE(out.records[0].score == "bjp");
    REQUIRE(out.records[1].score == "ib");
    for (const ResultRecord& r : out.records) {
        REQUIRE(r.structure == "star3");
        REQUIRE(r.nd == 150);
        REQUIRE(r.error.empty());
        REQUIRE(r.hamming >= 0);
        REQUIRE(r.success == (r.hamming == 0));
        REQUIRE(r.seconds >= 0.0);
    }
}

TEST_CASE("experiments are deterministic and stable under grid extension") {
    const ExperimentConfig c = parse_experiment_config(kSmallConfig);
    const ExperimentOutput a = run_experiment(c);
    const ExperimentOutput b = run_experiment(c);
    REQUIRE(results_csv(a.records) == results_csv(b.records));

    ExperimentConfig wider = c;
    wider.dataset_sizes = {150, 300};
    const ExperimentOutput w = run_experiment(wider);
    for (const ResultRecord& r : a.records)
        for (const ResultRecord& s : w.records)
            if (s.nd == r.nd && s.score == r.score && s.dist == r.dist && s.rep == r.rep) {
                REQUIRE(s.edges == r.edges);
                REQUIRE(s.hamming == r.hamming);
            }
}

TEST_CASE("run_experiment requires a resolved seed") {
    ExperimentConfig c = parse_experiment_config(kSmallConfig);
    c.base_seed.reset();
    REQUIRE_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("aggregate reproduces the worked example") {
    ExperimentOutput out;
    out.structures.emplace_back("g", gen_hub(4, 1));
    const std::vector<int> hammings{0, 0, 2, 2};
    for (size_t i = 0; i < hammings.size(); ++i) {
        ResultRecord r;
        r.structure = "g";
        r.score = "bjp";
        r.nd = 100;
        r.dist = static_cast<int>(i);
        r.rep = 0;
        r.hamming = hammings[i];
        r.success = hammings[i] == 0;
        r.seconds = 0.5;
        out.records.push_back(r);
    }
    const std::vector<SummaryRow> rows = aggregate(out);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].structure == "g");
    REQUIRE(rows[0].n == 4);
    REQUIRE(rows[0].irr == 6);
    REQUIRE(rows[0].records == 4);
    REQUIRE(rows[0].hamming_mean == Catch::Approx(1.0));
    REQUIRE(rows[0].success_rate == Catch::Approx(0.5));
    // sample standard deviation of {0,0,2,2}
    REQUIRE(rows[0].hamming_std == Catch::Approx(std::sqrt(4.0 / 3.0)));
    REQUIRE(rows[0].runtime_std == Catch::Approx(0.0));
}

TEST_CASE("aggregate handles single records and errors") {
    ExperimentOutput out;
    out.structures.emplace_back("g", UndirectedGraph(3));
    ResultRecord ok;
    ok.structure = "g";
    ok.score = "bjp";
    ok.nd = 50;
    ok.hamming = 1;
    ok.seconds = 0.25;
    out.records.push_back(ok);
    ResultRecord bad;
    bad.structure = "g";
    bad.score = "bjp";
    bad.nd = 50;
    bad.rep = 1;
    bad.error = "boom";
    out.records.push_back(bad);

    const std::vector<SummaryRow> rows = aggregate(out);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].records == 2);
    REQUIRE(rows[0].errors == 1);
    REQUIRE(rows[0].hamming_mean == Catch::Approx(1.0));
    REQUIRE(rows[0].hamming_std == 0.0);
    REQUIRE(rows[0].success_rate == Catch::Approx(0.0));

    REQUIRE_THROWS_AS(aggregate(ExperimentOutput{}), std::invalid_argument);
}

TEST_CASE("csv writers emit stable documented headers") {
    ExperimentOutput out;
    out.structures.emplace_back("g", UndirectedGraph(2, {{0, 1}}));
    ResultRecord r;
    r.structure = "g";
    r.score = "bjp";
    r.nd = 10;
    r.edges = "0-1";
    r.hamming = 0;
    r.success = true;
    r.seconds = 0.125;
    out.records.push_back(r);
    ResultRecord err = r;
    err.rep = 1;
    err.edges.clear();
    err.hamming = -1;
    err.success = false;
    err.error = "sampler, broke\nbadly";
    out.records.push_back(err);

    const std::string res = results_csv(out.records);
    REQUIRE(res.find("structure,score,nd,dist,rep,edges,hamming,success,error\n") == 0);
    REQUIRE(res.find("g,bjp,10,0,0,0-1,0,1,\n") != std::string::npos);
    REQUIRE(res.find("g,bjp,10,0,1,,,0,sampler; broke;badly\n") != std::string::npos);

    const std::string tim = timings_csv(out.records);
    REQUIRE(tim.find("structure,score,nd,dist,rep,seconds\n") == 0);
    REQUIRE(tim.find("g,bjp,10,0,0,0.125000\n") != std::string::npos);

    const std::string sum = summary_csv(aggregate(out));
    REQUIRE(sum.find("structure,n,irr,score,nd,records,errors,") == 0);
    REQUIRE(sum.find("g,2,0,bjp,10,2,1,") != std::string::npos);
}

TEST_CASE("hamming zero means the truth was recovered") {
    // strong-coupling model on a single edge, plenty of data: exhaustive
    // search should find the true 2-node graph and report success
    const ExperimentConfig c = parse_experiment_config(R"({
      "base_seed": 3,
      "structures": [{"id": "edge", "kind": "edges", "edges": "2\n0 1\n"}],
      "scores": ["bjp"],
      "method": "exhaustive",
      "dataset_sizes": [400],
      "gibbs": {"burn_in": 30, "iterations_per_sample": 10}
    })");
    const ExperimentOutput out = run_experiment(c);
    REQUIRE(out.records.size() == 1);
    if (out.records[0].hamming == 0) {
        REQUIRE(out.records[0].success);
        REQUIRE(out.records[0].edges == "0-1");
    }
}
