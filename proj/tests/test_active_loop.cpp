#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "tacsel/active_loop.hpp"
#include "tacsel/errors.hpp"

using namespace tacsel;

namespace {

ClassSet three_classes() {
    return {{{1, 1.1}, {2, 0.8}, {3, 0.5}}};
}

// Small synthetic pools: one Gaussian cluster per class in feature space.
SamplePools toy_pools(int per_class, int test_per_class, uint64_t seed) {
    Rng rng(seed);
    SamplePools pools;
    pools.per_class.resize(3);
    const auto sample = [&rng](int c) {
        std::vector<double> row(6, 0.0);
        row[2 * c] = 1.5;
        row[2 * c + 1] = -1.0;
        for (auto& v : row) v += 0.3 * rng.normal();
        return row;
    };
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < per_class; ++i) pools.per_class[c].push_back(sample(c));
    }
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < test_per_class; ++i) {
            pools.test_x.push_back(sample(c));
            pools.test_y.push_back(c + 1);
        }
    }
    return pools;
}

StrategyConfig small_config(Strategy s) {
    StrategyConfig cfg;
    cfg.strategy = s;
    cfg.s0 = 2;
    cfg.e0 = 30;
    cfg.iterations = 3;
    cfg.samples_per_iter = 2;
    cfg.reservoir_cap = 10;
    cfg.epochs_iter = 15;
    cfg.mc_queries = 5;
    cfg.hidden_dim = 16;
    cfg.dropout = 0.2;
    return cfg;
}

int argmax_id(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best + 1;
}

}  // namespace

TEST_CASE("training set selection keeps everything under the cap") {
    Rng rng(1);
    const auto all = select_training_set(25, 80, rng);
    REQUIRE(all.size() == 25);
    for (size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);
}

TEST_CASE("training set selection subsamples above the cap") {
    Rng rng(2);
    const auto sel = select_training_set(100, 80, rng);
    REQUIRE(sel.size() == 80);
    std::set<size_t> distinct(sel.begin(), sel.end());
    CHECK(distinct.size() == 80);
    for (size_t i = 1; i < sel.size(); ++i) CHECK(sel[i] > sel[i - 1]);  // sorted
    for (size_t i : sel) CHECK(i < 100);
}

TEST_CASE("training set selection is deterministic per seed and rejects empties") {
    Rng a(7), b(7), c(8), d(7);
    CHECK(select_training_set(50, 20, a) == select_training_set(50, 20, b));
    CHECK(select_training_set(50, 20, d) != select_training_set(50, 20, c));
    Rng r(1);
    CHECK_THROWS_AS(select_training_set(0, 5, r), DataError);
}

TEST_CASE("subsampling is uniform: inclusion frequency one half") {
    // |TR| = 10, M = 5 over 10,000 seeded draws
    std::vector<int> hits(10, 0);
    const int draws = 10000;
    Rng rng(99);
    for (int d = 0; d < draws; ++d) {
        for (size_t i : select_training_set(10, 5, rng)) ++hits[i];
    }
    for (int h : hits) {
        const double freq = static_cast<double>(h) / draws;
        CHECK(freq >= 0.47);
        CHECK(freq <= 0.53);
    }
}

TEST_CASE("budget accounting and entry count") {
    const ClassSet classes = three_classes();
    const SamplePools pools = toy_pools(10, 4, 5);
    for (Strategy s : {Strategy::entropy, Strategy::variance, Strategy::random}) {
        const StrategyConfig cfg = small_config(s);
        const RunRecord rec = run_active_sampling(classes, pools, cfg, 42, 3);
        REQUIRE(rec.entries.size() == static_cast<size_t>(cfg.iterations) + 1);
        CHECK(rec.run_id == 3);
        CHECK(rec.strategy == s);
        CHECK(rec.seed == 42);
        for (int t = 0; t <= cfg.iterations; ++t) {
            const IterationEntry& e = rec.entries[t];
            CHECK(e.iter == t);
            CHECK(e.reservoir_size == 3 * cfg.s0 + t * cfg.samples_per_iter);
            int total = 0;
            for (int c : e.class_counts) total += c;
            CHECK(total == e.reservoir_size);
            CHECK(e.accuracy >= 0.0);
            CHECK(e.accuracy <= 1.0);
            CHECK(e.mae >= 0.0);
            REQUIRE(e.report.entropy.size() == 3);
            REQUIRE(e.report.variance.size() == 3);
        }
        CHECK(rec.entries[0].selected_class == 0);  // initial entry acquires nothing
    }
}

TEST_CASE("logged selections equal the argmax of the logged report") {
    const ClassSet classes = three_classes();
    const SamplePools pools = toy_pools(10, 4, 6);
    for (Strategy s : {Strategy::entropy, Strategy::variance}) {
        const RunRecord rec = run_active_sampling(classes, pools, small_config(s), 17);
        for (size_t t = 1; t < rec.entries.size(); ++t) {
            const auto& e = rec.entries[t];
            const auto& metric =
                s == Strategy::entropy ? e.report.entropy : e.report.variance;
            CHECK(e.selected_class == argmax_id(metric));
        }
    }
}

TEST_CASE("zero iterations yield only the initial entry") {
    StrategyConfig cfg = small_config(Strategy::variance);
    cfg.iterations = 0;
    const RunRecord rec =
        run_active_sampling(three_classes(), toy_pools(4, 2, 7), cfg, 1);
    REQUIRE(rec.entries.size() == 1);
    CHECK(rec.entries[0].reservoir_size == 3 * cfg.s0);
}

TEST_CASE("strategies share the initial entry on the same seed and pools") {
    const ClassSet classes = three_classes();
    const SamplePools pools = toy_pools(10, 4, 8);
    const RunRecord rnd = run_active_sampling(classes, pools, small_config(Strategy::random), 21);
    const RunRecord var =
        run_active_sampling(classes, pools, small_config(Strategy::variance), 21);
    CHECK(rnd.entries[0].accuracy == var.entries[0].accuracy);
    CHECK(rnd.entries[0].mae == var.entries[0].mae);
    CHECK(rnd.entries[0].report.entropy == var.entries[0].report.entropy);
    CHECK(rnd.entries[0].report.variance == var.entries[0].report.variance);
}

TEST_CASE("runs are deterministic in (pools, config, seed)") {
    const ClassSet classes = three_classes();
    const SamplePools pools = toy_pools(10, 4, 9);
    const StrategyConfig cfg = small_config(Strategy::entropy);
    const RunRecord a = run_active_sampling(classes, pools, cfg, 33);
    const RunRecord b = run_active_sampling(classes, pools, cfg, 33);
    REQUIRE(a.entries.size() == b.entries.size());
    for (size_t t = 0; t < a.entries.size(); ++t) {
        CHECK(a.entries[t].selected_class == b.entries[t].selected_class);
        CHECK(a.entries[t].accuracy == b.entries[t].accuracy);
        CHECK(a.entries[t].mae == b.entries[t].mae);
        CHECK(a.entries[t].report.entropy == b.entries[t].report.entropy);
        CHECK(a.entries[t].report.variance == b.entries[t].report.variance);
        CHECK(a.entries[t].class_counts == b.entries[t].class_counts);
    }
}

TEST_CASE("insufficient pools and bad configs are rejected") {
    const ClassSet classes = three_classes();
    const StrategyConfig cfg = small_config(Strategy::variance);  // worst case 2 + 3*2 = 8
    CHECK_THROWS_AS(run_active_sampling(classes, toy_pools(7, 4, 10), cfg, 1),
                    InsufficientPoolError);
    StrategyConfig bad = cfg;
    bad.reservoir_cap = 1;  // < s0
    CHECK_THROWS_AS(run_active_sampling(classes, toy_pools(10, 4, 10), bad, 1), ConfigError);

    SamplePools no_test = toy_pools(10, 4, 11);
    no_test.test_x.clear();
    no_test.test_y.clear();
    CHECK_THROWS_AS(run_active_sampling(classes, no_test, cfg, 1), DataError);
}

TEST_CASE("run CSV has the documented schema") {
    const ClassSet classes = three_classes();
    const RunRecord rec =
        run_active_sampling(classes, toy_pools(10, 4, 12), small_config(Strategy::variance), 55, 2);
    const std::string path = "run_schema.csv";
    write_run_csv(path, rec, 3);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "run_id,strategy,iter,selected_class,accuracy,mae,H_1,H_2,H_3,Var_1,Var_2,Var_3,"
          "reservoir_size,count_1,count_2,count_3");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        std::stringstream ss(line);
        std::string field;
        int fields = 0;
        while (std::getline(ss, field, ',')) ++fields;
        CHECK(fields == 16);
        CHECK(line.substr(0, 11) == "2,variance,");
    }
    CHECK(rows == static_cast<int>(rec.entries.size()));
    std::remove(path.c_str());
}
