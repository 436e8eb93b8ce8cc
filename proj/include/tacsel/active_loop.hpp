#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tacsel/classifier.hpp"
#include "tacsel/sensor_sim.hpp"
#include "tacsel/uncertainty.hpp"

namespace tacsel {

struct StrategyConfig {
    Strategy strategy = Strategy::variance;
    int s0 = 5;                // initial samples per class
    int e0 = 100;              // initial training epochs
    int iterations = 5;        // N
    int samples_per_iter = 5;  // s, added to the selected class
    int reservoir_cap = 80;    // M
    int epochs_iter = 50;      // e
    int mc_queries = 20;       // n stochastic predictions per test sample
    int hidden_dim = 128;
    double dropout = 0.2;
    double learning_rate = 0.05;
    int batch_size = 16;
};

// Per-class labeled feature pools plus the fixed held-out test set. The test
// set serves both uncertainty estimation and accuracy evaluation.
struct SamplePools {
    std::vector<std::vector<std::vector<double>>> per_class;  // [class idx][sample]
    std::vector<std::vector<double>> test_x;
    std::vector<int> test_y;
};

struct IterationEntry {
    int iter = 0;
    int selected_class = 0;  // 0 for the initial entry
    double accuracy = 0.0;
    double mae = 0.0;
    UncertaintyReport report;
    int reservoir_size = 0;
    std::vector<int> class_counts;
};

struct RunRecord {
    int run_id = 0;
    Strategy strategy = Strategy::variance;
    uint64_t seed = 0;
    std::vector<IterationEntry> entries;  // N + 1
};

// Alg-style reservoir subsampling: keep everything, draw a uniform
// without-replacement subset of size cap when the reservoir exceeds it.
// Returned indices are sorted.
std::vector<size_t> select_training_set(size_t reservoir_size, size_t cap, Rng& rng);

// Full active-sampling run: initial training, then `iterations` rounds of
// MC-dropout uncertainty -> class selection -> acquisition -> capped
// retraining (warm start). Deterministic in (pools, config, seed).
RunRecord run_active_sampling(const ClassSet& classes, const SamplePools& pools,
                              const StrategyConfig& cfg, uint64_t seed, int run_id = 0);

void write_run_csv(const std::string& path, const RunRecord& record, int n_classes);

}  // namespace tacsel
