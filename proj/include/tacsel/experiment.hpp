#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tacsel/active_loop.hpp"
#include "tacsel/config.hpp"
#include "tacsel/frame_select.hpp"
#include "tacsel/optical_flow.hpp"
#include "tacsel/sensor_sim.hpp"

namespace tacsel {

// Everything a run needs, assembled from a flat config file and validated
// against module preconditions before anything starts.
struct ExperimentConfig {
    ClassSet classes;          // separability already applied
    SimConfig sim;
    ParamRanges ranges;
    FrameSelectConfig frame_select;
    LkConfig lk;
    StrategyConfig strategy;   // strategy field set per run
    int test_samples = 25;   // l, size of the comparison-object test pool
    int runs = 10;
    uint64_t seed = 1;
    bool parallel = false;
    int generate_per_class = 10;
    std::vector<double> sweep_rates;

    static ExperimentConfig from_config(const Config& cfg);
};

// Full Model-1 feature path: background subtract, loading-window frame
// selection, Lucas-Kanade feature extraction.
std::vector<double> features_from_video(const PressVideo& video, const FrameSelectConfig& fs,
                                        const LkConfig& lk);

// Per-class training pools sized for the worst acquisition case plus the
// fixed held-out test pool. test_class > 0 draws every test sample from that
// single comparison object; test_class = 0 builds a balanced pool.
// Deterministic in (config, seed, test_class).
SamplePools build_pools(const ExperimentConfig& cfg, uint64_t seed, int test_class = 0);

struct AggregateRow {
    std::string strategy;
    int iter = 0;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
};

// Paired runs: run r of every strategy shares pools, model init, and
// training streams, so traces only diverge through acquisition choices.
struct ExperimentResult {
    std::vector<RunRecord> runs;
    std::vector<AggregateRow> aggregate;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::vector<Strategy>& strategies);

std::vector<AggregateRow> aggregate_runs(const std::vector<RunRecord>& runs, int n_classes);

struct SweepRow {
    double rate = 0.0;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
};

// Baseline (no active sampling) accuracy/MAE per dropout rate, paired pools
// and init across rates.
std::vector<SweepRow> dropout_sweep(const ExperimentConfig& cfg);

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);
std::vector<AggregateRow> read_aggregate_csv(const std::string& path);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace tacsel
