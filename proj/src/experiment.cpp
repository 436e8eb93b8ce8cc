#include "tacsel/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "tacsel/errors.hpp"
#include "tacsel/eval.hpp"

namespace tacsel {

ExperimentConfig ExperimentConfig::from_config(const Config& cfg) {
    ExperimentConfig e;

    const std::vector<double> comps =
        cfg.get_double_list("classes.compliance", {1.13, 1.02, 0.79, 0.68, 0.44});
    for (size_t i = 0; i < comps.size(); ++i) {
        e.classes.classes.push_back({static_cast<int>(i) + 1, comps[i]});
    }
    e.classes.validate();
    const double separability = cfg.get_double("sensor.separability", 1.0);
    e.classes = apply_separability(e.classes, separability);

    e.sim.rows = cfg.get_int("sensor.rows", e.sim.rows);
    e.sim.cols = cfg.get_int("sensor.cols", e.sim.cols);
    e.sim.marker_grid = cfg.get_int("sensor.marker_grid", e.sim.marker_grid);
    e.sim.kernel_base = cfg.get_double("sensor.kernel_base", e.sim.kernel_base);
    e.sim.kernel_slope = cfg.get_double("sensor.kernel_slope", e.sim.kernel_slope);
    e.sim.intensity_per_mm = cfg.get_double("sensor.intensity_per_mm", e.sim.intensity_per_mm);
    e.sim.intensity_sat = cfg.get_double("sensor.intensity_sat", e.sim.intensity_sat);
    e.sim.displacement_gain = cfg.get_double("sensor.displacement_gain", e.sim.displacement_gain);
    e.sim.displacement_sat = cfg.get_double("sensor.displacement_sat", e.sim.displacement_sat);
    e.sim.marker_jitter = cfg.get_double("sensor.marker_jitter", e.sim.marker_jitter);
    e.sim.marker_contrast_gain =
        cfg.get_double("sensor.marker_contrast_gain", e.sim.marker_contrast_gain);
    e.sim.marker_contrast_sat =
        cfg.get_double("sensor.marker_contrast_sat", e.sim.marker_contrast_sat);
    if (e.sim.rows < 16 || e.sim.cols < 16) throw ConfigError("sensor.rows/cols too small");
    if (e.sim.marker_grid < 2) throw ConfigError("sensor.marker_grid must be >= 2");

    e.ranges.f_min = cfg.get_double("sensor.f_min", e.ranges.f_min);
    e.ranges.f_max = cfg.get_double("sensor.f_max", e.ranges.f_max);
    e.ranges.v_min = cfg.get_double("sensor.v_min", e.ranges.v_min);
    e.ranges.v_max = cfg.get_double("sensor.v_max", e.ranges.v_max);
    e.ranges.frame_rate = cfg.get_double("sensor.frame_rate", e.ranges.frame_rate);
    e.ranges.noise_sigma = cfg.get_double("sensor.noise_sigma", e.ranges.noise_sigma);
    if (e.ranges.f_min > e.ranges.f_max) throw ConfigError("sensor.f_min > sensor.f_max");
    if (e.ranges.v_min > e.ranges.v_max) throw ConfigError("sensor.v_min > sensor.v_max");
    if (e.ranges.f_min <= 0.0 || e.ranges.v_min <= 0.0) {
        throw ConfigError("sensor.f_min and sensor.v_min must be > 0");
    }
    if (e.ranges.frame_rate <= 0.0) throw ConfigError("sensor.frame_rate must be > 0");
    if (e.ranges.noise_sigma < 0.0) throw ConfigError("sensor.noise_sigma must be >= 0");
    // Worst-case loading phase must still give simulate_press its 3 frames.
    double c_min = e.classes.classes[0].compliance;
    for (const auto& c : e.classes.classes) c_min = std::min(c_min, c.compliance);
    if (c_min * e.ranges.f_min / e.ranges.v_max * e.ranges.frame_rate < 3.0) {
        throw ConfigError("sensor.frame_rate too low for the fastest/hardest press "
                          "(loading phase would have < 3 frames)");
    }

    e.frame_select.threshold = cfg.get_double("threshold", e.frame_select.threshold);
    e.frame_select.n_intermediate =
        cfg.get_int("n_intermediate_frames", e.frame_select.n_intermediate);
    if (e.frame_select.threshold <= 0.0) throw ConfigError("threshold must be > 0");
    if (e.frame_select.n_intermediate < 0) throw ConfigError("n_intermediate_frames must be >= 0");

    e.lk.max_points = cfg.get_int("lk.max_points", e.lk.max_points);
    e.lk.window = cfg.get_int("lk.window", e.lk.window);
    e.lk.max_iters = cfg.get_int("lk.max_iters", e.lk.max_iters);
    e.lk.epsilon = cfg.get_double("lk.epsilon", e.lk.epsilon);
    e.lk.min_distance = cfg.get_double("lk.min_distance", e.lk.min_distance);
    if (e.lk.max_points < 1) throw ConfigError("lk.max_points must be >= 1");
    if (e.lk.window < 3 || e.lk.window % 2 == 0) throw ConfigError("lk.window must be odd, >= 3");
    if (e.lk.max_iters < 1) throw ConfigError("lk.max_iters must be >= 1");
    if (e.lk.epsilon <= 0.0) throw ConfigError("lk.epsilon must be > 0");

    e.strategy.s0 = cfg.get_int("strategy.initial_per_class", e.strategy.s0);
    e.strategy.e0 = cfg.get_int("train.epochs_initial", e.strategy.e0);
    e.strategy.iterations = cfg.get_int("strategy.iterations", e.strategy.iterations);
    e.strategy.samples_per_iter = cfg.get_int("strategy.samples_per_iter", e.strategy.samples_per_iter);
    e.strategy.reservoir_cap = cfg.get_int("strategy.reservoir_cap", e.strategy.reservoir_cap);
    e.strategy.epochs_iter = cfg.get_int("train.epochs_iter", e.strategy.epochs_iter);
    e.strategy.mc_queries = cfg.get_int("strategy.mc_queries", e.strategy.mc_queries);
    e.strategy.dropout = cfg.get_double("model.dropout", e.strategy.dropout);
    e.strategy.hidden_dim = cfg.get_int("model.hidden", e.strategy.hidden_dim);
    e.strategy.learning_rate = cfg.get_double("train.lr", e.strategy.learning_rate);
    e.strategy.batch_size = cfg.get_int("train.batch", e.strategy.batch_size);
    if (e.strategy.s0 < 1 || e.strategy.iterations < 0 || e.strategy.samples_per_iter < 1 ||
        e.strategy.mc_queries < 1 || e.strategy.e0 < 1 || e.strategy.epochs_iter < 1) {
        throw ConfigError("strategy counts must be >= 1 (iterations >= 0)");
    }
    if (e.strategy.reservoir_cap < e.strategy.s0) {
        throw ConfigError("strategy.reservoir_cap must be >= strategy.initial_per_class");
    }
    if (e.strategy.dropout < 0.0 || e.strategy.dropout >= 1.0) {
        throw ConfigError("model.dropout must be in [0, 1)");
    }

    e.test_samples = cfg.get_int("strategy.test_samples", e.test_samples);
    if (e.test_samples < 1) throw ConfigError("strategy.test_samples must be >= 1");
    e.runs = cfg.get_int("runs.count", e.runs);
    if (e.runs < 1) throw ConfigError("runs.count must be >= 1");
    e.seed = cfg.get_u64("runs.seed", e.seed);
    e.parallel = cfg.get_bool("runs.parallel", e.parallel);
    e.generate_per_class = cfg.get_int("generate.per_class", e.generate_per_class);
    if (e.generate_per_class < 1) throw ConfigError("generate.per_class must be >= 1");
    e.sweep_rates = cfg.get_double_list("sweep.rates",
                                        {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5});
    for (double r : e.sweep_rates) {
        if (r < 0.0 || r >= 1.0) throw ConfigError("sweep.rates entries must be in [0, 1)");
    }
    return e;
}

std::vector<double> features_from_video(const PressVideo& video, const FrameSelectConfig& fs,
                                        const LkConfig& lk) {
    const SampleTensor sample = build_sample(video, fs);
    return extract_features(sample, lk).values;
}

SamplePools build_pools(const ExperimentConfig& cfg, uint64_t seed, int test_class) {
    const int per_class_train =
        cfg.strategy.s0 + cfg.strategy.iterations * cfg.strategy.samples_per_iter;
    Rng root(seed);

    SamplePools pools;
    pools.per_class.resize(cfg.classes.size());
    const auto train_set = generate_dataset(cfg.classes, per_class_train, cfg.ranges, cfg.sim,
                                            root.child(1).seed());
    for (const auto& s : train_set) {
        pools.per_class[s.video.label - 1].push_back(
            features_from_video(s.video, cfg.frame_select, cfg.lk));
    }

    Rng test_root = root.child(2);
    if (test_class == 0) {
        // Balanced pool, at least test_samples in total.
        const int m = cfg.classes.size();
        const int per_class = (cfg.test_samples + m - 1) / m;
        const auto test_set =
            generate_dataset(cfg.classes, per_class, cfg.ranges, cfg.sim, test_root.seed());
        for (const auto& s : test_set) {
            pools.test_x.push_back(features_from_video(s.video, cfg.frame_select, cfg.lk));
            pools.test_y.push_back(s.video.label);
        }
    } else {
        // All test samples come from one comparison object; the run's task is
        // to match it against the reference classes.
        const HardnessClass& cls = cfg.classes.by_id(test_class);
        for (int i = 0; i < cfg.test_samples; ++i) {
            Rng stream = test_root.child((static_cast<uint64_t>(test_class - 1) << 32) |
                                         static_cast<uint64_t>(i));
            const PressParams params = sample_press_params(cfg.ranges, stream);
            const PressVideo video = simulate_press(cls, params, cfg.sim, stream.next_u64());
            pools.test_x.push_back(features_from_video(video, cfg.frame_select, cfg.lk));
            pools.test_y.push_back(test_class);
        }
    }
    return pools;
}

std::vector<AggregateRow> aggregate_runs(const std::vector<RunRecord>& runs, int n_classes) {
    std::vector<AggregateRow> rows;
    if (runs.empty()) return rows;

    std::vector<std::string> strategies;
    for (const auto& r : runs) {
        const std::string name = strategy_name(r.strategy);
        if (std::find(strategies.begin(), strategies.end(), name) == strategies.end()) {
            strategies.push_back(name);
        }
    }

    const size_t n_iters = runs[0].entries.size();
    const char* metrics[] = {"accuracy", "mae", "entropy", "variance"};
    for (const auto& strat : strategies) {
        for (size_t it = 0; it < n_iters; ++it) {
            for (const char* metric : metrics) {
                std::vector<double> values;
                for (const auto& r : runs) {
                    if (strategy_name(r.strategy) != strat || it >= r.entries.size()) continue;
                    const auto& e = r.entries[it];
                    if (std::string(metric) == "accuracy") {
                        values.push_back(e.accuracy);
                    } else if (std::string(metric) == "mae") {
                        values.push_back(e.mae);
                    } else if (std::string(metric) == "entropy") {
                        double s = 0.0;
                        for (double h : e.report.entropy) s += h;
                        values.push_back(s / n_classes);
                    } else {
                        double s = 0.0;
                        for (double v : e.report.variance) s += v;
                        values.push_back(s / n_classes);
                    }
                }
                const AggregateStat st = aggregate(values);
                rows.push_back({strat, static_cast<int>(it), metric, st.mean, st.stddev});
            }
        }
    }
    return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::vector<Strategy>& strategies) {
    Rng root(cfg.seed);
    std::vector<uint64_t> run_seeds;
    for (int r = 0; r < cfg.runs; ++r) run_seeds.push_back(root.child(1000 + r).seed());

    std::vector<std::vector<RunRecord>> per_run(cfg.runs);
    const auto do_run = [&](int r) {
        // Comparison objects rotate through the classes across runs, so the
        // aggregate averages over every class as the unknown object.
        const int test_class = r % cfg.classes.size() + 1;
        const SamplePools pools = build_pools(cfg, run_seeds[r], test_class);
        std::vector<RunRecord> records;
        for (Strategy s : strategies) {
            StrategyConfig sc = cfg.strategy;
            sc.strategy = s;
            records.push_back(run_active_sampling(cfg.classes, pools, sc, run_seeds[r], r));
        }
        per_run[r] = std::move(records);
    };

    if (cfg.parallel && cfg.runs > 1) {
        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        std::vector<std::future<void>> futures;
        for (int r = 0; r < cfg.runs; ++r) {
            if (futures.size() >= workers) {
                futures.front().get();
                futures.erase(futures.begin());
            }
            futures.push_back(std::async(std::launch::async, do_run, r));
        }
        for (auto& f : futures) f.get();
    } else {
        for (int r = 0; r < cfg.runs; ++r) do_run(r);
    }

    ExperimentResult result;
    for (auto& records : per_run) {
        for (auto& rec : records) result.runs.push_back(std::move(rec));
    }
    result.aggregate = aggregate_runs(result.runs, cfg.classes.size());
    return result;
}

std::vector<SweepRow> dropout_sweep(const ExperimentConfig& cfg) {
    Rng root(cfg.seed);
    std::vector<SweepRow> rows;

    std::vector<std::vector<double>> acc_per_rate(cfg.sweep_rates.size());
    std::vector<std::vector<double>> mae_per_rate(cfg.sweep_rates.size());

    for (int r = 0; r < cfg.runs; ++r) {
        const uint64_t run_seed = root.child(1000 + r).seed();
        ExperimentConfig base = cfg;
        base.strategy.iterations = 0;  // baseline: initial training only
        const int test_class = r % cfg.classes.size() + 1;
        const SamplePools pools = build_pools(base, run_seed, test_class);

        for (size_t ri = 0; ri < cfg.sweep_rates.size(); ++ri) {
            StrategyConfig sc = base.strategy;
            sc.dropout = cfg.sweep_rates[ri];
            const RunRecord rec =
                run_active_sampling(base.classes, pools, sc, run_seed, r);
            acc_per_rate[ri].push_back(rec.entries[0].accuracy);
            mae_per_rate[ri].push_back(rec.entries[0].mae);
        }
    }

    for (size_t ri = 0; ri < cfg.sweep_rates.size(); ++ri) {
        const AggregateStat a = aggregate(acc_per_rate[ri]);
        const AggregateStat m = aggregate(mae_per_rate[ri]);
        rows.push_back({cfg.sweep_rates[ri], "accuracy", a.mean, a.stddev});
        rows.push_back({cfg.sweep_rates[ri], "mae", m.mean, m.stddev});
    }
    return rows;
}

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "strategy,iter,metric,mean,std\n";
    for (const auto& r : rows) {
        out << r.strategy << ',' << r.iter << ',' << r.metric << ',' << fmt_num(r.mean) << ','
            << fmt_num(r.stddev) << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

std::vector<AggregateRow> read_aggregate_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open: " + path);
    std::vector<AggregateRow> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        AggregateRow row;
        std::string iter, mean, stddev;
        if (!std::getline(ls, row.strategy, ',') || !std::getline(ls, iter, ',') ||
            !std::getline(ls, row.metric, ',') || !std::getline(ls, mean, ',') ||
            !std::getline(ls, stddev)) {
            throw DataError("bad aggregate CSV line: " + line);
        }
        row.iter = std::stoi(iter);
        row.mean = std::stod(mean);
        row.stddev = std::stod(stddev);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "rate,metric,mean,std\n";
    for (const auto& r : rows) {
        out << fmt_num(r.rate) << ',' << r.metric << ',' << fmt_num(r.mean) << ','
            << fmt_num(r.stddev) << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace tacsel
