#include "tacsel/active_loop.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "tacsel/errors.hpp"
#include "tacsel/eval.hpp"

namespace tacsel {

std::vector<size_t> select_training_set(size_t reservoir_size, size_t cap, Rng& rng) {
    if (reservoir_size == 0) throw DataError("select_training_set: empty reservoir");
    std::vector<size_t> idx(reservoir_size);
    std::iota(idx.begin(), idx.end(), 0);
    if (reservoir_size <= cap) return idx;
    rng.shuffle(idx);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

namespace {

// Fixed stream tags per run phase so strategies share the exact same draws
// up to the point their acquisition decisions diverge.
enum StreamTag : uint64_t {
    kModelInit = 1,
    kInitialTrain = 2,
    kInitialMc = 3,
    kIterBase = 10,  // + 10*t + offset below
    kOffMc = 0,
    kOffSelect = 1,
    kOffSubsample = 2,
    kOffTrain = 3,
};

struct Reservoir {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    std::vector<int> class_counts;
};

void train_on_selection(MlpClassifier& model, const Reservoir& tr,
                        const std::vector<size_t>& sel, int epochs,
                        const StrategyConfig& cfg, uint64_t seed) {
    std::vector<std::vector<double>> tx;
    std::vector<int> ty;
    tx.reserve(sel.size());
    for (size_t i : sel) {
        tx.push_back(tr.x[i]);
        ty.push_back(tr.y[i]);
    }
    model.fit_standardizer(tx);
    TrainConfig tc;
    tc.epochs = epochs;
    tc.learning_rate = cfg.learning_rate;
    tc.batch_size = cfg.batch_size;
    tc.seed = seed;
    model.train(tx, ty, tc);
}

void evaluate(const MlpClassifier& model, const SamplePools& pools, const ClassSet& classes,
              IterationEntry& entry) {
    std::vector<int> preds;
    preds.reserve(pools.test_x.size());
    size_t correct = 0;
    for (size_t k = 0; k < pools.test_x.size(); ++k) {
        const int c = model.predict_class(pools.test_x[k]);
        preds.push_back(c);
        if (c == pools.test_y[k]) ++correct;
    }
    entry.accuracy = static_cast<double>(correct) / static_cast<double>(pools.test_x.size());
    entry.mae = mae(preds, pools.test_y, classes);
}

}  // namespace

RunRecord run_active_sampling(const ClassSet& classes, const SamplePools& pools,
                              const StrategyConfig& cfg, uint64_t seed, int run_id) {
    classes.validate();
    const int m = classes.size();
    if (static_cast<int>(pools.per_class.size()) != m) {
        throw DataError("run_active_sampling: pool count != class count");
    }
    if (pools.test_x.empty() || pools.test_x.size() != pools.test_y.size()) {
        throw DataError("run_active_sampling: bad test pool");
    }
    if (cfg.reservoir_cap < cfg.s0) throw ConfigError("reservoir_cap must be >= s0");
    const size_t needed = static_cast<size_t>(cfg.s0) +
                          static_cast<size_t>(cfg.iterations) * cfg.samples_per_iter;
    for (int c = 0; c < m; ++c) {
        if (pools.per_class[c].size() < needed) {
            throw InsufficientPoolError("class " + std::to_string(c + 1) + " pool has " +
                                        std::to_string(pools.per_class[c].size()) +
                                        " samples, worst case needs " + std::to_string(needed));
        }
    }

    Rng root(seed);
    const int input_dim = static_cast<int>(pools.per_class[0][0].size());
    MlpClassifier model(input_dim, cfg.hidden_dim, m, cfg.dropout,
                        root.child(kModelInit).seed());

    Reservoir tr;
    tr.class_counts.assign(m, 0);
    std::vector<size_t> cursor(m, 0);
    const auto acquire = [&](int class_id, int count) {
        const int c = class_id - 1;
        for (int i = 0; i < count; ++i) {
            if (cursor[c] >= pools.per_class[c].size()) {
                throw InsufficientPoolError("class " + std::to_string(class_id) +
                                            " pool exhausted");
            }
            tr.x.push_back(pools.per_class[c][cursor[c]++]);
            tr.y.push_back(class_id);
            ++tr.class_counts[c];
        }
    };

    RunRecord record;
    record.run_id = run_id;
    record.strategy = cfg.strategy;
    record.seed = seed;

    for (int c = 1; c <= m; ++c) acquire(c, cfg.s0);
    {
        std::vector<size_t> all(tr.x.size());
        std::iota(all.begin(), all.end(), 0);
        train_on_selection(model, tr, all, cfg.e0, cfg, root.child(kInitialTrain).seed());
    }

    IterationEntry init;
    init.iter = 0;
    init.reservoir_size = static_cast<int>(tr.x.size());
    init.class_counts = tr.class_counts;
    evaluate(model, pools, classes, init);
    init.report =
        analyze(model.predict_mc(pools.test_x, cfg.mc_queries, root.child(kInitialMc).seed()));
    record.entries.push_back(std::move(init));

    for (int t = 1; t <= cfg.iterations; ++t) {
        const uint64_t base = kIterBase + 10 * static_cast<uint64_t>(t);
        IterationEntry entry;
        entry.iter = t;

        const PredictionSet preds =
            model.predict_mc(pools.test_x, cfg.mc_queries, root.child(base + kOffMc).seed());
        entry.report = analyze(preds);

        Rng select_rng = root.child(base + kOffSelect);
        entry.selected_class = select_class(&entry.report, cfg.strategy, m, select_rng);
        acquire(entry.selected_class, cfg.samples_per_iter);

        Rng sub_rng = root.child(base + kOffSubsample);
        const std::vector<size_t> sel =
            select_training_set(tr.x.size(), static_cast<size_t>(cfg.reservoir_cap), sub_rng);
        train_on_selection(model, tr, sel, cfg.epochs_iter, cfg,
                           root.child(base + kOffTrain).seed());

        entry.reservoir_size = static_cast<int>(tr.x.size());
        entry.class_counts = tr.class_counts;
        evaluate(model, pools, classes, entry);
        record.entries.push_back(std::move(entry));
    }
    return record;
}

void write_run_csv(const std::string& path, const RunRecord& record, int n_classes) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "run_id,strategy,iter,selected_class,accuracy,mae";
    for (int i = 1; i <= n_classes; ++i) out << ",H_" << i;
    for (int i = 1; i <= n_classes; ++i) out << ",Var_" << i;
    out << ",reservoir_size";
    for (int i = 1; i <= n_classes; ++i) out << ",count_" << i;
    out << "\n";

    char buf[64];
    const auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    for (const auto& e : record.entries) {
        out << record.run_id << ',' << strategy_name(record.strategy) << ',' << e.iter << ','
            << e.selected_class << ',' << num(e.accuracy) << ',' << num(e.mae);
        for (double h : e.report.entropy) out << ',' << num(h);
        for (double v : e.report.variance) out << ',' << num(v);
        out << ',' << e.reservoir_size;
        for (int c : e.class_counts) out << ',' << c;
        out << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace tacsel
