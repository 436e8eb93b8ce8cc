#include "tacsel/uncertainty.hpp"

#include <cmath>

#include "tacsel/errors.hpp"

namespace tacsel {

Strategy strategy_from_string(const std::string& name) {
    if (name == "entropy") return Strategy::entropy;
    if (name == "variance") return Strategy::variance;
    if (name == "random") return Strategy::random;
    throw ConfigError("unknown strategy: " + name);
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::entropy:
            return "entropy";
        case Strategy::variance:
            return "variance";
        case Strategy::random:
            return "random";
    }
    return "unknown";
}

std::vector<double> class_entropy(const PredictionSet& preds) {
    const double inv = 1.0 / (static_cast<double>(preds.n) * preds.l);
    std::vector<double> h(preds.m, 0.0);
    for (int i = 0; i < preds.m; ++i) {
        double acc = 0.0;
        for (int j = 0; j < preds.n; ++j) {
            for (int k = 0; k < preds.l; ++k) {
                const double p = preds.at(i, j, k);
                if (p > 0.0) acc -= p * std::log(p);
            }
        }
        h[i] = acc * inv;
    }
    return h;
}

std::vector<double> class_mean(const PredictionSet& preds) {
    const double inv = 1.0 / (static_cast<double>(preds.n) * preds.l);
    std::vector<double> mu(preds.m, 0.0);
    for (int i = 0; i < preds.m; ++i) {
        double acc = 0.0;
        for (int j = 0; j < preds.n; ++j) {
            for (int k = 0; k < preds.l; ++k) acc += preds.at(i, j, k);
        }
        mu[i] = acc * inv;
    }
    return mu;
}

std::vector<double> class_variance(const PredictionSet& preds) {
    const double inv = 1.0 / (static_cast<double>(preds.n) * preds.l);
    const std::vector<double> mu = class_mean(preds);
    std::vector<double> var(preds.m, 0.0);
    for (int i = 0; i < preds.m; ++i) {
        double acc = 0.0;
        for (int j = 0; j < preds.n; ++j) {
            for (int k = 0; k < preds.l; ++k) {
                const double d = preds.at(i, j, k) - mu[i];
                acc += d * d;
            }
        }
        var[i] = acc * inv;
    }
    return var;
}

UncertaintyReport analyze(const PredictionSet& preds) {
    UncertaintyReport r;
    r.entropy = class_entropy(preds);
    r.mean = class_mean(preds);
    r.variance = class_variance(preds);
    return r;
}

namespace {

int argmax_lowest_id(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best + 1;
}

}  // namespace

int select_class(const UncertaintyReport* report, Strategy strategy, int n_classes, Rng& rng) {
    if (n_classes < 1) throw ConfigError("select_class: empty class set");
    switch (strategy) {
        case Strategy::entropy:
            if (!report) throw DataError("entropy strategy requires an uncertainty report");
            return argmax_lowest_id(report->entropy);
        case Strategy::variance:
            if (!report) throw DataError("variance strategy requires an uncertainty report");
            return argmax_lowest_id(report->variance);
        case Strategy::random:
            return static_cast<int>(rng.below(static_cast<uint64_t>(n_classes))) + 1;
    }
    throw ConfigError("select_class: bad strategy");
}

}  // namespace tacsel
