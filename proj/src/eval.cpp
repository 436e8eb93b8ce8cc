#include "tacsel/eval.hpp"

#include <cmath>

#include "tacsel/errors.hpp"

namespace tacsel {

double mae(const std::vector<int>& predicted, const std::vector<int>& truth,
           const ClassSet& classes) {
    if (predicted.size() != truth.size() || predicted.empty()) {
        throw DataError("mae: prediction/truth size mismatch");
    }
    double acc = 0.0;
    for (size_t i = 0; i < predicted.size(); ++i) {
        acc += std::abs(classes.by_id(predicted[i]).compliance - classes.by_id(truth[i]).compliance);
    }
    return acc / static_cast<double>(predicted.size());
}

AggregateStat aggregate(const std::vector<double>& values) {
    AggregateStat s;
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(values.size()));
    return s;
}

}  // namespace tacsel
