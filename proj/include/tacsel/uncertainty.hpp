#pragma once

#include <string>
#include <vector>

#include "tacsel/classifier.hpp"
#include "tacsel/rng.hpp"

namespace tacsel {

struct UncertaintyReport {
    std::vector<double> entropy;   // H_i, nats
    std::vector<double> variance;  // Var_i
    std::vector<double> mean;      // mu_i
};

enum class Strategy { entropy, variance, random };

Strategy strategy_from_string(const std::string& name);
std::string strategy_name(Strategy s);

// H_i = -(1/(n*l)) sum_{j,k} p_{i,j,k} ln p_{i,j,k}, with 0 ln 0 = 0.
std::vector<double> class_entropy(const PredictionSet& preds);

// mu_i = (1/(n*l)) sum p; Var_i = (1/(n*l)) sum (p - mu_i)^2 (population).
std::vector<double> class_mean(const PredictionSet& preds);
std::vector<double> class_variance(const PredictionSet& preds);

UncertaintyReport analyze(const PredictionSet& preds);

// entropy/variance: argmax (ties to the lowest class id); random: uniform
// over the m classes. Returns a class id in 1..m.
int select_class(const UncertaintyReport* report, Strategy strategy, int n_classes, Rng& rng);

}  // namespace tacsel
