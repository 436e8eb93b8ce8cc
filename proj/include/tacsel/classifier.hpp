#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tacsel/rng.hpp"

namespace tacsel {

struct TrainConfig {
    int epochs = 100;
    double learning_rate = 0.05;
    int batch_size = 16;  // effective batch = min(batch_size, dataset size)
    uint64_t seed = 0;
};

// p[i][j][k]: class i in 1..m, stochastic query j in 1..n, test sample k in 1..l.
struct PredictionSet {
    int m = 0, n = 0, l = 0;
    std::vector<double> p;

    PredictionSet() = default;
    PredictionSet(int m_, int n_, int l_)
        : m(m_), n(n_), l(l_), p(static_cast<size_t>(m_) * n_ * l_, 0.0) {}

    double& at(int i, int j, int k) {
        return p[(static_cast<size_t>(i) * n + j) * l + k];
    }
    double at(int i, int j, int k) const {
        return p[(static_cast<size_t>(i) * n + j) * l + k];
    }
};

struct MlpGradients {
    double loss = 0.0;
    std::vector<double> w1, b1, w2, b2;
};

// Two-layer softmax classifier with inverted dropout on the hidden layer.
// Feature standardization (z-scoring on the current training set) is part of
// the model so train-time statistics follow the checkpoint.
class MlpClassifier {
public:
    MlpClassifier(int input_dim, int hidden_dim, int n_classes, double dropout_rate,
                  uint64_t init_seed);

    int input_dim() const { return in_; }
    int hidden_dim() const { return hidden_; }
    int n_classes() const { return out_; }
    double dropout_rate() const { return dropout_; }

    // z-scoring statistics from a training set; zero-variance dims pass through.
    void fit_standardizer(const std::vector<std::vector<double>>& x);

    std::vector<double> forward(const std::vector<double>& x) const;  // deterministic
    std::vector<double> forward_stochastic(const std::vector<double>& x, Rng& rng) const;

    // Mean cross-entropy loss and gradients over a batch; optional fixed
    // dropout masks (one per sample, hidden_dim each, already 1/(1-rate)
    // scaled). Labels are class ids 1..m.
    MlpGradients compute_gradients(const std::vector<std::vector<double>>& x,
                                   const std::vector<int>& y,
                                   const std::vector<std::vector<double>>* masks = nullptr) const;

    // Mini-batch SGD with dropout active; returns per-epoch mean loss.
    std::vector<double> train(const std::vector<std::vector<double>>& x,
                              const std::vector<int>& y, const TrainConfig& cfg);

    PredictionSet predict_mc(const std::vector<std::vector<double>>& x, int n_queries,
                             uint64_t seed) const;

    // Deterministic argmax class id (1..m); ties go to the lowest id.
    int predict_class(const std::vector<double>& x) const;
    double evaluate_accuracy(const std::vector<std::vector<double>>& x,
                             const std::vector<int>& y) const;

    // Versioned little-endian binary checkpoint (magic "HMLP").
    void save(const std::string& path) const;
    static MlpClassifier load(const std::string& path);

private:
    friend struct MlpTestAccess;
    std::vector<double> standardize(const std::vector<double>& x) const;
    std::vector<double> forward_masked(const std::vector<double>& x,
                                       const std::vector<double>* mask) const;

    int in_, hidden_, out_;
    double dropout_;
    std::vector<double> w1_, b1_;  // hidden x in
    std::vector<double> w2_, b2_;  // out x hidden
    std::vector<double> mu_, sd_;
};

// Test hook: direct weight access for finite-difference gradient checks.
struct MlpTestAccess {
    static std::vector<double>& w1(MlpClassifier& m) { return m.w1_; }
    static std::vector<double>& b1(MlpClassifier& m) { return m.b1_; }
    static std::vector<double>& w2(MlpClassifier& m) { return m.w2_; }
    static std::vector<double>& b2(MlpClassifier& m) { return m.b2_; }
};

}  // namespace tacsel
