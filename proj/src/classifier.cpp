#include "tacsel/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "tacsel/errors.hpp"
#include "tacsel/kernels.hpp"

namespace tacsel {

namespace {

void softmax_inplace(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (auto& v : z) {
        v = std::exp(v - zmax);
        sum += v;
    }
    for (auto& v : z) v /= sum;
}

template <typename T>
void put(std::ostream& out, T v) {
    static_assert(std::endian::native == std::endian::little);
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T take(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void put_vec(std::ostream& out, const std::vector<double>& v) {
    put<uint64_t>(out, v.size());
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> take_vec(std::istream& in) {
    std::vector<double> v(take<uint64_t>(in));
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    return v;
}

}  // namespace

MlpClassifier::MlpClassifier(int input_dim, int hidden_dim, int n_classes, double dropout_rate,
                             uint64_t init_seed)
    : in_(input_dim), hidden_(hidden_dim), out_(n_classes), dropout_(dropout_rate) {
    if (in_ < 1 || hidden_ < 1 || out_ < 2) throw ConfigError("bad MLP dimensions");
    if (dropout_ < 0.0 || dropout_ >= 1.0) throw ConfigError("dropout_rate must be in [0, 1)");

    Rng rng(init_seed);
    const auto glorot = [&rng](std::vector<double>& w, int fan_in, int fan_out, size_t count) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        w.resize(count);
        for (auto& v : w) v = rng.uniform(-limit, limit);
    };
    glorot(w1_, in_, hidden_, static_cast<size_t>(hidden_) * in_);
    b1_.assign(hidden_, 0.0);
    glorot(w2_, hidden_, out_, static_cast<size_t>(out_) * hidden_);
    b2_.assign(out_, 0.0);
}

void MlpClassifier::fit_standardizer(const std::vector<std::vector<double>>& x) {
    if (x.empty()) throw DataError("fit_standardizer: empty training set");
    mu_.assign(in_, 0.0);
    sd_.assign(in_, 1.0);
    for (const auto& row : x) {
        if (static_cast<int>(row.size()) != in_) throw DataError("feature dimension mismatch");
        for (int d = 0; d < in_; ++d) mu_[d] += row[d];
    }
    for (auto& m : mu_) m /= static_cast<double>(x.size());
    std::vector<double> var(in_, 0.0);
    for (const auto& row : x) {
        for (int d = 0; d < in_; ++d) {
            const double diff = row[d] - mu_[d];
            var[d] += diff * diff;
        }
    }
    for (int d = 0; d < in_; ++d) {
        const double v = var[d] / static_cast<double>(x.size());
        sd_[d] = v > 0.0 ? std::sqrt(v) : 1.0;  // zero-variance dims pass through
    }
}

std::vector<double> MlpClassifier::standardize(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != in_) throw DataError("feature dimension mismatch");
    if (mu_.empty()) return x;
    std::vector<double> z(in_);
    for (int d = 0; d < in_; ++d) z[d] = (x[d] - mu_[d]) / sd_[d];
    return z;
}

std::vector<double> MlpClassifier::forward_masked(const std::vector<double>& x,
                                                  const std::vector<double>* mask) const {
    const std::vector<double> z = standardize(x);
    std::vector<double> h(hidden_);
    kernels::matvec_f64(w1_.data(), z.data(), h.data(), hidden_, in_);
    for (int i = 0; i < hidden_; ++i) {
        h[i] += b1_[i];
        if (h[i] < 0.0) h[i] = 0.0;
        if (mask) h[i] *= (*mask)[i];
    }
    std::vector<double> out(out_);
    kernels::matvec_f64(w2_.data(), h.data(), out.data(), out_, hidden_);
    for (int i = 0; i < out_; ++i) out[i] += b2_[i];
    softmax_inplace(out);
    return out;
}

std::vector<double> MlpClassifier::forward(const std::vector<double>& x) const {
    return forward_masked(x, nullptr);
}

std::vector<double> MlpClassifier::forward_stochastic(const std::vector<double>& x,
                                                      Rng& rng) const {
    if (dropout_ == 0.0) return forward_masked(x, nullptr);
    std::vector<double> mask(hidden_);
    const double scale = 1.0 / (1.0 - dropout_);
    for (auto& m : mask) m = rng.uniform() < dropout_ ? 0.0 : scale;
    return forward_masked(x, &mask);
}

MlpGradients MlpClassifier::compute_gradients(
    const std::vector<std::vector<double>>& x, const std::vector<int>& y,
    const std::vector<std::vector<double>>* masks) const {
    if (x.empty() || x.size() != y.size()) throw DataError("compute_gradients: bad batch");
    MlpGradients g;
    g.w1.assign(w1_.size(), 0.0);
    g.b1.assign(hidden_, 0.0);
    g.w2.assign(w2_.size(), 0.0);
    g.b2.assign(out_, 0.0);

    for (size_t s = 0; s < x.size(); ++s) {
        if (y[s] < 1 || y[s] > out_) throw DataError("label out of range: " + std::to_string(y[s]));
        const std::vector<double>* mask = masks ? &(*masks)[s] : nullptr;

        const std::vector<double> z = standardize(x[s]);
        std::vector<double> pre(hidden_);
        kernels::matvec_f64(w1_.data(), z.data(), pre.data(), hidden_, in_);
        std::vector<double> h(hidden_);
        for (int i = 0; i < hidden_; ++i) {
            pre[i] += b1_[i];
            h[i] = pre[i] > 0.0 ? pre[i] : 0.0;
            if (mask) h[i] *= (*mask)[i];
        }
        std::vector<double> p(out_);
        kernels::matvec_f64(w2_.data(), h.data(), p.data(), out_, hidden_);
        for (int i = 0; i < out_; ++i) p[i] += b2_[i];
        softmax_inplace(p);

        const double py = std::max(p[y[s] - 1], 1e-300);
        g.loss -= std::log(py);

        std::vector<double> dlogit = p;
        dlogit[y[s] - 1] -= 1.0;
        for (int i = 0; i < out_; ++i) {
            kernels::axpy_f64(dlogit[i], h.data(), g.w2.data() + static_cast<size_t>(i) * hidden_,
                              hidden_);
            g.b2[i] += dlogit[i];
        }
        std::vector<double> dh(hidden_, 0.0);
        for (int i = 0; i < out_; ++i) {
            kernels::axpy_f64(dlogit[i], w2_.data() + static_cast<size_t>(i) * hidden_, dh.data(),
                              hidden_);
        }
        for (int i = 0; i < hidden_; ++i) {
            if (mask) dh[i] *= (*mask)[i];
            if (pre[i] <= 0.0) dh[i] = 0.0;
        }
        for (int i = 0; i < hidden_; ++i) {
            if (dh[i] != 0.0) {
                kernels::axpy_f64(dh[i], z.data(), g.w1.data() + static_cast<size_t>(i) * in_, in_);
                g.b1[i] += dh[i];
            }
        }
    }

    const double inv = 1.0 / static_cast<double>(x.size());
    g.loss *= inv;
    for (auto& v : g.w1) v *= inv;
    for (auto& v : g.b1) v *= inv;
    for (auto& v : g.w2) v *= inv;
    for (auto& v : g.b2) v *= inv;
    return g;
}

std::vector<double> MlpClassifier::train(const std::vector<std::vector<double>>& x,
                                         const std::vector<int>& y, const TrainConfig& cfg) {
    if (x.empty()) throw DataError("train: empty dataset");
    if (x.size() != y.size()) throw DataError("train: feature/label count mismatch");
    if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (cfg.learning_rate <= 0.0) throw ConfigError("learning_rate must be > 0");

    const size_t n = x.size();
    const size_t batch = std::min<size_t>(std::max(cfg.batch_size, 1), n);
    Rng rng(cfg.seed);
    const double scale = dropout_ > 0.0 ? 1.0 / (1.0 - dropout_) : 1.0;

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> trace;
    trace.reserve(cfg.epochs);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        size_t seen = 0;
        for (size_t start = 0; start < n; start += batch) {
            const size_t end = std::min(start + batch, n);
            std::vector<std::vector<double>> bx;
            std::vector<int> by;
            std::vector<std::vector<double>> bmasks;
            for (size_t s = start; s < end; ++s) {
                bx.push_back(x[order[s]]);
                by.push_back(y[order[s]]);
                std::vector<double> mask(hidden_, 1.0);
                if (dropout_ > 0.0) {
                    for (auto& m : mask) m = rng.uniform() < dropout_ ? 0.0 : scale;
                }
                bmasks.push_back(std::move(mask));
            }
            const MlpGradients g = compute_gradients(bx, by, &bmasks);
            kernels::axpy_f64(-cfg.learning_rate, g.w1.data(), w1_.data(), w1_.size());
            kernels::axpy_f64(-cfg.learning_rate, g.b1.data(), b1_.data(), b1_.size());
            kernels::axpy_f64(-cfg.learning_rate, g.w2.data(), w2_.data(), w2_.size());
            kernels::axpy_f64(-cfg.learning_rate, g.b2.data(), b2_.data(), b2_.size());
            epoch_loss += g.loss * static_cast<double>(end - start);
            seen += end - start;
        }
        trace.push_back(epoch_loss / static_cast<double>(seen));
    }
    return trace;
}

PredictionSet MlpClassifier::predict_mc(const std::vector<std::vector<double>>& x, int n_queries,
                                        uint64_t seed) const {
    if (n_queries < 1) throw ConfigError("n_queries must be >= 1");
    if (x.empty()) throw DataError("predict_mc: empty test set");
    PredictionSet preds(out_, n_queries, static_cast<int>(x.size()));
    Rng root(seed);
    for (size_t k = 0; k < x.size(); ++k) {
        Rng stream = root.child(k);
        for (int j = 0; j < n_queries; ++j) {
            const std::vector<double> p = forward_stochastic(x[k], stream);
            for (int i = 0; i < out_; ++i) preds.at(i, j, static_cast<int>(k)) = p[i];
        }
    }
    return preds;
}

int MlpClassifier::predict_class(const std::vector<double>& x) const {
    const std::vector<double> p = forward(x);
    int best = 0;
    for (int i = 1; i < out_; ++i) {
        if (p[i] > p[best]) best = i;  // ties stay at the lowest id
    }
    return best + 1;
}

double MlpClassifier::evaluate_accuracy(const std::vector<std::vector<double>>& x,
                                        const std::vector<int>& y) const {
    if (x.empty() || x.size() != y.size()) throw DataError("evaluate_accuracy: bad test set");
    size_t correct = 0;
    for (size_t k = 0; k < x.size(); ++k) {
        if (predict_class(x[k]) == y[k]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(x.size());
}

void MlpClassifier::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open for writing: " + path);
    out.write("HMLP", 4);
    put<uint16_t>(out, 1);
    put<uint32_t>(out, static_cast<uint32_t>(in_));
    put<uint32_t>(out, static_cast<uint32_t>(hidden_));
    put<uint32_t>(out, static_cast<uint32_t>(out_));
    put<double>(out, dropout_);
    put_vec(out, w1_);
    put_vec(out, b1_);
    put_vec(out, w2_);
    put_vec(out, b2_);
    put<uint8_t>(out, mu_.empty() ? 0 : 1);
    if (!mu_.empty()) {
        put_vec(out, mu_);
        put_vec(out, sd_);
    }
    if (!out) throw DataError("write failed: " + path);
}

MlpClassifier MlpClassifier::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "HMLP", 4) != 0) throw DataError("bad magic in " + path);
    if (take<uint16_t>(in) != 1) throw DataError("unsupported checkpoint version in " + path);
    const int in_dim = static_cast<int>(take<uint32_t>(in));
    const int hidden = static_cast<int>(take<uint32_t>(in));
    const int out_dim = static_cast<int>(take<uint32_t>(in));
    const double dropout = take<double>(in);
    MlpClassifier model(in_dim, hidden, out_dim, dropout, 0);
    model.w1_ = take_vec(in);
    model.b1_ = take_vec(in);
    model.w2_ = take_vec(in);
    model.b2_ = take_vec(in);
    if (take<uint8_t>(in) != 0) {
        model.mu_ = take_vec(in);
        model.sd_ = take_vec(in);
    }
    if (!in) throw DataError("truncated checkpoint: " + path);
    return model;
}

}  // namespace tacsel
