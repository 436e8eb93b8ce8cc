// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its own runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tacsel/active_loop.hpp"
#include "tacsel/classifier.hpp"
#include "tacsel/eval.hpp"
#include "tacsel/experiment.hpp"
#include "tacsel/frame_select.hpp"
#include "tacsel/optical_flow.hpp"
#include "tacsel/rng.hpp"
#include "tacsel/uncertainty.hpp"

namespace fs = std::filesystem;
using namespace tacsel;

namespace {

int g_failures = 0;

class Criterion {
public:
    Criterion(int id, std::string what)
        : id_(id), what_(std::move(what)), start_(std::chrono::steady_clock::now()) {}

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    void finish(bool ok, double budget_s, const std::string& detail = "") {
        const double secs = elapsed();
        const bool in_budget = secs < budget_s;
        const bool pass = ok && in_budget;
        if (!pass) ++g_failures;
        std::printf("%s  %2d: %s (%.2fs/%gs)%s%s\n", pass ? "PASS" : "FAIL", id_, what_.c_str(),
                    secs, budget_s, detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
    }

private:
    int id_;
    std::string what_;
    std::chrono::steady_clock::time_point start_;
};

PredictionSet random_preds(Rng& rng, int m, int n, int l) {
    PredictionSet preds(m, n, l);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < l; ++k) {
            double sum = 0.0;
            std::vector<double> col(m);
            for (auto& v : col) {
                v = rng.uniform();
                sum += v;
            }
            for (int i = 0; i < m; ++i) preds.at(i, j, k) = col[i] / sum;
        }
    }
    return preds;
}

// 1: entropy/variance against a naive direct-summation oracle.
void criterion_statistics_oracle() {
    Criterion c(1, "entropy and variance match the naive summation oracle within 1e-12");
    Rng rng(1001);
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        const int m = 2 + static_cast<int>(rng.below(8));
        const int n = 1 + static_cast<int>(rng.below(5));
        const int l = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(20 / n)));
        const PredictionSet preds = random_preds(rng, m, n, l);

        const auto h = class_entropy(preds);
        const auto var = class_variance(preds);
        for (int i = 0; i < m && ok; ++i) {
            double hsum = 0.0, psum = 0.0;
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < l; ++k) {
                    const double p = preds.at(i, j, k);
                    if (p > 0.0) hsum -= p * std::log(p);
                    psum += p;
                }
            }
            const double count = static_cast<double>(n) * l;
            const double mu = psum / count;
            double sq = 0.0;
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < l; ++k) {
                    const double d = preds.at(i, j, k) - mu;
                    sq += d * d;
                }
            }
            ok = std::abs(h[i] - hsum / count) <= 1e-12 && std::abs(var[i] - sq / count) <= 1e-12;
        }
    }
    c.finish(ok, 1.0);
}

// 2: analytic gradients against central finite differences.
void criterion_gradient_check() {
    Criterion c(2, "analytic MLP gradients match finite differences (rel err < 1e-4)");
    MlpClassifier model(6, 12, 4, 0.0, 2002);
    Rng rng(2003);
    std::vector<std::vector<double>> x(20, std::vector<double>(6));
    std::vector<int> y;
    for (auto& row : x) {
        for (auto& v : row) v = rng.uniform(-1.0, 1.0);
    }
    for (size_t i = 0; i < x.size(); ++i) y.push_back(1 + static_cast<int>(rng.below(4)));

    bool ok = true;
    const double h = 1e-6;
    for (int trial = 0; trial < 10 && ok; ++trial) {
        MlpGradients g = model.compute_gradients(x, y);
        std::vector<double>* vecs[4] = {&MlpTestAccess::w1(model), &MlpTestAccess::b1(model),
                                        &MlpTestAccess::w2(model), &MlpTestAccess::b2(model)};
        std::vector<double>* grads[4] = {&g.w1, &g.b1, &g.w2, &g.b2};
        const size_t slot = rng.below(4);
        const size_t idx = rng.below(vecs[slot]->size());

        const double orig = (*vecs[slot])[idx];
        (*vecs[slot])[idx] = orig + h;
        const double lp = model.compute_gradients(x, y).loss;
        (*vecs[slot])[idx] = orig - h;
        const double lm = model.compute_gradients(x, y).loss;
        (*vecs[slot])[idx] = orig;

        const double fd = (lp - lm) / (2.0 * h);
        const double analytic = (*grads[slot])[idx];
        const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
        ok = std::abs(fd - analytic) / denom < 1e-4;
    }
    c.finish(ok, 5.0);
}

// 3: dropout 0 collapses the queries; dropout 0.2 on a trained model spreads
// them.
void criterion_mc_dropout_sanity() {
    Criterion c(3, "zero dropout gives zero query variance; 0.2 gives positive variance");
    Rng rng(3001);
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int cls = 0; cls < 3; ++cls) {
        for (int i = 0; i < 8; ++i) {
            std::vector<double> row(6, 0.0);
            row[2 * cls] = 1.5;
            for (auto& v : row) v += 0.3 * rng.normal();
            x.push_back(row);
            y.push_back(cls + 1);
        }
    }
    TrainConfig tc;
    tc.epochs = 60;

    MlpClassifier det(6, 32, 3, 0.0, 31);
    det.fit_standardizer(x);
    det.train(x, y, tc);
    const PredictionSet p0 = det.predict_mc(x, 10, 7);
    bool zero_spread = true;
    for (int i = 0; i < p0.m; ++i) {
        for (int k = 0; k < p0.l; ++k) {
            for (int j = 1; j < p0.n; ++j) {
                if (p0.at(i, j, k) != p0.at(i, 0, k)) zero_spread = false;
            }
        }
    }

    MlpClassifier mc(6, 32, 3, 0.2, 31);
    mc.fit_standardizer(x);
    mc.train(x, y, tc);
    const auto var = class_variance(mc.predict_mc(x, 10, 7));
    bool positive = false;
    for (double v : var) positive = positive || v > 0.0;

    c.finish(zero_spread && positive, 10.0);
}

// 4: uniform-without-replacement subsampling frequencies.
void criterion_reservoir_uniformity() {
    Criterion c(4, "reservoir subsampling inclusion frequency is 0.5 +- 0.03, chi-square ok");
    std::vector<int> hits(10, 0);
    const int draws = 10000;
    Rng rng(4001);
    for (int d = 0; d < draws; ++d) {
        for (size_t i : select_training_set(10, 5, rng)) ++hits[i];
    }
    bool ok = true;
    double chi2 = 0.0;
    const double expected = draws * 0.5;
    for (int h : hits) {
        const double freq = static_cast<double>(h) / draws;
        ok = ok && freq >= 0.47 && freq <= 0.53;
        chi2 += (h - expected) * (h - expected) / expected;
    }
    // df = 9, p = 0.01 critical value
    ok = ok && chi2 < 21.666;
    char detail[64];
    std::snprintf(detail, sizeof(detail), "chi2 %.3f", chi2);
    c.finish(ok, 5.0, detail);
}

// 5: Lucas-Kanade against a brute-force SSD block-matching oracle.
void criterion_lk_oracle() {
    Criterion c(5, "1-px translations match the block-matching oracle within 0.1 px at >= 95%");
    const int rows = 64, cols = 64;
    const auto pattern = [](double x, double y) {
        return 60.0 * std::sin(0.45 * x + 1.3) * std::cos(0.38 * y - 0.7) +
               30.0 * std::sin(0.21 * (x + 0.5 * y));
    };
    const auto render = [&](double dx, double dy) {
        Image img(rows, cols);
        for (int r = 0; r < rows; ++r) {
            for (int col = 0; col < cols; ++col) {
                img.at(r, col) = static_cast<float>(pattern(col - dx, r - dy));
            }
        }
        return img;
    };

    const LkConfig cfg;
    int total = 0, good = 0;
    for (const auto& shift : std::vector<Vec2>{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}) {
        const Image prev = render(0.0, 0.0);
        const Image next = render(shift.x, shift.y);

        std::vector<Vec2> pts;
        for (int r = 10; r < rows - 10; r += 2) {
            for (int col = 10; col < cols - 10; col += 2) {
                pts.push_back({static_cast<double>(col), static_cast<double>(r)});
            }
        }
        const auto flows = lucas_kanade(prev, next, pts, cfg);

        const int half = cfg.window / 2;
        for (size_t i = 0; i < pts.size(); ++i) {
            // SSD block matching over integer shifts, the independent oracle
            int best_dx = 0, best_dy = 0;
            double best = 1e300;
            for (int dy = -3; dy <= 3; ++dy) {
                for (int dx = -3; dx <= 3; ++dx) {
                    double ssd = 0.0;
                    for (int wr = -half; wr <= half; ++wr) {
                        for (int wc = -half; wc <= half; ++wc) {
                            const int pr = static_cast<int>(pts[i].y) + wr;
                            const int pc = static_cast<int>(pts[i].x) + wc;
                            const double d = prev.at(pr, pc) - next.at(pr + dy, pc + dx);
                            ssd += d * d;
                        }
                    }
                    if (ssd < best) {
                        best = ssd;
                        best_dx = dx;
                        best_dy = dy;
                    }
                }
            }
            ++total;
            if (flows[i].tracked && std::abs(flows[i].flow.x - best_dx) <= 0.1 &&
                std::abs(flows[i].flow.y - best_dy) <= 0.1) {
                ++good;
            }
        }
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "%d/%d within 0.1 px", good, total);
    c.finish(good >= static_cast<int>(0.95 * total), 10.0, detail);
}

// 6: loading-window and frame-spacing reference examples.
void criterion_frame_selection() {
    Criterion c(6, "loading-window and frame-spacing reference examples reproduce exactly");
    PressVideo v;
    for (double mean : {0.0, 500.0, 1600.0, 3000.0, 5000.0, 4000.0}) {
        Image f(4, 4);
        for (auto& px : f.px) px = static_cast<float>(mean);
        v.frames.push_back(f);
        v.timestamps.push_back(v.timestamps.size() * 0.01);
        v.markers.push_back({});
    }
    const auto [first, last] = detect_loading_window(v, 1400.0);
    const FrameSelection sel = select_frames(2, 8, 2);
    c.finish(first == 2 && last == 4 && sel.selected == std::vector<int>{2, 4, 6, 8}, 5.0);
}

struct StrategySummary {
    double initial = 0.0;
    double final_acc = 0.0;
};

StrategySummary summarize(const std::vector<RunRecord>& runs, Strategy s) {
    StrategySummary out;
    int n = 0;
    for (const auto& r : runs) {
        if (r.strategy != s) continue;
        out.initial += r.entries.front().accuracy;
        out.final_acc += r.entries.back().accuracy;
        ++n;
    }
    out.initial /= n;
    out.final_acc /= n;
    return out;
}

// 7 and 10 share one 30-run experiment.
ExperimentResult run_trend_experiment() {
    Config c;
    ExperimentConfig cfg = ExperimentConfig::from_config(c);
    cfg.runs = 30;
    cfg.seed = 1;
    cfg.parallel = true;
    return run_experiment(cfg, {Strategy::entropy, Strategy::variance, Strategy::random});
}

void criterion_active_trend(const ExperimentResult& result, double secs_used) {
    Criterion c(7, "active strategies beat their initial accuracy by 10 pts; variance >= random");
    const StrategySummary ent = summarize(result.runs, Strategy::entropy);
    const StrategySummary var = summarize(result.runs, Strategy::variance);
    const StrategySummary rnd = summarize(result.runs, Strategy::random);

    const bool ok = var.final_acc >= rnd.final_acc && ent.final_acc >= ent.initial + 0.10 &&
                    var.final_acc >= var.initial + 0.10;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "entropy %.3f->%.3f, variance %.3f->%.3f, random %.3f->%.3f (exp %.1fs)",
                  ent.initial, ent.final_acc, var.initial, var.final_acc, rnd.initial,
                  rnd.final_acc, secs_used);
    c.finish(ok && secs_used < 600.0, 600.0, detail);
}

// 8: high dropout destabilizes training at an aggressive learning rate.
void criterion_dropout_sweep() {
    Criterion c(8, "dropout sweep: mean accuracy at rate 0.5 <= rate 0.2 over 9 paired runs");
    Config base;
    ExperimentConfig cfg = ExperimentConfig::from_config(base);
    cfg.runs = 9;
    cfg.seed = 1;
    // At the default learning rate the small training sets make heavy dropout
    // a pure regularizer; the degradation regime needs the higher rate.
    cfg.strategy.learning_rate = 0.4;
    cfg.sweep_rates = {0.2, 0.5};
    const auto rows = dropout_sweep(cfg);
    double acc02 = -1.0, acc05 = -1.0;
    for (const auto& r : rows) {
        if (r.metric != "accuracy") continue;
        if (r.rate == 0.2) acc02 = r.mean;
        if (r.rate == 0.5) acc05 = r.mean;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "acc(0.2) %.3f, acc(0.5) %.3f", acc02, acc05);
    c.finish(acc02 >= 0.0 && acc05 >= 0.0 && acc05 <= acc02, 300.0, detail);
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

// 9: the CLI `run` command is byte-deterministic.
void criterion_cli_determinism(const std::string& cli) {
    Criterion c(9, "two identical `run` invocations produce byte-identical CSVs");
    const fs::path tmp = fs::path("acceptance_tmp");
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const fs::path config = tmp / "run.conf";
    {
        std::ofstream out(config);
        out << "runs.count = 2\nruns.seed = 5\nruns.parallel = true\n";
    }
    bool ok = true;
    for (int rep = 0; rep < 2 && ok; ++rep) {
        const std::string cmd = "\"" + cli + "\" run --config " + config.string() + " --out " +
                                (tmp / ("out" + std::to_string(rep))).string() + " >/dev/null";
        ok = std::system(cmd.c_str()) == 0;
    }
    int compared = 0;
    if (ok) {
        for (const auto& entry : fs::directory_iterator(tmp / "out0")) {
            const fs::path twin = tmp / "out1" / entry.path().filename();
            ok = ok && fs::exists(twin) && same_bytes(entry.path(), twin);
            ++compared;
        }
        ok = ok && compared > 0;
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "%d files compared", compared);
    c.finish(ok, 300.0, detail);
    fs::remove_all(tmp);
}

// 10: budget accounting and acquisition-log consistency, audited from the
// records of criterion 7.
void criterion_budget_accounting(const ExperimentResult& result) {
    Criterion c(10, "reservoir sizes follow m*s0 + t*s and selections match the logged argmax");
    bool ok = !result.runs.empty();
    for (const auto& rec : result.runs) {
        for (size_t t = 0; t < rec.entries.size(); ++t) {
            const auto& e = rec.entries[t];
            ok = ok && e.reservoir_size == 5 * 5 + static_cast<int>(t) * 5;
            if (t == 0 || rec.strategy == Strategy::random) continue;
            const auto& metric =
                rec.strategy == Strategy::entropy ? e.report.entropy : e.report.variance;
            int best = 0;
            for (int i = 1; i < static_cast<int>(metric.size()); ++i) {
                if (metric[i] > metric[best]) best = i;
            }
            ok = ok && e.selected_class == best + 1;
        }
    }
    c.finish(ok, 60.0);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-cli-binary>\n");
        return 2;
    }

    criterion_statistics_oracle();
    criterion_gradient_check();
    criterion_mc_dropout_sanity();
    criterion_reservoir_uniformity();
    criterion_lk_oracle();
    criterion_frame_selection();

    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentResult trend = run_trend_experiment();
    const double trend_secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    criterion_active_trend(trend, trend_secs);
    criterion_dropout_sweep();
    criterion_cli_determinism(argv[1]);
    criterion_budget_accounting(trend);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
