#include "tacsel/optical_flow.hpp"

#include <algorithm>
#include <cmath>

#include "tacsel/errors.hpp"

namespace tacsel {

namespace {

inline bool in_sample_bounds(const Image& img, double x, double y) {
    return x >= 0.0 && y >= 0.0 && x <= img.cols - 1.001 && y <= img.rows - 1.001;
}

inline double bilinear(const Image& img, double x, double y) {
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = img.at(y0, x0);
    const double v01 = img.at(y0, x0 + 1);
    const double v10 = img.at(y0 + 1, x0);
    const double v11 = img.at(y0 + 1, x0 + 1);
    return (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
}

inline double min_eigenvalue(double a, double b, double c) {
    // symmetric 2x2 [[a, b], [b, c]]
    const double half_trace = 0.5 * (a + c);
    const double det_term = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    return half_trace - det_term;
}

}  // namespace

std::vector<Corner> detect_corners(const Image& frame, int max_points, const LkConfig& cfg) {
    const int half = cfg.window / 2;
    const int margin = half + 1;
    if (frame.rows < 2 * margin + 1 || frame.cols < 2 * margin + 1) {
        throw DataError("frame smaller than corner detection window");
    }

    // Central-difference gradients on the interior.
    Image ix(frame.rows, frame.cols);
    Image iy(frame.rows, frame.cols);
    for (int r = 1; r < frame.rows - 1; ++r) {
        for (int c = 1; c < frame.cols - 1; ++c) {
            ix.at(r, c) = 0.5f * (frame.at(r, c + 1) - frame.at(r, c - 1));
            iy.at(r, c) = 0.5f * (frame.at(r + 1, c) - frame.at(r - 1, c));
        }
    }

    std::vector<Corner> candidates;
    for (int r = margin; r < frame.rows - margin; ++r) {
        for (int c = margin; c < frame.cols - margin; ++c) {
            double sxx = 0.0, sxy = 0.0, syy = 0.0;
            for (int wr = -half; wr <= half; ++wr) {
                for (int wc = -half; wc <= half; ++wc) {
                    const double gx = ix.at(r + wr, c + wc);
                    const double gy = iy.at(r + wr, c + wc);
                    sxx += gx * gx;
                    sxy += gx * gy;
                    syy += gy * gy;
                }
            }
            const double score = min_eigenvalue(sxx, sxy, syy);
            if (score > 1e-9) {
                candidates.push_back(
                    {{static_cast<double>(c), static_cast<double>(r)}, score});
            }
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](const Corner& a, const Corner& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.pt.y != b.pt.y) return a.pt.y < b.pt.y;
        return a.pt.x < b.pt.x;
    });

    const double min_d2 = cfg.min_distance * cfg.min_distance;
    std::vector<Corner> accepted;
    for (const auto& cand : candidates) {
        if (static_cast<int>(accepted.size()) >= max_points) break;
        bool ok = true;
        for (const auto& a : accepted) {
            const double dx = a.pt.x - cand.pt.x;
            const double dy = a.pt.y - cand.pt.y;
            if (dx * dx + dy * dy < min_d2) {
                ok = false;
                break;
            }
        }
        if (ok) accepted.push_back(cand);
    }
    return accepted;
}

std::vector<FlowResult> lucas_kanade(const Image& prev, const Image& next,
                                     const std::vector<Vec2>& points, const LkConfig& cfg) {
    if (prev.rows != next.rows || prev.cols != next.cols) {
        throw DataError("lucas_kanade: frame shapes differ");
    }
    const int half = cfg.window / 2;
    std::vector<FlowResult> out(points.size());

    for (size_t i = 0; i < points.size(); ++i) {
        const Vec2 p = points[i];
        // Window and its gradient stencil must stay inside the frame.
        if (!in_sample_bounds(prev, p.x - half - 1, p.y - half - 1) ||
            !in_sample_bounds(prev, p.x + half + 1, p.y + half + 1)) {
            continue;
        }

        const int n = cfg.window * cfg.window;
        std::vector<double> tmpl(n), gx(n), gy(n);
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        int idx = 0;
        for (int wr = -half; wr <= half; ++wr) {
            for (int wc = -half; wc <= half; ++wc, ++idx) {
                const double x = p.x + wc;
                const double y = p.y + wr;
                tmpl[idx] = bilinear(prev, x, y);
                gx[idx] = 0.5 * (bilinear(prev, x + 1, y) - bilinear(prev, x - 1, y));
                gy[idx] = 0.5 * (bilinear(prev, x, y + 1) - bilinear(prev, x, y - 1));
                sxx += gx[idx] * gx[idx];
                sxy += gx[idx] * gy[idx];
                syy += gy[idx] * gy[idx];
            }
        }
        if (min_eigenvalue(sxx, sxy, syy) / n < cfg.min_eigen) continue;  // untrackable
        const double det = sxx * syy - sxy * sxy;
        if (det <= 0.0) continue;
        const double inv00 = syy / det;
        const double inv01 = -sxy / det;
        const double inv11 = sxx / det;

        Vec2 v{0.0, 0.0};
        bool lost = false;
        for (int iter = 0; iter < cfg.max_iters; ++iter) {
            if (!in_sample_bounds(next, p.x + v.x - half, p.y + v.y - half) ||
                !in_sample_bounds(next, p.x + v.x + half, p.y + v.y + half)) {
                lost = true;
                break;
            }
            double bx = 0.0, by = 0.0;
            idx = 0;
            for (int wr = -half; wr <= half; ++wr) {
                for (int wc = -half; wc <= half; ++wc, ++idx) {
                    const double diff =
                        tmpl[idx] - bilinear(next, p.x + v.x + wc, p.y + v.y + wr);
                    bx += diff * gx[idx];
                    by += diff * gy[idx];
                }
            }
            const double dx = inv00 * bx + inv01 * by;
            const double dy = inv01 * bx + inv11 * by;
            v.x += dx;
            v.y += dy;
            if (dx * dx + dy * dy < cfg.epsilon * cfg.epsilon) break;
        }
        if (lost) continue;
        out[i].flow = v;
        out[i].tracked = true;
    }
    return out;
}

FeatureVector extract_features(const SampleTensor& sample, const LkConfig& cfg) {
    if (sample.frames.size() < 2) throw DataError("extract_features: need >= 2 frames");
    const int n_pairs = static_cast<int>(sample.frames.size()) - 1;

    FeatureVector fv;
    fv.values.assign(static_cast<size_t>(2 * cfg.max_points * n_pairs), 0.0);

    const std::vector<Corner> corners = detect_corners(sample.frames[0], cfg.max_points, cfg);
    fv.n_points = static_cast<int>(corners.size());
    if (corners.empty()) return fv;

    std::vector<Vec2> pos(corners.size());
    std::vector<bool> alive(corners.size(), true);
    for (size_t i = 0; i < corners.size(); ++i) pos[i] = corners[i].pt;

    for (int t = 0; t < n_pairs; ++t) {
        const auto flows = lucas_kanade(sample.frames[t], sample.frames[t + 1], pos, cfg);
        for (size_t i = 0; i < corners.size(); ++i) {
            if (!alive[i]) continue;
            if (!flows[i].tracked) {
                alive[i] = false;  // zero flow from here on
                continue;
            }
            const size_t base = (static_cast<size_t>(i) * n_pairs + t) * 2;
            fv.values[base] = flows[i].flow.x;
            fv.values[base + 1] = flows[i].flow.y;
            pos[i].x += flows[i].flow.x;
            pos[i].y += flows[i].flow.y;
        }
    }
    return fv;
}

}  // namespace tacsel
