#include "tacsel/sensor_sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tacsel/errors.hpp"

namespace tacsel {

const HardnessClass& ClassSet::by_id(int id) const {
    for (const auto& c : classes) {
        if (c.id == id) return c;
    }
    throw DataError("unknown class id: " + std::to_string(id));
}

void ClassSet::validate() const {
    if (classes.empty()) throw ConfigError("class set is empty");
    std::set<int> ids;
    for (const auto& c : classes) {
        if (c.compliance <= 0.0) {
            throw ConfigError("class " + std::to_string(c.id) + ": compliance must be > 0");
        }
        ids.insert(c.id);
    }
    if (ids.size() != classes.size() || *ids.begin() != 1 ||
        *ids.rbegin() != static_cast<int>(classes.size())) {
        throw ConfigError("class ids must be unique and contiguous starting at 1");
    }
}

ClassSet apply_separability(const ClassSet& set, double separability) {
    if (separability <= 0.0) throw ConfigError("separability must be > 0");
    std::vector<double> comps;
    for (const auto& c : set.classes) comps.push_back(c.compliance);
    std::sort(comps.begin(), comps.end());
    const double med = comps[comps.size() / 2];
    ClassSet out = set;
    for (auto& c : out.classes) {
        c.compliance = med + separability * (c.compliance - med);
        if (c.compliance <= 0.0) {
            throw ConfigError("separability " + std::to_string(separability) +
                              " drives a class compliance below zero");
        }
    }
    return out;
}

double contact_sigma(const SimConfig& cfg, double compliance) {
    return cfg.kernel_base * (1.0 + cfg.kernel_slope * compliance);
}

double indentation_depth(double t, double v_push, double compliance, double f_push) {
    if (t <= 0.0) return 0.0;
    const double d_max = compliance * f_push;
    const double t_peak = d_max / v_push;
    if (t <= t_peak) return v_push * t;
    return std::max(0.0, d_max - v_push * (t - t_peak));
}

double marker_displacement(const SimConfig& cfg, double compliance, double depth, double rho) {
    const double sc = contact_sigma(cfg, compliance);
    return cfg.displacement_gain * std::min(depth, cfg.displacement_sat) * rho *
           std::exp(-rho * rho / (2.0 * sc * sc));
}

namespace {

void render_marker(Image& frame, const Vec2& pos, double amplitude, double sigma) {
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    const int r0 = std::max(0, static_cast<int>(std::floor(pos.y)) - radius);
    const int r1 = std::min(frame.rows - 1, static_cast<int>(std::ceil(pos.y)) + radius);
    const int c0 = std::max(0, static_cast<int>(std::floor(pos.x)) - radius);
    const int c1 = std::min(frame.cols - 1, static_cast<int>(std::ceil(pos.x)) + radius);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            const double dx = c - pos.x;
            const double dy = r - pos.y;
            frame.at(r, c) -= static_cast<float>(amplitude * std::exp(-(dx * dx + dy * dy) * inv2s2));
        }
    }
}

}  // namespace

PressVideo simulate_press(const HardnessClass& cls, const PressParams& params,
                          const SimConfig& cfg, uint64_t seed) {
    if (cls.compliance <= 0.0) throw ConfigError("compliance must be > 0");
    if (params.frame_rate <= 0.0) throw ConfigError("frame_rate must be > 0");
    if (params.f_push <= 0.0 || params.v_push <= 0.0) {
        throw ConfigError("f_push and v_push must be > 0");
    }
    if (params.noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");

    const double d_max = cls.compliance * params.f_push;
    const double t_peak = d_max / params.v_push;
    const int n_loading = static_cast<int>(std::floor(t_peak * params.frame_rate));
    if (n_loading < 3) {
        throw ConfigError("frame_rate " + std::to_string(params.frame_rate) +
                          " Hz gives only " + std::to_string(n_loading) +
                          " loading frames (need >= 3); raise frame_rate or slow the press");
    }

    const double t_contact = cfg.pre_contact_time;
    const double t_end = t_contact + 2.0 * t_peak;
    const double dt = 1.0 / params.frame_rate;
    const int n_frames =
        static_cast<int>(std::ceil(t_end / dt)) + 1 + cfg.trailing_frames;

    // Marker rest grid, centered in the frame.
    const double cx = (cfg.cols - 1) / 2.0;
    const double cy = (cfg.rows - 1) / 2.0;
    std::vector<Vec2> rest;
    const double sx = static_cast<double>(cfg.cols) / cfg.marker_grid;
    const double sy = static_cast<double>(cfg.rows) / cfg.marker_grid;
    for (int gy = 0; gy < cfg.marker_grid; ++gy) {
        for (int gx = 0; gx < cfg.marker_grid; ++gx) {
            rest.push_back({(gx + 0.5) * sx, (gy + 0.5) * sy});
        }
    }

    // The marker sheet is a fixed physical pattern: per-marker amplitudes
    // vary but are identical across videos, which keeps corner-score order
    // stable from sample to sample.
    std::vector<double> marker_amp(rest.size());
    {
        Rng pattern(cfg.marker_pattern_seed);
        for (auto& a : marker_amp) {
            a = cfg.marker_amplitude * (1.0 + cfg.marker_jitter * pattern.uniform(-1.0, 1.0));
        }
    }

    // Normalized contact kernel image, fixed per video.
    const double sc = contact_sigma(cfg, cls.compliance);
    Image kernel(cfg.rows, cfg.cols);
    for (int r = 0; r < cfg.rows; ++r) {
        for (int c = 0; c < cfg.cols; ++c) {
            const double dx = c - cx;
            const double dy = r - cy;
            kernel.at(r, c) = static_cast<float>(std::exp(-(dx * dx + dy * dy) / (2.0 * sc * sc)));
        }
    }

    Rng rng(seed);
    PressVideo video;
    video.label = cls.id;
    video.compliance = cls.compliance;
    video.frames.reserve(n_frames);
    video.markers.reserve(n_frames);
    video.timestamps.reserve(n_frames);

    for (int k = 0; k < n_frames; ++k) {
        const double t = k * dt;
        const double depth = indentation_depth(t - t_contact, params.v_push, cls.compliance,
                                               params.f_push);
        Image frame(cfg.rows, cfg.cols);
        const float gain = static_cast<float>(cfg.intensity_per_mm * std::min(depth, cfg.intensity_sat));
        for (size_t i = 0; i < frame.px.size(); ++i) frame.px[i] = gain * kernel.px[i];

        std::vector<Vec2> pts;
        pts.reserve(rest.size());
        for (size_t mi = 0; mi < rest.size(); ++mi) {
            const auto& m = rest[mi];
            const double rx = m.x - cx;
            const double ry = m.y - cy;
            const double rho = std::sqrt(rx * rx + ry * ry);
            Vec2 p = m;
            if (rho > 1e-12) {
                const double u = marker_displacement(cfg, cls.compliance, depth, rho);
                p.x += u * rx / rho;
                p.y += u * ry / rho;
            }
            pts.push_back(p);
            // Contact darkens markers in proportion to the local indentation,
            // so displaced markers stay visible after background subtraction.
            const double local = std::exp(-rho * rho / (2.0 * sc * sc));
            const double amp =
                marker_amp[mi] *
                (1.0 + cfg.marker_contrast_gain * std::min(depth, cfg.marker_contrast_sat) * local);
            render_marker(frame, p, amp, cfg.marker_sigma);
        }

        if (params.noise_sigma > 0.0) {
            for (auto& v : frame.px) v += static_cast<float>(params.noise_sigma * rng.normal());
        }

        video.frames.push_back(std::move(frame));
        video.markers.push_back(std::move(pts));
        video.timestamps.push_back(t);
    }
    return video;
}

PressParams sample_press_params(const ParamRanges& ranges, Rng& rng) {
    if (ranges.f_min > ranges.f_max || ranges.v_min > ranges.v_max) {
        throw ConfigError("press parameter ranges must satisfy min <= max");
    }
    PressParams p;
    p.f_push = rng.uniform(ranges.f_min, ranges.f_max);
    p.v_push = rng.uniform(ranges.v_min, ranges.v_max);
    p.frame_rate = ranges.frame_rate;
    p.noise_sigma = ranges.noise_sigma;
    return p;
}

std::vector<DatasetSample> generate_dataset(const ClassSet& classes, int per_class,
                                            const ParamRanges& ranges, const SimConfig& cfg,
                                            uint64_t seed) {
    classes.validate();
    if (per_class < 1) throw ConfigError("per_class must be >= 1");
    Rng root(seed);
    std::vector<DatasetSample> out;
    out.reserve(static_cast<size_t>(per_class) * classes.classes.size());
    for (size_t c = 0; c < classes.classes.size(); ++c) {
        for (int i = 0; i < per_class; ++i) {
            Rng stream = root.child((static_cast<uint64_t>(c) << 32) | static_cast<uint64_t>(i));
            DatasetSample s;
            s.params = sample_press_params(ranges, stream);
            s.seed = stream.next_u64();
            s.video = simulate_press(classes.classes[c], s.params, cfg, s.seed);
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace tacsel
