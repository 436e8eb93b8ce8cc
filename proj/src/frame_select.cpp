#include "tacsel/frame_select.hpp"

#include <cmath>

#include "tacsel/errors.hpp"
#include "tacsel/kernels.hpp"

namespace tacsel {

double mean_abs_intensity(const Image& frame) {
    if (frame.px.empty()) return 0.0;
    return kernels::sum_abs_f32(frame.px.data(), frame.px.size()) / static_cast<double>(frame.px.size());
}

PressVideo background_subtract(const PressVideo& video) {
    if (video.frames.empty()) throw DataError("background_subtract: empty video");
    PressVideo out = video;
    const Image& base = video.frames[0];
    for (size_t t = 0; t < out.frames.size(); ++t) {
        kernels::sub_f32(video.frames[t].px.data(), base.px.data(), out.frames[t].px.data(),
                         base.px.size());
    }
    return out;
}

std::pair<int, int> detect_loading_window(const PressVideo& subtracted, double threshold) {
    if (threshold <= 0.0) throw ConfigError("contact threshold must be > 0");
    const int n = static_cast<int>(subtracted.frames.size());
    int first = -1;
    int last = 0;
    double peak = -1.0;
    for (int t = 0; t < n; ++t) {
        const double m = mean_abs_intensity(subtracted.frames[t]);
        if (first < 0 && m > threshold) first = t;
        if (m > peak) {  // strict: earliest frame wins ties
            peak = m;
            last = t;
        }
    }
    if (first < 0) throw NoContactError("no frame exceeds contact threshold");
    if (last < first) throw DegenerateWindowError("peak precedes first contact");
    return {first, last};
}

FrameSelection select_frames(int first_idx, int last_idx, int n_intermediate) {
    if (first_idx > last_idx) throw DegenerateWindowError("first_idx > last_idx");
    if (n_intermediate < 0) throw ConfigError("n_intermediate must be >= 0");
    FrameSelection sel;
    sel.first_idx = first_idx;
    sel.last_idx = last_idx;
    sel.selected.push_back(first_idx);
    const double span = static_cast<double>(last_idx - first_idx);
    for (int k = 1; k <= n_intermediate; ++k) {
        // round-half-up on the real-valued position
        const double pos = first_idx + k * span / (n_intermediate + 1);
        sel.selected.push_back(static_cast<int>(std::floor(pos + 0.5)));
    }
    sel.selected.push_back(last_idx);
    return sel;
}

SampleTensor build_sample(const PressVideo& video, const FrameSelectConfig& cfg) {
    const PressVideo sub = background_subtract(video);
    const auto [first, last] = detect_loading_window(sub, cfg.threshold);
    const FrameSelection sel = select_frames(first, last, cfg.n_intermediate);
    SampleTensor sample;
    sample.label = video.label;
    sample.frames.reserve(sel.selected.size());
    for (int idx : sel.selected) sample.frames.push_back(sub.frames[idx]);
    return sample;
}

}  // namespace tacsel
