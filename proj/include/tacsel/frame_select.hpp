#pragma once

#include <utility>
#include <vector>

#include "tacsel/sensor_sim.hpp"
#include "tacsel/types.hpp"

namespace tacsel {

struct FrameSelection {
    int first_idx = 0;  // initial contact
    int last_idx = 0;   // peak intensity
    std::vector<int> selected;
    double threshold = 0.0;
};

struct SampleTensor {
    std::vector<Image> frames;  // background-subtracted, selected
    int label = 0;              // 0 = unlabeled
};

struct FrameSelectConfig {
    double threshold = 0.3;       // mean |intensity| units; calibrated so zero-noise
                                  // contact is detected on the first loading frame
    int n_intermediate = 2;       // default: first + 2 intermediates + last = 4 frames
};

// Mean of absolute intensities (single-channel sensor).
double mean_abs_intensity(const Image& frame);

// frame[t] <- frame[t] - frame[0]; idempotent after the first pass.
PressVideo background_subtract(const PressVideo& video);

// first = smallest t with mean|intensity| > threshold; last = earliest argmax
// of mean|intensity|. Throws NoContactError / DegenerateWindowError.
std::pair<int, int> detect_loading_window(const PressVideo& subtracted, double threshold);

// first, then n_intermediate equally spaced (round-half-up) indices, then
// last. Duplicates are permitted when the window is short.
FrameSelection select_frames(int first_idx, int last_idx, int n_intermediate);

// Composition: subtract, detect, select. Propagates NoContactError.
SampleTensor build_sample(const PressVideo& video, const FrameSelectConfig& cfg);

}  // namespace tacsel
