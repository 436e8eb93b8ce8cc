#pragma once

#include <vector>

#include "tacsel/frame_select.hpp"
#include "tacsel/types.hpp"

namespace tacsel {

struct LkConfig {
    int max_points = 64;       // N; 500 for real-data-scale frames
    int window = 7;            // odd, px
    int max_iters = 10;
    double epsilon = 0.01;     // px, convergence threshold
    double min_distance = 3.0; // px between accepted corners
    double min_eigen = 1e-4;   // structure tensor conditioning floor
};

struct Corner {
    Vec2 pt;
    double score = 0.0;  // Shi-Tomasi minimum eigenvalue
};

struct FlowResult {
    Vec2 flow;
    bool tracked = false;
};

struct FeatureVector {
    std::vector<double> values;  // 2 * max_points * (n_frames - 1), zero-padded
    int n_points = 0;            // corners actually tracked
};

// Shi-Tomasi corners: minimum eigenvalue of the structure tensor summed over
// the window, greedy selection in descending score with min_distance spacing.
std::vector<Corner> detect_corners(const Image& frame, int max_points, const LkConfig& cfg);

// Iterative Lucas-Kanade at fixed scale. Points whose structure tensor is
// ill-conditioned, or that drift out of bounds, come back untracked.
std::vector<FlowResult> lucas_kanade(const Image& prev, const Image& next,
                                     const std::vector<Vec2>& points, const LkConfig& cfg);

// Corners from the first selected frame, tracked through consecutive frame
// pairs; flows concatenated in corner-score order, zero-padded to fixed
// length. Untracked points contribute zero flow.
FeatureVector extract_features(const SampleTensor& sample, const LkConfig& cfg);

}  // namespace tacsel
