#pragma once

#include <cstdint>
#include <vector>

#include "tacsel/rng.hpp"
#include "tacsel/types.hpp"

namespace tacsel {

struct HardnessClass {
    int id = 0;             // 1..m, unique and contiguous within a ClassSet
    double compliance = 0;  // mm/N, larger = softer
};

struct ClassSet {
    std::vector<HardnessClass> classes;

    int size() const { return static_cast<int>(classes.size()); }
    const HardnessClass& by_id(int id) const;
    void validate() const;  // throws ConfigError on bad ids / compliances
};

// Scales inter-class compliance gaps about the median compliance; the knob
// acceptance tests use to create easy/hard regimes.
ClassSet apply_separability(const ClassSet& set, double separability);

struct PressParams {
    double f_push = 3.0;       // N
    double v_push = 35.0;      // mm/s
    double frame_rate = 400;   // Hz
    double noise_sigma = 0.25; // intensity units
};

struct ParamRanges {
    double f_min = 1.0, f_max = 5.0;    // N
    double v_min = 20.0, v_max = 50.0;  // mm/s
    double frame_rate = 400.0;
    double noise_sigma = 0.25;
};

struct PressVideo {
    std::vector<Image> frames;
    std::vector<std::vector<Vec2>> markers;  // per frame, constant count
    std::vector<double> timestamps;          // s, strictly increasing
    int label = 0;                           // HardnessClass id, 0 = unlabeled
    double compliance = 0.0;                 // mm/N of the pressed class
};

// Geometry and rendering constants of the synthetic gel sensor.
struct SimConfig {
    int rows = 64;
    int cols = 64;
    int marker_grid = 8;               // marker_grid x marker_grid markers
    double intensity_per_mm = 150.0;   // contact brightness per mm of indentation
    double intensity_sat = 0.1;        // mm; contact brightness stops growing past this depth
    double marker_amplitude = 150.0;   // marker blob depth (dark blobs)
    double marker_jitter = 0.3;        // fixed per-marker amplitude variation (fraction)
    uint64_t marker_pattern_seed = 12345;  // fixed marker sheet, shared by all videos
    double marker_sigma = 1.2;         // px
    double marker_contrast_gain = 5.0; // per mm; markers darken under contact
    double marker_contrast_sat = 0.1;  // mm; contrast stops growing past this depth
    double kernel_base = 4.0;          // px; contact kernel width = base * (1 + slope*compliance)
    double kernel_slope = 1.2;         // per (mm/N)
    double displacement_gain = 0.1;    // marker displacement scale, px per (mm * px)
    double displacement_sat = 0.4;     // mm; displacement stops growing past this depth
    double pre_contact_time = 0.02;    // s of no-contact frames before loading
    int trailing_frames = 2;           // frames recorded after full unload
};

// Contact kernel width for a given compliance (px).
double contact_sigma(const SimConfig& cfg, double compliance);

// Indentation depth at time t since contact (mm): min(v*t, compliance*f).
double indentation_depth(double t, double v_push, double compliance, double f_push);

// Analytic marker displacement magnitude at rest radius rho for depth d.
double marker_displacement(const SimConfig& cfg, double compliance, double depth, double rho);

// Three-phase press video: pre-contact, loading to depth compliance*f_push,
// unloading at the same speed. Bit-identical for identical inputs.
PressVideo simulate_press(const HardnessClass& cls, const PressParams& params,
                          const SimConfig& cfg, uint64_t seed);

PressParams sample_press_params(const ParamRanges& ranges, Rng& rng);

struct DatasetSample {
    PressVideo video;
    PressParams params;
    uint64_t seed = 0;
};

// per_class videos per class, each with independently sampled press params.
// Sample i of class c uses the child stream derived from (seed, c, i), so
// growing per_class never reshuffles earlier samples.
std::vector<DatasetSample> generate_dataset(const ClassSet& classes, int per_class,
                                            const ParamRanges& ranges, const SimConfig& cfg,
                                            uint64_t seed);

}  // namespace tacsel
