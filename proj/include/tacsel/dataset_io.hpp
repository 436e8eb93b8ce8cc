#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tacsel/sensor_sim.hpp"

namespace tacsel {

// Per-sample binary format, little-endian:
//   magic "HVTS", version u16, selected u16 (1 if frames were selected
//   downstream), H u32, W u32, frame count u32, marker count u32,
//   label u32, compliance f64;
// then row-major f32 frames, per-frame f32 (x, y) marker coordinates,
// and f64 timestamps.
void write_video(const std::string& path, const PressVideo& video, bool selected = false);
PressVideo read_video(const std::string& path, bool* selected = nullptr);

struct ManifestEntry {
    std::string path;
    int label = 0;
    double f_push = 0.0;
    double v_push = 0.0;
    uint64_t seed = 0;
};

// UTF-8 sidecar, one line per sample: path label f_push v_push seed
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::string& path);

}  // namespace tacsel
