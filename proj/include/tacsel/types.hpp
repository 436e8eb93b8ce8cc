#pragma once

#include <cstdint>
#include <vector>

namespace tacsel {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Single-channel intensity grid, row-major.
struct Image {
    int rows = 0;
    int cols = 0;
    std::vector<float> px;

    Image() = default;
    Image(int r, int c) : rows(r), cols(c), px(static_cast<size_t>(r) * c, 0.0f) {}

    float& at(int r, int c) { return px[static_cast<size_t>(r) * cols + c]; }
    float at(int r, int c) const { return px[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return px.size(); }
};

}  // namespace tacsel
