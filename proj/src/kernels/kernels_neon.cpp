#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstddef>

namespace tacsel::kernels::neon {

void sub_f32(const float* a, const float* b, float* out, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vst1q_f32(out + i, vsubq_f32(vld1q_f32(a + i), vld1q_f32(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

double sum_abs_f32(const float* a, size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        float32x4_t v = vabsq_f32(vld1q_f32(a + i));
        acc = vaddq_f64(acc, vcvt_f64_f32(vget_low_f32(v)));
        acc = vaddq_f64(acc, vcvt_f64_f32(vget_high_f32(v)));
    }
    double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) total += a[i] < 0.0f ? -static_cast<double>(a[i]) : static_cast<double>(a[i]);
    return total;
}

double dot_f64(const double* a, const double* b, size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    float64x2_t acc = vaddq_f64(acc0, acc1);
    double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

void axpy_f64(double alpha, const double* x, double* y, size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_f64(const double* w, const double* x, double* y, size_t rows, size_t cols) {
    for (size_t r = 0; r < rows; ++r) y[r] = dot_f64(w + r * cols, x, cols);
}

}  // namespace tacsel::kernels::neon

#endif
