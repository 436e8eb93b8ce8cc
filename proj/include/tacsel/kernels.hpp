#pragma once

#include <cstddef>
#include <string>

namespace tacsel::kernels {

enum class Backend { scalar, avx2, neon };

// Backend chosen at startup from CPU capabilities.
Backend active_backend();
std::string backend_name(Backend b);
bool backend_available(Backend b);
// Force a backend (tests use this for scalar/SIMD equivalence checks).
// Throws std::runtime_error if the backend is not available on this CPU.
void set_backend(Backend b);

// out[i] = a[i] - b[i]
void sub_f32(const float* a, const float* b, float* out, size_t n);
// sum of |a[i]|
double sum_abs_f32(const float* a, size_t n);
// dot product, double accumulator
double dot_f64(const double* a, const double* b, size_t n);
// y[i] += alpha * x[i]
void axpy_f64(double alpha, const double* x, double* y, size_t n);
// y = W x, W row-major rows x cols
void matvec_f64(const double* w, const double* x, double* y, size_t rows, size_t cols);

}  // namespace tacsel::kernels
