#include "tacsel/kernels.hpp"

#include <stdexcept>

namespace tacsel::kernels {

namespace scalar {
void sub_f32(const float*, const float*, float*, size_t);
double sum_abs_f32(const float*, size_t);
double dot_f64(const double*, const double*, size_t);
void axpy_f64(double, const double*, double*, size_t);
void matvec_f64(const double*, const double*, double*, size_t, size_t);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void sub_f32(const float*, const float*, float*, size_t);
double sum_abs_f32(const float*, size_t);
double dot_f64(const double*, const double*, size_t);
void axpy_f64(double, const double*, double*, size_t);
void matvec_f64(const double*, const double*, double*, size_t, size_t);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
void sub_f32(const float*, const float*, float*, size_t);
double sum_abs_f32(const float*, size_t);
double dot_f64(const double*, const double*, size_t);
void axpy_f64(double, const double*, double*, size_t);
void matvec_f64(const double*, const double*, double*, size_t, size_t);
}  // namespace neon
#endif

namespace {

struct Table {
    void (*sub_f32)(const float*, const float*, float*, size_t);
    double (*sum_abs_f32)(const float*, size_t);
    double (*dot_f64)(const double*, const double*, size_t);
    void (*axpy_f64)(double, const double*, double*, size_t);
    void (*matvec_f64)(const double*, const double*, double*, size_t, size_t);
};

constexpr Table kScalar{scalar::sub_f32, scalar::sum_abs_f32, scalar::dot_f64,
                        scalar::axpy_f64, scalar::matvec_f64};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2{avx2::sub_f32, avx2::sum_abs_f32, avx2::dot_f64, avx2::axpy_f64,
                      avx2::matvec_f64};
#endif
#if defined(__aarch64__)
constexpr Table kNeon{neon::sub_f32, neon::sum_abs_f32, neon::dot_f64, neon::axpy_f64,
                      neon::matvec_f64};
#endif

Backend detect_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#elif defined(__aarch64__)
    return Backend::neon;
#endif
    return Backend::scalar;
}

const Table* table_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &kScalar;
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return &kAvx2;
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return &kNeon;
#endif
        default:
            return nullptr;
    }
}

Backend g_backend = detect_backend();
const Table* g_table = table_for(g_backend);

}  // namespace

Backend active_backend() { return g_backend; }

std::string backend_name(Backend b) {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
        case Backend::neon:
            return "neon";
    }
    return "unknown";
}

bool backend_available(Backend b) { return table_for(b) != nullptr && (b == Backend::scalar || detect_backend() == b); }

void set_backend(Backend b) {
    if (!backend_available(b)) {
        throw std::runtime_error("kernel backend not available on this CPU: " + backend_name(b));
    }
    g_backend = b;
    g_table = table_for(b);
}

void sub_f32(const float* a, const float* b, float* out, size_t n) { g_table->sub_f32(a, b, out, n); }
double sum_abs_f32(const float* a, size_t n) { return g_table->sum_abs_f32(a, n); }
double dot_f64(const double* a, const double* b, size_t n) { return g_table->dot_f64(a, b, n); }
void axpy_f64(double alpha, const double* x, double* y, size_t n) { g_table->axpy_f64(alpha, x, y, n); }
void matvec_f64(const double* w, const double* x, double* y, size_t rows, size_t cols) {
    g_table->matvec_f64(w, x, y, rows, cols);
}

}  // namespace tacsel::kernels
