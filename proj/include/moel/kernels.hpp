#pragma once

#include <cstddef>
#include <string_view>

// Dense inner loops of the network stack. Each kernel has a scalar reference
// and an AVX2/FMA variant; the variant is picked once per process from CPUID,
// and MOEL_KERNELS=scalar forces the reference path.

namespace moel::kernels {

using DotFn = double (*)(const double* a, const double* b, std::size_t n);
using AxpyFn = void (*)(double alpha, const double* x, double* y, std::size_t n);
using ScaleFn = void (*)(double alpha, double* x, std::size_t n);

struct KernelTable {
    std::string_view name;
    DotFn dot;
    AxpyFn axpy; // y += alpha * x
    ScaleFn scale; // x *= alpha
};

const KernelTable& scalar_table() noexcept;
/// Null when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_table() noexcept;

/// Table used by the library.
const KernelTable& active() noexcept;

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
inline void scale(double alpha, double* x, std::size_t n) { active().scale(alpha, x, n); }

} // namespace moel::kernels
