#pragma once

#include <cstddef>

#if defined(__x86_64__) || defined(_M_X64)
#define MOEL_X86 1
#else
#define MOEL_X86 0
#endif

namespace moel::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void scale_scalar(double alpha, double* x, std::size_t n);

#if MOEL_X86
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void scale_avx2(double alpha, double* x, std::size_t n);
#endif

} // namespace moel::kernels::detail
