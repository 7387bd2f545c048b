#include "kernels_impl.hpp"

namespace moel::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

} // namespace moel::kernels::detail
