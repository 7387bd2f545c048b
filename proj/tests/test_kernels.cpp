#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "moel/kernels.hpp"

using namespace moel;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

} // namespace

TEST_CASE("scalar reference kernels")
{
    const auto& k = kernels::scalar_table();
    std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(k.dot(a.data(), b.data(), 3) == 32.0);
    CHECK(k.dot(a.data(), b.data(), 0) == 0.0);
    k.axpy(2.0, a.data(), b.data(), 3);
    CHECK(b == std::vector<double>{6, 9, 12});
    k.scale(0.5, b.data(), 3);
    CHECK(b == std::vector<double>{3, 4.5, 6});
}

TEST_CASE("active table is one of the known variants")
{
    const auto& t = kernels::active();
    CHECK((t.name == "scalar" || t.name == "avx2"));
    if (kernels::avx2_table() == nullptr) CHECK(t.name == "scalar");
}

TEST_CASE("avx2 kernels match the scalar reference")
{
    const auto* simd = kernels::avx2_table();
    if (!simd) {
        MESSAGE("AVX2 unavailable on this machine; equivalence not exercised");
        return;
    }
    const auto& ref = kernels::scalar_table();
    std::mt19937_64 rng(17);
    std::vector<std::size_t> sizes;
    for (std::size_t n = 0; n <= 70; ++n) sizes.push_back(n);
    for (std::size_t n : {127u, 128u, 129u, 256u, 3136u, 4099u}) sizes.push_back(n);

    for (auto n : sizes) {
        auto a = random_vec(n, rng);
        auto b = random_vec(n, rng);
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(a[i] * b[i]);
        const double tol = 1e-14 * (abs_sum + 1.0);
        CHECK(std::abs(simd->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= tol);

        auto y1 = b, y2 = b;
        ref.axpy(-0.37, a.data(), y1.data(), n);
        simd->axpy(-0.37, a.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (std::abs(y1[i]) + 1.0));

        auto s1 = a, s2 = a;
        ref.scale(1.5, s1.data(), n);
        simd->scale(1.5, s2.data(), n);
        CHECK(s1 == s2);
    }
}

TEST_CASE("unaligned views match")
{
    const auto* simd = kernels::avx2_table();
    if (!simd) return;
    std::mt19937_64 rng(4);
    auto a = random_vec(300, rng);
    auto b = random_vec(300, rng);
    for (std::size_t off = 0; off < 4; ++off) {
        const double r = kernels::scalar_table().dot(a.data() + off, b.data() + off, 290);
        CHECK(simd->dot(a.data() + off, b.data() + off, 290) == doctest::Approx(r).epsilon(1e-12));
    }
}
