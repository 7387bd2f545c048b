#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "moel/kernels.hpp"

namespace moel::kernels {

namespace {

bool cpu_has_avx2() noexcept
{
#if MOEL_X86 && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable kScalar{"scalar", detail::dot_scalar, detail::axpy_scalar, detail::scale_scalar};
#if MOEL_X86
const KernelTable kAvx2{"avx2", detail::dot_avx2, detail::axpy_avx2, detail::scale_avx2};
#endif

const KernelTable& select()
{
    const char* forced = std::getenv("MOEL_KERNELS");
    if (forced && std::string_view(forced) == "scalar") return kScalar;
    if (const auto* t = avx2_table()) return *t;
    return kScalar;
}

} // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept
{
#if MOEL_X86
    static const bool ok = cpu_has_avx2();
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept
{
    static const KernelTable& table = select();
    return table;
}

} // namespace moel::kernels
