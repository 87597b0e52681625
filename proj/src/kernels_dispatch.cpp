#include <cstdlib>
#include <string>

#include "mipd/kernels.hpp"

namespace mipd::kernels {

#if defined(MIPD_HAVE_AVX2)
const KernelTable &avx2_table_impl();
#endif

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
    }
    return "unknown";
}

void StateBatch::resize(std::size_t n) {
    re0_.resize(n);
    im0_.resize(n);
    re1_.resize(n);
    im1_.resize(n);
}

void StateBatch::set(std::size_t k, const Vec<2> &v) {
    re0_[k] = v[0].real();
    im0_[k] = v[0].imag();
    re1_[k] = v[1].real();
    im1_[k] = v[1].imag();
}

Vec<2> StateBatch::get(std::size_t k) const {
    return {cplx(re0_[k], im0_[k]), cplx(re1_[k], im1_[k])};
}

BatchView StateBatch::view(std::size_t offset, std::size_t count) const {
    return BatchView{
        std::span<const double>(re0_).subspan(offset, count),
        std::span<const double>(im0_).subspan(offset, count),
        std::span<const double>(re1_).subspan(offset, count),
        std::span<const double>(im1_).subspan(offset, count),
    };
}

BatchSpan StateBatch::span(std::size_t offset, std::size_t count) {
    return BatchSpan{
        std::span<double>(re0_).subspan(offset, count),
        std::span<double>(im0_).subspan(offset, count),
        std::span<double>(re1_).subspan(offset, count),
        std::span<double>(im1_).subspan(offset, count),
    };
}

const KernelTable *avx2_table() {
#if defined(MIPD_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_table_impl() : nullptr;
#else
    return nullptr;
#endif
}

std::vector<const KernelTable *> available_tables() {
    std::vector<const KernelTable *> tables{&scalar_table()};
    if (const KernelTable *t = avx2_table()) {
        tables.push_back(t);
    }
    return tables;
}

const KernelTable &active() {
    static const KernelTable *chosen = [] {
        const char *env = std::getenv("MIPD_SIMD");
        const std::string want = env ? env : "";
        if (want == "scalar") {
            return &scalar_table();
        }
        if (const KernelTable *t = avx2_table()) {
            return t;
        }
        return &scalar_table();
    }();
    return *chosen;
}

}  // namespace mipd::kernels
