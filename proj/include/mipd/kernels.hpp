#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants.
//
// Every variant performs the same floating-point operations in the same order
// per lane (no fused multiply-add), so results are bit-identical across
// variants. The scalar version defines the reference order, including the
// 4-way interleaved accumulation used by reductions.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mipd/linalg.hpp"

namespace mipd::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Read-only structure-of-arrays view of a batch of 2-component complex
/// vectors (components 0 and 1, split into real and imaginary planes).
struct BatchView {
    std::span<const double> re0, im0, re1, im1;
    std::size_t size() const { return re0.size(); }
};

struct BatchSpan {
    std::span<double> re0, im0, re1, im1;
    std::size_t size() const { return re0.size(); }
};

/// Owning batch storage.
class StateBatch {
   public:
    StateBatch() = default;
    explicit StateBatch(std::size_t n) : re0_(n), im0_(n), re1_(n), im1_(n) {}

    std::size_t size() const { return re0_.size(); }
    void resize(std::size_t n);
    void set(std::size_t k, const Vec<2> &v);
    Vec<2> get(std::size_t k) const;

    BatchView view(std::size_t offset, std::size_t count) const;
    BatchView view() const { return view(0, size()); }
    BatchSpan span(std::size_t offset, std::size_t count);

   private:
    std::vector<double> re0_, im0_, re1_, im1_;
};

struct OverlapSums {
    cplx square_sum;  // Σ (row·v)²
    double abs2_sum;  // Σ |row·v|²
};

struct KernelTable {
    Isa isa;

    /// v ← m·v, repeated `steps` times.
    void (*transfer_power)(const Mat4 &m, Vec<4> &v, std::uint64_t steps);

    /// out[k] = m·in[k] for every batch element. `in` and `out` must not alias.
    void (*apply_mat2)(const Mat2 &m, BatchView in, BatchSpan out);

    /// Reduces the overlaps a_k = row[0]·in0[k] + row[1]·in1[k] (no implicit
    /// conjugation) into Σ a_k² and Σ |a_k|².
    OverlapSums (*overlap_sums)(const Vec<2> &row, BatchView in);
};

const KernelTable &scalar_table();

/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable *avx2_table();

/// Best supported table, chosen once at first use. The environment variable
/// MIPD_SIMD=scalar|avx2 overrides the choice (falling back to scalar if the
/// requested variant is unavailable).
const KernelTable &active();

/// All tables usable on this machine, scalar first.
std::vector<const KernelTable *> available_tables();

}  // namespace mipd::kernels
