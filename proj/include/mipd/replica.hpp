#pragma once

// Averaged signal z = Σ over readout sequences of (⟨ψ₀|𝓜_N⋯𝓜_1|ψ₀⟩)², computed
// by brute-force enumeration, by the exact finite-N replica transfer matrix,
// and in the N → ∞ limit as an element of exp(Λ).

#include <cstdint>
#include <functional>
#include <span>

#include "mipd/kernels.hpp"
#include "mipd/linalg.hpp"
#include "mipd/protocol.hpp"

namespace mipd {

/// Below this |z| the dephasing exponent is reported as undefined.
inline constexpr double kSignalFloor = 1e-14;

/// Largest N accepted by brute-force enumeration (2^N sequences).
inline constexpr int kMaxBruteForceSteps = 20;

struct SignalPoint {
    cplx z;
    double alpha = 0.0;          // −ln|z|, +∞ when undefined
    double chi_principal = 0.0;  // arg(z)/2 ∈ (−π/2, π/2]
    bool defined = true;

    static SignalPoint from_z(cplx z);
};

/// Exact finite-N replica objects.
struct ReplicaStep {
    Mat4 m;         // Σ_r (M^(r) δR) ⊗ (M^(r) δR)
    Mat4 boundary;  // δR ⊗ δR
};

ReplicaStep replica_step(const Measurement &m, int steps);

/// The exact step in the gauge of the closed-form generator,
/// e^{2πid/N} · U · m · U with U = diag(1, −1, −1, 1). Its N-th power has the
/// same (↑↑, ↑↑) element as m^N, and it equals I + Λ/N + O(N⁻²).
Mat4 generator_gauge_step(const Measurement &m, int steps);

/// ⟨ψ₀|𝓜_N^{(r_N)}⋯𝓜_1^{(r_1)}|ψ₀⟩ with N = readouts.size(); its squared
/// magnitude is the sequence probability (including the final postselection).
cplx amplitude_for_sequence(const Measurement &m, std::span<const std::uint8_t> readouts);

/// Totals over all 2^N readout sequences.
struct OutcomeTotals {
    cplx z;                   // Σ amplitude²
    double accepted = 0.0;    // Σ P(sequence, final readout 0)
    double rejected = 0.0;    // Σ P(sequence, final readout 1)
};

/// Breadth-first enumeration of all readout sequences. Throws TooLargeError
/// for N > kMaxBruteForceSteps.
OutcomeTotals enumerate_outcomes(const Measurement &m, int steps,
                                 const kernels::KernelTable &k = kernels::active());

SignalPoint brute_force_signal(const Measurement &m, int steps);

/// z = ⟨↑↑| (δR⊗δR) · m^N |↑↑⟩ by N vector-matrix products.
SignalPoint transfer_signal(const Measurement &m, int steps,
                            const kernels::KernelTable &k = kernels::active());

/// Closed-form generator Λ in the basis (↑↑, ↑↓, ↓↑, ↓↓).
Mat4 lambda_matrix(const Measurement &m);

/// [exp(Λ)]_{↑↑,↑↑}.
SignalPoint asymptotic_signal(const Measurement &m);

/// Finite-N transfer or asymptotic evaluation, by mode.
SignalPoint evaluate_signal(const ProtocolParams &p);

struct DephasingSplit {
    double alpha_sym = 0.0;
    double alpha_asym = 0.0;
    double chi_plus = 0.0;   // χ̄ for d = +1
    double chi_minus = 0.0;  // χ̄ for d = −1
};

/// Symmetric and antisymmetric parts of the asymptotic dephasing, using
/// α^{(−1)}(C, A, θ) = α^{(+1)}(C, −A, θ). Throws UndefinedError when either
/// signal is below the floor.
DephasingSplit split_dephasing(double strength, double asymmetry, double theta);

/// Signal evaluator used by the symmetry check; swappable so a corrupted
/// generator can serve as a negative control.
using SignalFn = std::function<cplx(const Measurement &)>;

cplx asymptotic_z(const Measurement &m);

struct SymmetryReport {
    std::size_t samples = 0;
    double conjugation = 0.0;  // max |z^{(−d)}(C,−A,θ) − conj z^{(d)}(C,A,θ)|
    double mirror = 0.0;       // max |z^{(−d)}(C,A,π−θ) − z^{(d)}(C,A,θ)|
    double combined = 0.0;     // max |z^{(+1)}(C,−A,π−θ) − conj z^{(+1)}(C,A,θ)|
    double max_abs_z = 0.0;
};

inline constexpr double kSymmetryTolerance = 1e-10;

/// Draws C ∈ [0,4], A ∈ [−2,2], θ ∈ [0,π], d = ±1 and checks the three
/// symmetry identities. Throws SymmetryViolationError naming the offending
/// parameters when a deviation exceeds kSymmetryTolerance.
SymmetryReport verify_symmetries(std::size_t samples, std::uint64_t seed, const SignalFn &signal = asymptotic_z);

}  // namespace mipd
