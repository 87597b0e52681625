#pragma once

#include <utility>
#include <variant>

#include "mipd/linalg.hpp"

namespace mipd {

/// Sense in which the measurement axes wind around the parallel.
enum class Direction : int { Forward = 1, Backward = -1 };

inline int sign(Direction d) { return static_cast<int>(d); }
inline Direction flipped(Direction d) { return d == Direction::Forward ? Direction::Backward : Direction::Forward; }

/// Throws UsageError unless value is +1 or -1.
Direction direction_from_int(int value);

/// Physical parameters shared by the finite-N and asymptotic modes.
struct Measurement {
    double strength = 0.0;   // C ≥ 0
    double asymmetry = 0.0;  // A, any real
    double theta = 0.0;      // polar angle of the parallel, [0, π]
    Direction direction = Direction::Forward;

    /// Throws UsageError on C < 0, θ outside [0, π] or non-finite values.
    void validate() const;
};

struct FiniteSteps {
    int count = 1;  // N ≥ 1
};

struct Asymptotic {};

using StepMode = std::variant<FiniteSteps, Asymptotic>;

struct ProtocolParams {
    Measurement measurement;
    StepMode steps = Asymptotic{};

    bool is_asymptotic() const { return std::holds_alternative<Asymptotic>(steps); }
    /// Throws UsageError in asymptotic mode.
    int step_count() const;
    void validate() const;
};

/// Rotation R(n) taking the measurement axis at polar angle theta and
/// azimuth phi to the z axis. Unitary.
Mat2 rotation(double theta, double phi);

struct KrausPair {
    Mat2 m0;  // readout 0: pull toward the axis and rotate by −2A/N
    Mat2 m1;  // readout 1: project onto the opposite direction
};

/// Back-action operators for a measurement of S_z, per step of an N-step
/// protocol.
KrausPair kraus_backaction(double strength, double asymmetry, int steps);

/// Azimuth of the k-th measurement axis, 2πkd/(N+1).
double axis_azimuth(int k, int steps, Direction d);

/// Kraus operator of the k-th measurement (1 ≤ k ≤ N) for readout r ∈ {0, 1}.
Mat2 kraus_full(int k, int readout, const Measurement &m, int steps);

/// Rotation between consecutive measurement axes, R(n_{k+1}) R⁻¹(n_k). The
/// same for every k; its (N+1)-th power is the identity.
Mat2 delta_rotation(const Measurement &m, int steps);

/// Same quantity evaluated for a specific pair (k, k+1); used to check
/// k-independence.
Mat2 delta_rotation_at(const Measurement &m, int steps, int k);

/// cos(θ/2)|↑⟩ + sin(θ/2)|↓⟩, the +1/2 eigenstate of n₀·S.
Vec<2> initial_state(double theta);

/// The orthogonal complement of initial_state (rejected final outcome).
Vec<2> rejected_state(double theta);

}  // namespace mipd
