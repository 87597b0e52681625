#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mipd/error.hpp"
#include "mipd/parallel.hpp"
#include "mipd/protocol.hpp"
#include "mipd/replica.hpp"

namespace mipd {

// ---------------------------------------------------------------------------
// Phase curves over θ and winding numbers.

inline constexpr int kMinCurveResolution = 64;
/// |z| below this anywhere along a θ path makes the winding ill-defined.
inline constexpr double kPathFloor = 1e-6;
inline constexpr double kWindingTolerance = 0.05;

struct PhaseCurve {
    std::vector<double> theta;          // increasing, from 0 to π
    std::vector<cplx> z;                // asymptotic signal per sample
    std::vector<double> chi_unwrapped;  // continuous, chi(0) = 0
    std::optional<int> winding;         // round(chi(π)/π) when within tolerance
};

/// Samples z(θ) on `resolution` uniform points in [0, π], bisecting any
/// interval whose wrapped arg(z) step is ≥ π/2, then unwraps arg(z) and
/// halves it. Throws IllDefinedPathError when a sample has |z| < kPathFloor
/// or an interval cannot be resolved.
PhaseCurve unwrap_phase(double strength, double asymmetry, Direction d, int resolution,
                        const SignalFn &signal = asymptotic_z);

/// n̄ = round(chi_unwrapped(π)/π). Throws IllDefinedPathError near the
/// critical line.
int winding_number(double strength, double asymmetry, Direction d, int resolution = 256);

/// Total arg change along a closed loop of samples (last joins first), each
/// step wrapped to (−π, π].
double accumulated_phase(std::span<const cplx> loop);

/// Accumulated arg(z) around a circle of `points` samples in the (C, A)
/// plane at fixed θ and d.
double loop_phase_in_strength_asymmetry(double center_strength, double center_asymmetry, double radius, int points,
                                        double theta, Direction d);

// ---------------------------------------------------------------------------
// Zeros of z (divergences of the dephasing).

struct CriticalPoint {
    double strength = 0.0;
    double asymmetry = 0.0;
    double theta = 0.0;
    Direction direction = Direction::Forward;
    double residual = 0.0;  // |z| at the root
    int iterations = 0;
};

inline constexpr double kRootTolerance = 1e-10;

class NoConvergenceError : public NumericError {
   public:
    NoConvergenceError(const std::string &what, CriticalPoint best) : NumericError(what), best_(best) {}
    const CriticalPoint &best() const { return best_; }

   private:
    CriticalPoint best_;
};

struct RootOptions {
    int max_iterations = 100;
    double jacobian_step = 1e-6;
};

/// Solves Re z = Im z = 0 for (C, θ) at fixed A by damped Newton with a
/// central-difference Jacobian, falling back to Nelder–Mead on |z|² when
/// Newton stagnates.
CriticalPoint find_critical_point(double seed_strength, double seed_theta, double asymmetry, Direction d,
                                  const RootOptions &opts = {});

/// Dual mode: solves for (C, A) at fixed θ.
CriticalPoint find_critical_point_at_theta(double seed_strength, double seed_asymmetry, double theta, Direction d,
                                           const RootOptions &opts = {});

struct CriticalLine {
    enum class Stop { RangeEnd, Stalled, LeftDomain };
    std::vector<CriticalPoint> points;
    Stop stop = Stop::RangeEnd;
};

const char *stop_name(CriticalLine::Stop s);

struct TraceOptions {
    double initial_step = 0.01;
    double min_step = 1e-4;
    RootOptions root;
};

/// Natural-parameter continuation of the critical line in A, starting from a
/// root near (seed C, seed θ) at a_start. Points are ordered from a_start
/// toward a_end.
CriticalLine trace_critical_line(double a_start, double a_end, Direction d, double seed_strength, double seed_theta,
                                 const TraceOptions &opts = {});

// ---------------------------------------------------------------------------
// Grid scans over (C, A).

struct AxisSpec {
    double start = 0.0;
    double end = 1.0;
    int count = 2;

    double at(int i) const { return start + (end - start) * i / (count - 1); }
    /// Throws UsageError unless count ≥ 2 and start < end.
    void validate() const;
};

struct ScanGrid {
    AxisSpec strength;
    AxisSpec asymmetry;
    double theta = 0.0;
    Direction direction = Direction::Forward;
    std::vector<SignalPoint> cells;  // row-major: A outer, C inner

    const SignalPoint &at(int ia, int ic) const { return cells[static_cast<std::size_t>(ia) * strength.count + ic]; }
};

ScanGrid scan_grid(const AxisSpec &strength, const AxisSpec &asymmetry, double theta, Direction d,
                   std::size_t threads = default_thread_count());

struct GridMinimum {
    int ia = 0;
    int ic = 0;
    double strength = 0.0;
    double asymmetry = 0.0;
    double abs_z = 0.0;
};

/// Cells whose |z| is below `below` and no larger than any of their (up to
/// eight) neighbours; ties go to the earlier cell.
std::vector<GridMinimum> local_minima(const ScanGrid &grid, double below);

}  // namespace mipd
