#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mipd/linalg.hpp"
#include "mipd/parallel.hpp"
#include "mipd/protocol.hpp"
#include "mipd/rng.hpp"

namespace mipd {

/// One simulated run of the protocol.
struct TrajectoryRecord {
    std::vector<std::uint8_t> readouts;   // r_1 … r_N
    cplx amplitude;                       // ⟨ψ₀|𝓜_N⋯𝓜_1|ψ₀⟩ (unnormalized)
    double pre_postselection_norm2 = 0.0; // ||𝓜_N⋯𝓜_1 ψ₀||²
    bool accepted = false;                // final projective readout was 0
};

/// Precomputed Kraus operators 𝓜_k^{(0)}, 𝓜_k^{(1)} for k = 1 … N.
class KrausSchedule {
   public:
    KrausSchedule(const Measurement &m, int steps);

    int steps() const { return static_cast<int>(ops_.size()); }
    const Mat2 &op(int k, int readout) const { return readout == 0 ? ops_[k - 1].m0 : ops_[k - 1].m1; }
    const Measurement &measurement() const { return measurement_; }

   private:
    Measurement measurement_;
    std::vector<KrausPair> ops_;
};

/// Probabilities within this band outside [0, 1] are clamped; anything
/// further out raises DegenerateProbabilityError.
inline constexpr double kProbabilityBand = 1e-12;

/// Draws readouts step by step with the Born probabilities of the current
/// unnormalized state, then the final accept/reject outcome.
TrajectoryRecord sample_trajectory(const KrausSchedule &schedule, CounterRng &rng);
TrajectoryRecord sample_trajectory(const Measurement &m, int steps, CounterRng &rng);

struct McEstimate {
    cplx z_hat;
    double stderr_re = 0.0;
    double stderr_im = 0.0;
    std::uint64_t shots = 0;
    double accept_rate = 0.0;
    std::uint64_t seed = 0;
};

/// Shots are summed in fixed blocks of this many consecutive shot indices.
inline constexpr std::uint64_t kShotBlock = 4096;

/// Monte Carlo estimate of z: the mean over shots of e^{2i·arg(amplitude)}
/// for accepted shots and 0 for rejected ones. Shot s uses stream
/// CounterRng(seed, s), so the result is bit-identical for any thread count.
/// When `records` is non-null it receives every trajectory, indexed by shot.
McEstimate estimate_signal(const Measurement &m, int steps, std::uint64_t shots, std::uint64_t seed,
                           std::size_t threads = default_thread_count(),
                           std::vector<TrajectoryRecord> *records = nullptr);

/// CSV log: header `shot,readouts,re_amp,im_amp,accepted`.
void write_trajectory_log(std::ostream &out, const std::vector<TrajectoryRecord> &records);

}  // namespace mipd
