#include "mipd/replica.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mipd/error.hpp"
#include "mipd/rng.hpp"

namespace mipd {

SignalPoint SignalPoint::from_z(cplx z) {
    SignalPoint s;
    s.z = z;
    double half_arg = std::arg(z) / 2;
    if (half_arg <= -std::numbers::pi / 2) {
        half_arg += std::numbers::pi;
    }
    s.chi_principal = half_arg;
    s.defined = std::abs(z) >= kSignalFloor;
    s.alpha = s.defined ? 0.0 - std::log(std::abs(z)) : std::numeric_limits<double>::infinity();
    return s;
}

ReplicaStep replica_step(const Measurement &m, int steps) {
    const Mat2 dr = delta_rotation(m, steps);
    const KrausPair k = kraus_backaction(m.strength, m.asymmetry, steps);
    const Mat2 a0 = k.m0 * dr;
    const Mat2 a1 = k.m1 * dr;
    return ReplicaStep{tensor2(a0, a0) + tensor2(a1, a1), tensor2(dr, dr)};
}

Mat4 generator_gauge_step(const Measurement &m, int steps) {
    const Mat4 u = Mat4::diag({1.0, -1.0, -1.0, 1.0});
    const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * sign(m.direction) / steps);
    return phase * (u * replica_step(m, steps).m * u);
}

cplx amplitude_for_sequence(const Measurement &m, std::span<const std::uint8_t> readouts) {
    const int steps = static_cast<int>(readouts.size());
    const Vec<2> psi0 = initial_state(m.theta);
    Vec<2> v = psi0;
    for (int k = 1; k <= steps; k++) {
        v = kraus_full(k, readouts[k - 1], m, steps) * v;
    }
    return std::conj(psi0[0]) * v[0] + std::conj(psi0[1]) * v[1];
}

OutcomeTotals enumerate_outcomes(const Measurement &m, int steps, const kernels::KernelTable &kt) {
    if (steps < 1) {
        throw UsageError("enumeration needs N >= 1");
    }
    if (steps > kMaxBruteForceSteps) {
        throw TooLargeError("brute-force enumeration limited to N <= " + std::to_string(kMaxBruteForceSteps));
    }
    const std::size_t total = std::size_t{1} << steps;
    kernels::StateBatch cur(total), next(total);
    cur.set(0, initial_state(m.theta));
    // Sequence index bit (k − 1) holds readout r_k.
    for (int k = 1; k <= steps; k++) {
        const std::size_t len = std::size_t{1} << (k - 1);
        kt.apply_mat2(kraus_full(k, 0, m, steps), cur.view(0, len), next.span(0, len));
        kt.apply_mat2(kraus_full(k, 1, m, steps), cur.view(0, len), next.span(len, len));
        std::swap(cur, next);
    }
    const Vec<2> keep = initial_state(m.theta);
    const Vec<2> drop = rejected_state(m.theta);
    const kernels::OverlapSums acc = kt.overlap_sums({std::conj(keep[0]), std::conj(keep[1])}, cur.view());
    const kernels::OverlapSums rej = kt.overlap_sums({std::conj(drop[0]), std::conj(drop[1])}, cur.view());
    return OutcomeTotals{acc.square_sum, acc.abs2_sum, rej.abs2_sum};
}

SignalPoint brute_force_signal(const Measurement &m, int steps) {
    return SignalPoint::from_z(enumerate_outcomes(m, steps).z);
}

SignalPoint transfer_signal(const Measurement &m, int steps, const kernels::KernelTable &kt) {
    if (steps < 1) {
        throw UsageError("transfer contraction needs N >= 1");
    }
    const ReplicaStep step = replica_step(m, steps);
    Vec<4> v{1.0, 0.0, 0.0, 0.0};
    kt.transfer_power(step.m, v, static_cast<std::uint64_t>(steps));
    const Vec<4> out = step.boundary * v;
    return SignalPoint::from_z(out[0]);
}

Mat4 lambda_matrix(const Measurement &m) {
    const double pi = std::numbers::pi;
    const double d = sign(m.direction);
    const cplx i(0.0, 1.0);
    const cplx decay(-2.0 * m.strength, -2.0 * m.asymmetry);
    Mat4 l = Mat4::diag({
        2.0 * i * pi * d * std::cos(m.theta),
        decay,
        decay,
        -2.0 * i * pi * d * std::cos(m.theta) - 4.0 * i * m.asymmetry,
    });
    const cplx hop = -i * pi * d * std::sin(m.theta);
    // ↑↑ ↔ {↑↓, ↓↑} and {↑↓, ↓↑} ↔ ↓↓
    for (auto [r, c] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}}) {
        l(r, c) = hop;
        l(c, r) = hop;
    }
    return l;
}

cplx asymptotic_z(const Measurement &m) { return expm(lambda_matrix(m))(0, 0); }

SignalPoint asymptotic_signal(const Measurement &m) { return SignalPoint::from_z(asymptotic_z(m)); }

SignalPoint evaluate_signal(const ProtocolParams &p) {
    p.validate();
    if (p.is_asymptotic()) {
        return asymptotic_signal(p.measurement);
    }
    return transfer_signal(p.measurement, p.step_count());
}

DephasingSplit split_dephasing(double strength, double asymmetry, double theta) {
    const Measurement plus{strength, asymmetry, theta, Direction::Forward};
    const Measurement mirrored{strength, -asymmetry, theta, Direction::Forward};
    const Measurement minus{strength, asymmetry, theta, Direction::Backward};
    const SignalPoint a = asymptotic_signal(plus);
    const SignalPoint b = asymptotic_signal(mirrored);
    if (!a.defined || !b.defined) {
        std::ostringstream msg;
        msg << "dephasing undefined at C=" << strength << " A=" << asymmetry << " theta=" << theta;
        throw UndefinedError(msg.str());
    }
    DephasingSplit s;
    s.alpha_sym = 0.5 * (a.alpha + b.alpha);
    s.alpha_asym = 0.5 * (a.alpha - b.alpha);
    s.chi_plus = a.chi_principal;
    s.chi_minus = asymptotic_signal(minus).chi_principal;
    return s;
}

SymmetryReport verify_symmetries(std::size_t samples, std::uint64_t seed, const SignalFn &signal) {
    SymmetryReport report;
    report.samples = samples;
    const double pi = std::numbers::pi;
    for (std::size_t n = 0; n < samples; n++) {
        CounterRng rng(seed, n);
        const double c = 4.0 * rng.uniform();
        const double a = -2.0 + 4.0 * rng.uniform();
        const double th = pi * rng.uniform();
        const Direction d = rng.uniform() < 0.5 ? Direction::Forward : Direction::Backward;

        const cplx z = signal({c, a, th, d});
        const double conj_dev = std::abs(signal({c, -a, th, flipped(d)}) - std::conj(z));
        const double mirror_dev = std::abs(signal({c, a, pi - th, flipped(d)}) - z);
        const cplx z_plus = signal({c, a, th, Direction::Forward});
        const double combined_dev = std::abs(signal({c, -a, pi - th, Direction::Forward}) - std::conj(z_plus));

        report.conjugation = std::max(report.conjugation, conj_dev);
        report.mirror = std::max(report.mirror, mirror_dev);
        report.combined = std::max(report.combined, combined_dev);
        report.max_abs_z = std::max({report.max_abs_z, std::abs(z), std::abs(z_plus)});

        if (conj_dev > kSymmetryTolerance || mirror_dev > kSymmetryTolerance || combined_dev > kSymmetryTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "symmetry violated at C=" << c << " A=" << a << " theta=" << th << " d=" << sign(d)
                << " (conjugation " << conj_dev << ", mirror " << mirror_dev << ", combined " << combined_dev << ")";
            throw SymmetryViolationError(msg.str());
        }
    }
    return report;
}

}  // namespace mipd
