#include "mipd/protocol.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mipd/error.hpp"

namespace mipd {

Direction direction_from_int(int value) {
    if (value == 1) {
        return Direction::Forward;
    }
    if (value == -1) {
        return Direction::Backward;
    }
    throw UsageError("direction must be +1 or -1, got " + std::to_string(value));
}

void Measurement::validate() const {
    if (!std::isfinite(strength) || strength < 0.0) {
        throw UsageError("measurement strength C must be finite and >= 0");
    }
    if (!std::isfinite(asymmetry)) {
        throw UsageError("asymmetry A must be finite");
    }
    if (!std::isfinite(theta) || theta < 0.0 || theta > std::numbers::pi) {
        throw UsageError("theta must lie in [0, pi]");
    }
}

int ProtocolParams::step_count() const {
    if (const auto *f = std::get_if<FiniteSteps>(&steps)) {
        return f->count;
    }
    throw UsageError("step count requested in asymptotic mode");
}

void ProtocolParams::validate() const {
    measurement.validate();
    if (const auto *f = std::get_if<FiniteSteps>(&steps); f && f->count < 1) {
        throw UsageError("number of measurements N must be >= 1");
    }
}

Mat2 rotation(double theta, double phi) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const cplx e = std::polar(1.0, -phi);
    Mat2 r;
    r(0, 0) = c;
    r(0, 1) = s * e;
    r(1, 0) = s;
    r(1, 1) = -c * e;
    return r;
}

KrausPair kraus_backaction(double strength, double asymmetry, int steps) {
    const double n = steps;
    KrausPair k;
    k.m0 = Mat2::diag({1.0, std::exp(cplx(-2.0 * strength / n, -2.0 * asymmetry / n))});
    // 1 − e^{−x} via expm1 keeps weak measurements accurate.
    k.m1 = Mat2::diag({0.0, std::sqrt(-std::expm1(-4.0 * strength / n))});
    return k;
}

double axis_azimuth(int k, int steps, Direction d) {
    return 2.0 * std::numbers::pi * k * sign(d) / (steps + 1.0);
}

Mat2 kraus_full(int k, int readout, const Measurement &m, int steps) {
    const Mat2 r = rotation(m.theta, axis_azimuth(k, steps, m.direction));
    const KrausPair pair = kraus_backaction(m.strength, m.asymmetry, steps);
    return adjoint(r) * (readout == 0 ? pair.m0 : pair.m1) * r;
}

Mat2 delta_rotation_at(const Measurement &m, int steps, int k) {
    const Mat2 next = rotation(m.theta, axis_azimuth(k + 1, steps, m.direction));
    const Mat2 cur = rotation(m.theta, axis_azimuth(k, steps, m.direction));
    return next * adjoint(cur);
}

Mat2 delta_rotation(const Measurement &m, int steps) { return delta_rotation_at(m, steps, 0); }

Vec<2> initial_state(double theta) { return {std::cos(theta / 2), std::sin(theta / 2)}; }

Vec<2> rejected_state(double theta) { return {-std::sin(theta / 2), std::cos(theta / 2)}; }

}  // namespace mipd
