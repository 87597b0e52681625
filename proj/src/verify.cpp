#include "mipd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mipd/rng.hpp"
#include "mipd/topology.hpp"

namespace mipd {

namespace {

constexpr double kPi = std::numbers::pi;

Measurement random_measurement(CounterRng &rng) {
    const double c = 4.0 * rng.uniform();
    const double a = -2.0 + 4.0 * rng.uniform();
    // θ ∈ (0, π)
    const double th = kPi * (0.001 + 0.998 * rng.uniform());
    const Direction d = rng.uniform() < 0.5 ? Direction::Forward : Direction::Backward;
    return {c, a, th, d};
}

CheckResult make(std::string name, double deviation, double tolerance, std::string detail = {}) {
    return CheckResult{std::move(name), deviation, tolerance, deviation <= tolerance, std::move(detail)};
}

// Fixed parameter points for the convergence-slope check.
const Measurement kSlopePoints[] = {
    {2.0, 1.0, 3 * kPi / 4, Direction::Forward},  {1.0, -0.5, kPi / 3, Direction::Backward},
    {0.5, 0.3, kPi / 2, Direction::Forward},      {3.0, -1.5, 2 * kPi / 3, Direction::Forward},
    {1.5, 2.0, kPi / 4, Direction::Backward},
};

}  // namespace

std::vector<CheckResult> run_invariant_suite(const VerifyOptions &opts) {
    std::vector<CheckResult> results;
    double max_abs_z = 0.0;

    {
        const std::size_t draws = std::min<std::size_t>(opts.samples, 64);
        double oracle = 0.0, probability = 0.0, completeness = 0.0;
        for (std::size_t n = 0; n < draws; n++) {
            CounterRng rng(opts.seed, n);
            const Measurement m = random_measurement(rng);
            const int steps = 1 + static_cast<int>(n % 12);
            const OutcomeTotals totals = enumerate_outcomes(m, steps);
            const SignalPoint t = transfer_signal(m, steps);
            oracle = std::max(oracle, std::abs(t.z - totals.z));
            probability = std::max(probability, std::abs(totals.accepted + totals.rejected - 1.0));
            max_abs_z = std::max({max_abs_z, std::abs(t.z), std::abs(totals.z)});
            for (int k = 1; k <= steps; k++) {
                const Mat2 k0 = kraus_full(k, 0, m, steps);
                const Mat2 k1 = kraus_full(k, 1, m, steps);
                completeness =
                    std::max(completeness, max_abs(adjoint(k0) * k0 + adjoint(k1) * k1 - Mat2::identity()));
            }
        }
        results.push_back(make("oracle-equivalence (transfer vs brute force, N<=12)", oracle, 1e-12));
        results.push_back(make("probability-conservation", probability, 1e-12));
        results.push_back(make("kraus-completeness", completeness, 1e-14));
    }

    {
        CheckResult r;
        try {
            const SymmetryReport rep = verify_symmetries(opts.samples, opts.seed ^ 0x5eedULL, opts.signal);
            max_abs_z = std::max(max_abs_z, rep.max_abs_z);
            const double worst = std::max({rep.conjugation, rep.mirror, rep.combined});
            std::ostringstream detail;
            detail << "conjugation " << rep.conjugation << ", mirror " << rep.mirror << ", combined " << rep.combined;
            r = make("symmetries", worst, kSymmetryTolerance, detail.str());
        } catch (const SymmetryViolationError &e) {
            r = CheckResult{"symmetries", INFINITY, kSymmetryTolerance, false, e.what()};
        }
        results.push_back(r);
    }

    {
        double worst_ratio_dev = 0.0;
        std::ostringstream detail;
        for (const Measurement &m : kSlopePoints) {
            const cplx z_inf = opts.signal(m);
            const double e1 = std::abs(transfer_signal(m, 1000).z - z_inf);
            const double e2 = std::abs(transfer_signal(m, 2000).z - z_inf);
            const double ratio = e1 / e2;
            max_abs_z = std::max(max_abs_z, std::abs(z_inf));
            detail << ratio << " ";
            worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 2.0));
            if (!std::isfinite(ratio)) {
                worst_ratio_dev = INFINITY;
            }
        }
        results.push_back(make("convergence-slope (|ratio - 2|, N=1000 vs 2000)", worst_ratio_dev, 0.3,
                               "ratios " + detail.str()));
    }

    {
        double worst = 0.0;
        int evaluated = 0;
        const std::size_t draws = std::min<std::size_t>(opts.samples, 16);
        for (std::size_t n = 0; n < draws; n++) {
            CounterRng rng(opts.seed ^ 0x77ULL, n);
            const double c = 0.1 + 4.9 * rng.uniform();
            const double a = -2.0 + 4.0 * rng.uniform();
            const Direction d = rng.uniform() < 0.5 ? Direction::Forward : Direction::Backward;
            try {
                const PhaseCurve curve = unwrap_phase(c, a, d, 128, opts.signal);
                const double turns = curve.chi_unwrapped.back() / kPi;
                worst = std::max(worst, std::abs(turns - std::round(turns)));
                for (const cplx &z : curve.z) {
                    max_abs_z = std::max(max_abs_z, std::abs(z));
                }
                evaluated++;
            } catch (const IllDefinedPathError &) {
                // Parameters on or next to the critical line carry no winding.
            }
        }
        results.push_back(make("winding-integrality", worst, kWindingTolerance,
                               std::to_string(evaluated) + " off-critical paths"));
    }

    results.push_back(make("coherence-bound (max |z| - 1)", std::max(0.0, max_abs_z - 1.0), 1e-12));
    return results;
}

bool print_report(std::ostream &out, const std::vector<CheckResult> &results) {
    bool all = true;
    for (const CheckResult &r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": max deviation " << r.deviation << " (tolerance "
            << r.tolerance << ")";
        if (!r.detail.empty()) {
            out << " [" << r.detail << "]";
        }
        out << '\n';
        all = all && r.passed;
    }
    return all;
}

}  // namespace mipd
