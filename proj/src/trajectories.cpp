#include "mipd/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "mipd/csv.hpp"
#include "mipd/error.hpp"

namespace mipd {

namespace {

double norm2(const Vec<2> &v) { return std::norm(v[0]) + std::norm(v[1]); }

double checked_probability(double p, const char *what) {
    if (!(p >= -kProbabilityBand && p <= 1.0 + kProbabilityBand)) {
        throw DegenerateProbabilityError(std::string(what) + " probability out of range: " + std::to_string(p));
    }
    return std::clamp(p, 0.0, 1.0);
}

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

struct BlockTotals {
    CompensatedSum re, im, re2, im2;
    std::uint64_t accepted = 0;
};

}  // namespace

KrausSchedule::KrausSchedule(const Measurement &m, int steps) : measurement_(m) {
    if (steps < 1) {
        throw UsageError("trajectory sampling needs N >= 1");
    }
    ops_.reserve(steps);
    for (int k = 1; k <= steps; k++) {
        ops_.push_back(KrausPair{kraus_full(k, 0, m, steps), kraus_full(k, 1, m, steps)});
    }
}

TrajectoryRecord sample_trajectory(const KrausSchedule &schedule, CounterRng &rng) {
    const Vec<2> psi0 = initial_state(schedule.measurement().theta);
    TrajectoryRecord rec;
    rec.readouts.resize(schedule.steps());
    Vec<2> v = psi0;
    for (int k = 1; k <= schedule.steps(); k++) {
        const double n2 = norm2(v);
        if (!(n2 > 0.0)) {
            throw DegenerateProbabilityError("state norm vanished at step " + std::to_string(k));
        }
        const Vec<2> w0 = schedule.op(k, 0) * v;
        const double p0 = checked_probability(norm2(w0) / n2, "readout");
        const int r = rng.uniform() < p0 ? 0 : 1;
        rec.readouts[k - 1] = static_cast<std::uint8_t>(r);
        v = r == 0 ? w0 : schedule.op(k, 1) * v;
    }
    rec.pre_postselection_norm2 = norm2(v);
    rec.amplitude = std::conj(psi0[0]) * v[0] + std::conj(psi0[1]) * v[1];
    if (!(rec.pre_postselection_norm2 > 0.0)) {
        throw DegenerateProbabilityError("state norm vanished before postselection");
    }
    const double accept = checked_probability(std::norm(rec.amplitude) / rec.pre_postselection_norm2, "acceptance");
    rec.accepted = rng.uniform() < accept;
    return rec;
}

TrajectoryRecord sample_trajectory(const Measurement &m, int steps, CounterRng &rng) {
    return sample_trajectory(KrausSchedule(m, steps), rng);
}

McEstimate estimate_signal(const Measurement &m, int steps, std::uint64_t shots, std::uint64_t seed,
                           std::size_t threads, std::vector<TrajectoryRecord> *records) {
    if (shots < 1) {
        throw UsageError("shots must be >= 1");
    }
    const KrausSchedule schedule(m, steps);
    const std::uint64_t blocks = (shots + kShotBlock - 1) / kShotBlock;
    std::vector<BlockTotals> totals(blocks);
    if (records) {
        records->assign(shots, TrajectoryRecord{});
    }

    parallel_for(
        blocks,
        [&](std::size_t begin, std::size_t end) {
            for (std::size_t b = begin; b < end; b++) {
                BlockTotals &t = totals[b];
                const std::uint64_t first = b * kShotBlock;
                const std::uint64_t last = std::min(shots, first + kShotBlock);
                for (std::uint64_t s = first; s < last; s++) {
                    CounterRng rng(seed, s);
                    TrajectoryRecord rec = sample_trajectory(schedule, rng);
                    double x = 0.0;
                    double y = 0.0;
                    if (rec.accepted) {
                        t.accepted++;
                        // amplitude² / |amplitude|² = e^{2i·arg(amplitude)}
                        const cplx phase = std::polar(1.0, 2.0 * std::arg(rec.amplitude));
                        x = phase.real();
                        y = phase.imag();
                    }
                    t.re.add(x);
                    t.im.add(y);
                    t.re2.add(x * x);
                    t.im2.add(y * y);
                    if (records) {
                        (*records)[s] = std::move(rec);
                    }
                }
            }
        },
        threads);

    CompensatedSum re, im, re2, im2;
    std::uint64_t accepted = 0;
    for (const BlockTotals &t : totals) {
        re.add(t.re.value());
        im.add(t.im.value());
        re2.add(t.re2.value());
        im2.add(t.im2.value());
        accepted += t.accepted;
    }
    const double n = static_cast<double>(shots);
    auto standard_error = [n](double sum, double sum_sq) {
        if (n < 2) {
            return 0.0;
        }
        const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1));
        return std::sqrt(var / n);
    };
    McEstimate est;
    est.z_hat = cplx(re.value() / n, im.value() / n);
    est.stderr_re = standard_error(re.value(), re2.value());
    est.stderr_im = standard_error(im.value(), im2.value());
    est.shots = shots;
    est.accept_rate = static_cast<double>(accepted) / n;
    est.seed = seed;
    return est;
}

void write_trajectory_log(std::ostream &out, const std::vector<TrajectoryRecord> &records) {
    out << "shot,readouts,re_amp,im_amp,accepted\n";
    for (std::size_t s = 0; s < records.size(); s++) {
        const TrajectoryRecord &r = records[s];
        std::string bits;
        bits.reserve(r.readouts.size());
        for (auto b : r.readouts) {
            bits.push_back(b ? '1' : '0');
        }
        out << s << ',' << bits << ',' << format_real(r.amplitude.real()) << ',' << format_real(r.amplitude.imag())
            << ',' << (r.accepted ? 1 : 0) << '\n';
    }
}

}  // namespace mipd
