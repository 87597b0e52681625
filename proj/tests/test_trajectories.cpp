#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <numbers>
#include <sstream>

#include "mipd/csv.hpp"
#include "mipd/replica.hpp"
#include "mipd/trajectories.hpp"

using namespace mipd;
constexpr double kPi = std::numbers::pi;

TEST(Trajectories, NoMeasurementNeverJumps) {
    const Measurement m{0, 0, 1.2, Direction::Forward};
    const McEstimate e = estimate_signal(m, 20, 1000, 5, 2);
    EXPECT_LT(std::abs(e.z_hat - 1.0), 1e-15);
    EXPECT_EQ(e.accept_rate, 1.0);
}

TEST(Trajectories, PolarAxisIsAnEigenstate) {
    // θ = 0: every axis is the z axis and ψ0 = |↑⟩ is never disturbed.
    const Measurement m{3.0, 1.0, 0.0, Direction::Forward};
    CounterRng rng(1, 0);
    for (int s = 0; s < 50; s++) {
        const TrajectoryRecord t = sample_trajectory(m, 30, rng);
        EXPECT_TRUE(t.accepted);
        for (auto r : t.readouts) {
            EXPECT_EQ(r, 0);
        }
        EXPECT_NEAR(std::norm(t.amplitude), 1.0, 1e-14);
    }
}

TEST(Trajectories, ZenoRegimeRarelyJumps) {
    // Strong measurement keeps the spin on the moving axis. A readout 1
    // flips it to the opposite direction, where it then stays, so the rate
    // that matters is that of leaving the dragged state.
    const Measurement m{50, 0, kPi / 2, Direction::Forward};
    CounterRng rng(3, 0);
    const int n = 50;
    const KrausSchedule sched(m, n);
    std::uint64_t dragged_readouts = 0, escapes = 0, never_left = 0;
    const int shots = 4000;
    for (int s = 0; s < shots; s++) {
        const TrajectoryRecord t = sample_trajectory(sched, rng);
        bool on_axis = true;
        for (auto r : t.readouts) {
            if (!on_axis) {
                break;
            }
            dragged_readouts++;
            if (r == 1) {
                escapes++;
                on_axis = false;
            }
        }
        never_left += on_axis;
    }
    EXPECT_LT(double(escapes) / dragged_readouts, 0.05);
    // Per-step escape probability sin²(π/(N+1)) ≈ 0.4%, so most shots never
    // leave the axis.
    EXPECT_GT(double(never_left) / shots, 0.7);
}

TEST(Trajectories, RecordsAreSelfConsistent) {
    const Measurement m{2, 1, 3 * kPi / 4, Direction::Forward};
    CounterRng rng(9, 4);
    const TrajectoryRecord t = sample_trajectory(m, 15, rng);
    ASSERT_EQ(t.readouts.size(), 15u);
    EXPECT_LT(std::abs(t.amplitude - amplitude_for_sequence(m, t.readouts)), 1e-14);
    EXPECT_LE(std::norm(t.amplitude), t.pre_postselection_norm2 + 1e-15);
}

TEST(Trajectories, EstimateMatchesTransfer) {
    const Measurement m{1.0, 0.5, 1.0, Direction::Backward};
    const int n = 50;
    const McEstimate e = estimate_signal(m, n, 40000, 17, 2);
    const cplx z = transfer_signal(m, n).z;
    EXPECT_LE(std::abs(e.z_hat.real() - z.real()), 4 * e.stderr_re);
    EXPECT_LE(std::abs(e.z_hat.imag() - z.imag()), 4 * e.stderr_im);
}

TEST(Trajectories, DeterministicAcrossThreadCounts) {
    const Measurement m{2, 1, 3 * kPi / 4, Direction::Forward};
    const McEstimate a = estimate_signal(m, 40, 10000, 123, 1);
    for (std::size_t threads : {2u, 3u, 8u}) {
        const McEstimate b = estimate_signal(m, 40, 10000, 123, threads);
        EXPECT_EQ(a.z_hat, b.z_hat) << threads;
        EXPECT_EQ(a.stderr_re, b.stderr_re);
        EXPECT_EQ(a.accept_rate, b.accept_rate);
    }
    EXPECT_NE(estimate_signal(m, 40, 10000, 124, 1).z_hat, a.z_hat);
}

TEST(Trajectories, StandardErrorScalesAsInverseRoot) {
    const Measurement m{1.5, 0.3, 2.0, Direction::Forward};
    const McEstimate a = estimate_signal(m, 30, 8000, 2, 2);
    const McEstimate b = estimate_signal(m, 30, 32000, 2, 2);
    EXPECT_NEAR(a.stderr_re / b.stderr_re, 2.0, 0.2);
    EXPECT_NEAR(a.stderr_im / b.stderr_im, 2.0, 0.2);
}

TEST(Trajectories, SequenceFrequenciesMatchBornRule) {
    // N = 4: 16 readout strings × {accept, reject} = 32 cells, pooled
    // to the 16 strings; Pearson χ² against exact probabilities.
    const Measurement m{2.5, 0.7, 1.9, Direction::Forward};
    const int n = 4;
    const std::uint64_t shots = 100000;
    std::vector<TrajectoryRecord> records;
    estimate_signal(m, n, shots, 77, 2, &records);
    std::map<unsigned, double> counts;
    for (const auto &r : records) {
        unsigned key = 0;
        for (int k = 0; k < n; k++) {
            key |= unsigned(r.readouts[k]) << k;
        }
        counts[key] += 1;
    }
    double chi2 = 0;
    for (unsigned key = 0; key < 16; key++) {
        std::vector<std::uint8_t> seq(n);
        for (int k = 0; k < n; k++) {
            seq[k] = (key >> k) & 1;
        }
        // Probability of the readout string: norm of the unprojected state.
        const KrausSchedule sched(m, n);
        Vec<2> v = initial_state(m.theta);
        for (int k = 1; k <= n; k++) {
            v = sched.op(k, seq[k - 1]) * v;
        }
        const double p = std::norm(v[0]) + std::norm(v[1]);
        const double expected = p * shots;
        chi2 += (counts[key] - expected) * (counts[key] - expected) / expected;
    }
    const boost::math::chi_squared dist(15);
    EXPECT_LT(chi2, boost::math::quantile(dist, 0.999));
}

TEST(Trajectories, LogFormat) {
    const Measurement m{1, 0, 1, Direction::Forward};
    std::vector<TrajectoryRecord> records;
    estimate_signal(m, 3, 5, 1, 1, &records);
    std::ostringstream out;
    write_trajectory_log(out, records);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "shot,readouts,re_amp,im_amp,accepted");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto f = split_csv_line(line);
        ASSERT_EQ(f.size(), 5u);
        EXPECT_EQ(f[0], std::to_string(rows));
        EXPECT_EQ(f[1].size(), 3u);
        EXPECT_EQ(parse_real(f[2]), records[rows].amplitude.real());
        rows++;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Trajectories, UnitaryLimitNeverJumps) {
    const Measurement m{0, 1.3, 2.0, Direction::Backward};
    const int n = 25;
    CounterRng rng(4, 0);
    const KrausSchedule sched(m, n);
    for (int s = 0; s < 100; s++) {
        const TrajectoryRecord t = sample_trajectory(sched, rng);
        for (auto r : t.readouts) {
            ASSERT_EQ(r, 0);
        }
        EXPECT_NEAR(t.pre_postselection_norm2, 1.0, 1e-13);
    }
    // Acceptance probability |⟨ψ0|U|ψ0⟩|², within 4 binomial sigma.
    const double p = std::abs(transfer_signal(m, n).z);
    const std::uint64_t shots = 20000;
    const McEstimate e = estimate_signal(m, n, shots, 8, 2);
    EXPECT_LE(std::abs(e.accept_rate - p), 4 * std::sqrt(p * (1 - p) / shots));
}
