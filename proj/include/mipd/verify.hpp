#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mipd/replica.hpp"

namespace mipd {

struct CheckResult {
    std::string name;
    double deviation = 0.0;  // worst observed
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20200714;
    std::size_t samples = 100;
    /// Asymptotic signal used by the symmetry and coherence checks.
    SignalFn signal = asymptotic_z;
};

/// Runs the invariant suite: oracle equivalence, probability conservation,
/// Kraus completeness, symmetries, the coherence bound, discretization
/// convergence and winding integrality.
std::vector<CheckResult> run_invariant_suite(const VerifyOptions &opts);

/// One line per check; returns true iff all passed.
bool print_report(std::ostream &out, const std::vector<CheckResult> &results);

}  // namespace mipd
