#pragma once

// The invariant suite behind the `selfcheck` command: cohomology dimension,
// harmonic decomposition, wide-open and auxiliary pairing identities, the cup
// product, the monodromy operator, the splitting Psi, subdivision invariance
// and, when divisors are given, branch linearity of the local height.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "padicheights/semistable.hpp"

namespace padicheights::selfcheck {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Options {
    std::uint64_t seed = 1;
    /// Values are compared to precision minus slack digits.
    int slack = 5;
    /// Random samples per randomized check.
    int trials = 10;
};

struct HeightInput {
    semistable::Divisor y;
    semistable::Divisor z;
    semistable::HeightData data;
};

std::vector<CheckResult> run(const semistable::CurveModel& x, const std::optional<HeightInput>& height,
                             const Options& options);

}  // namespace padicheights::selfcheck
