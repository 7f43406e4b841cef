#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fseries::verify {

struct CheckResult {
    std::string id;        // stable slug, e.g. "acc1-oracle-equivalence"
    std::string anchor;    // what the check witnesses
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string details;
};

struct Options {
    std::uint64_t seed = 1;
    std::string only;          // empty, or module filter: arith|contfrac|analytic|funceq|brjuno
    std::string inject_fault;  // test hook, e.g. "bernoulli"
    bool acceptance_only = false;
};

/// Runs the invariant batteries plus the acceptance criteria; the returned
/// list is deterministic for a fixed seed.
std::vector<CheckResult> run_all(const Options& opts);

/// The twelve acceptance criteria alone, in order.
std::vector<CheckResult> run_acceptance(std::uint64_t seed);

}  // namespace fseries::verify
