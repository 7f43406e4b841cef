// Acceptance battery: one line per criterion, nonzero exit on any failure.
#include <cstdio>
#include <cstring>

#include "fseries/verify.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 1;
    for (int i = 1; i < argc; ++i)
        if (std::strncmp(argv[i], "--seed=", 7) == 0) seed = std::strtoull(argv[i] + 7, nullptr, 10);

    auto results = fseries::verify::run_acceptance(seed);
    int failures = 0;
    for (size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::printf("[%s] criterion %2zu %-12s measured=%.6g tolerance=%.6g  %s%s%s\n",
                    r.passed ? "PASS" : "FAIL", i + 1, r.id.c_str(), r.measured, r.tolerance,
                    r.anchor.c_str(), r.details.empty() ? "" : " | ", r.details.c_str());
        if (!r.passed) ++failures;
    }
    std::printf("%d/%zu acceptance criteria passed\n", (int)results.size() - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
