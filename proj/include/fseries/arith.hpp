#pragma once

#include <memory>
#include <vector>

#include "fseries/rational.hpp"

namespace fseries::arith {

/// Table of sigma_{k-1}(n) for 1 <= n <= limit, built by a divisor-accumulation
/// sieve (O(N log N) additions). Immutable after construction.
struct DivisorTable {
    int weight_exponent;          // the k-1 in sigma_{k-1}
    long limit;                   // N
    std::vector<Int> values;      // values[n-1] = sigma_{k-1}(n)

    const Int& sigma(long n) const { return values.at(static_cast<size_t>(n - 1)); }
};

DivisorTable build_divisor_table(int weight_exponent, long limit);

/// sigma_{k-1}(n) for a single n (trial-division factorization), usable above
/// any table limit.
Int sigma_single(int weight_exponent, const Int& n);

/// Exact Bernoulli number B_k for even k >= 0 (standard binomial recurrence).
BigRat bernoulli(int k);

/// zeta(s) for real s > 1 by Euler-Maclaurin with a certified remainder:
/// the returned error bound is the magnitude of the first omitted correction
/// term, which dominates the true remainder for this completely monotone tail.
struct ZetaValue {
    double value;
    double error_bound;
};
ZetaValue zeta_em(double s, double eps = 1e-15);

/// Exact-formula zeta(2m) = (-1)^{m+1} B_{2m} (2 pi)^{2m} / (2 (2m)!).
double zeta_even(int k);

/// zeta(2) * zeta(k+1) for even k >= 2, >= 14 correct digits.
double zeta_product_constant(int k);

/// zeta'(2) to ~1e-13 (Euler-Maclaurin).
double zeta_prime_2();

/// Shared per-weight sigma tables for the series evaluators. Grows on demand;
/// safe for concurrent readers once returned.
std::shared_ptr<const DivisorTable> shared_sigma_table(int weight_exponent, long min_limit);

}  // namespace fseries::arith
