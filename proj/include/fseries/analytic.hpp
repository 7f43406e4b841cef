#pragma once

#include <complex>

#include "fseries/rational.hpp"

namespace fseries::analytic {

/// Numeric value paired with a certified absolute truncation/evaluation bound.
struct SeriesValue {
    double value = 0.0;
    double error_bound = 0.0;
    long terms_used = 0;
};

struct ComplexSeriesValue {
    std::complex<double> value{0.0, 0.0};
    double error_bound = 0.0;
    long terms_used = 0;
};

struct PhiPair {
    SeriesValue F, G;
};

enum class Method { naive, hyperbola };

/// F_k and G_k at x (reduced mod 1), both with error_bound <= eps.
///  - naive: direct sigma_{k-1}(n)/n^{k+1} summation, tail certified through
///    sigma_{k-1}(n) <= n^{k-1}(1 + ln n).
///  - hyperbola: divisor-swap rearrangement G_k = pi^2 sum_e B2({ex})/e^{k+1},
///    F_k = sum_e Cl2(2 pi {ex})/e^{k+1}, tail O(E^-k).
PhiPair eval_series(const BigRat& x, int k, double eps, Method method = Method::hyperbola);

/// phi_k(x) = G_k(x) + i F_k(x) on the real line (hyperbola method).
std::complex<double> phi_k_real(const BigRat& x, int k, double eps);
std::complex<double> phi_k_real(double x, int k, double eps);

/// E_k(z) by q-expansion, geometric tail certificate via sigma_{k-1}(n) <= n^k.
ComplexSeriesValue eval_eisenstein(std::complex<double> z, int k, double eps);

/// j-th derivative of phi_k(z) = sum sigma_{k-1}(n) n^{-(k+1)} e^{2 pi i n z}
/// on the upper half plane, 0 <= j <= k+1.
ComplexSeriesValue eval_phi_k_derivative(std::complex<double> z, int k, int order, double eps);

/// Convenience for the weight-2 stack: order in 0..3.
ComplexSeriesValue eval_phi2_derivative(std::complex<double> z, int order, double eps);

/// L_k(x) = 2 pi^2 sum_r ((rx))/r^k with ((y)) = {y} - 1/2.
SeriesValue eval_Lk(const BigRat& x, int k, double eps);

/// Integrand helper: the R-term truncation of L_k at a double argument.
double lk_truncated(double t, int k, long R);

/// G_k(x) = int_0^x L_k + zeta(2) zeta(k+1) by adaptive quadrature of the
/// truncated L_k; combined quadrature+truncation bound. Throws
/// quad::BudgetExhausted when the budget cannot reach eps.
SeriesValue gk_via_integral(const BigRat& x, int k, double eps, long quad_budget = 2'000'000);

/// Simultaneous difference quotients [F_k(x+h)-F_k(x)]/h and the same for
/// G_k, evaluated term-by-term so the result stays accurate when |h| is far
/// below the spacing of doubles (orbits of Liouville-type numbers need
/// |h| ~ 2^{-10^5}).  err_est: certified for the G part; for the F part it
/// adds a log-weighted tail estimate.
struct DiffQuotient {
    double dF = 0.0, dG = 0.0;
    double err_est = 0.0;
    long terms_used = 0;
};
DiffQuotient phi_diff_quotient(const BigRat& x, const BigRat& h, int k, double eps,
                               long min_terms = 0);

}  // namespace fseries::analytic
