#pragma once

#include <complex>
#include <vector>

#include "fseries/analytic.hpp"
#include "fseries/contfrac.hpp"

namespace fseries::funceq {

using Complex = std::complex<double>;

/// Integer matrix (a b; c d) with det = 1.
struct SL2Matrix {
    Int a, b, c, d;
};

/// Some (a,b) completing (c,d) to det 1 via the extended Euclid algorithm.
SL2Matrix bezout_gamma(const Int& c, const Int& d);

/// f_gamma evaluated from its defining combination
///   phi2''(z) - phi2''(g z) + i pi^3/(3c(cz+d)) + 2 pi^2 Log(cz+d) + i pi^3 z/3
/// at a probe point; constant on H and dependent only on (c,d), which the
/// computation checks by comparing two probes.
struct GammaConstants {
    Int c, d;
    Complex f_gamma;
    Complex g_gamma_at_cusp;
    double error_bound;
};
GammaConstants compute_f_gamma(const Int& c, const Int& d, double eps);

/// P_{-d/c}(x) = A(cx+d)^3 + B(cx+d)^2 + C(cx+d) + D.
struct CuspPolynomial {
    Int c, d;
    Complex A, B, C, D;
    double error_bound;
};
CuspPolynomial cusp_polynomial(const Int& c, const Int& d, double eps);

/// One-sided behaviour of G2 and the F2 log coefficient at p/q.
struct LocalExpansion {
    Int p, q;
    double g2_right_slope;
    double g2_left_slope;
    double jump;                // pi^4/(3 q^2)
    double f2_log_coefficient;  // pi^3/(3 q^2)
    double error_bound;
};
LocalExpansion local_expansion(const Int& p, const Int& q, double eps);

struct Residual {
    double residual;
    double certificate;
};

/// Both sides of the real-line transformation law for phi2 under gamma,
/// integral term by adaptive quadrature with dyadic refinement toward the
/// cusp -d/c. Contract: residual <= certificate.
Residual phi2_transform_check(const BigRat& x, const SL2Matrix& gamma, double eps,
                              long quad_budget = 200'000);

/// Real cubic P and quadratic Q driving the one-step functional equations
///   F2(x) = -x^4 F2(Tx) - (pi^3/3) x log x + P(x) - 6 I[F2],
///   G2(x) =  x^4 G2(Tx) - pi^2 x^2 log x + Q(x) + 6 I[G2],
/// with coefficients built from the numerically computed f_gamma at (1,0).
struct StepPolynomials {
    double p3, p2, p1;  // P(y) = p3 y^3 + p2 y^2 + p1 y
    double q2, q1, q0;  // Q(y) = q2 y^2 + q1 y + q0
    double error_bound;
};
const StepPolynomials& step_polynomials();

/// Per-depth pieces of the iterated functional equation.
struct IterationTerms {
    std::vector<double> u1, u2, u3;  // F-side terms
    std::vector<double> v1, v2, v3;  // G-side terms
    std::vector<double> integral_F;  // I_k = int_0^{T^k} t^2 (T^k - 2t) F2(T(t)) dt
    std::vector<double> integral_G;
    std::vector<double> A, B, C;     // difference-quotient auxiliaries
};

struct CfEval {
    analytic::SeriesValue F, G;
    IterationTerms terms;
    int depth_used = 0;
};

/// F2 and G2 through the iterated continued-fraction functional equation.
CfEval eval_F2G2_cf(const cf::RealSpec& x, double eps, int max_depth = 64,
                    long quad_budget = 200'000);

/// Partial sums of the derivative series at an irrational surrogate.
struct DerivativeSeries {
    analytic::SeriesValue f2_prime;
    analytic::SeriesValue g2_prime;
    bool f2_divergent = false;
    std::vector<double> gamma_partial_sums;  // sum beta_{k-1} gamma_k, the square-Brjuno monitor
    int depth_used = 0;
};
DerivativeSeries derivative_series(const cf::RealSpec& x, int depth, double eps);

/// Weight-k transformation law (k >= 4 even) at tau with base point alpha,
/// both in H; straight-line integration path.
Residual verify_funceq_k(int k, Complex tau, Complex alpha, double eps,
                         long quad_budget = 200'000);

}  // namespace fseries::funceq
