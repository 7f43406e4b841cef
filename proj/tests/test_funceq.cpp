#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "fseries/analytic.hpp"
#include "fseries/arith.hpp"
#include "fseries/funceq.hpp"
#include "fseries/quadrature.hpp"

using namespace fseries;
using namespace fseries::funceq;
using analytic::eval_phi2_derivative;
using analytic::eval_eisenstein;

namespace {

const Complex I(0.0, 1.0);
const double PI3 = M_PI * M_PI * M_PI;

// Independent oracle for f_gamma: the defining combination assembled here
// from the public q-series evaluators.
Complex f_probe(const SL2Matrix& g, Complex z) {
    double c = g.c.get_d(), d = g.d.get_d();
    Complex gz = (Complex(g.a.get_d()) * z + Complex(g.b.get_d())) /
                 (Complex(c) * z + Complex(d));
    Complex czd = Complex(c) * z + Complex(d);
    return eval_phi2_derivative(z, 2, 1e-12).value - eval_phi2_derivative(gz, 2, 1e-12).value +
           I * PI3 / (3.0 * c * czd) + 2.0 * M_PI * M_PI * std::log(czd) + I * PI3 / 3.0 * z;
}

}  // namespace

TEST_CASE("E2 quasi-modularity") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.25, 1.5);
    std::uniform_int_distribution<long> cd(-5, 5);
    int done = 0;
    while (done < 10) {
        long c = cd(rng), d = cd(rng);
        if (c == 0) continue;
        Int g;
        mpz_gcd(g.get_mpz_t(), Int(c).get_mpz_t(), Int(d).get_mpz_t());
        if (g != 1) continue;
        SL2Matrix gamma = bezout_gamma(Int(c), Int(d));
        Complex z(re(rng), im(rng));
        Complex czd = Complex((double)c) * z + Complex((double)d);
        Complex gz = (Complex(gamma.a.get_d()) * z + Complex(gamma.b.get_d())) / czd;
        auto lhs = eval_eisenstein(z, 2, 1e-12);
        auto rhs = eval_eisenstein(gz, 2, 1e-12);
        Complex expect = rhs.value / (czd * czd) - 6.0 / (I * M_PI) * (double)c / czd;
        CHECK(std::abs(lhs.value - expect) < 1e-9);
        ++done;
    }
}

TEST_CASE("phi2'' transformation identity (tau, alpha in H)") {
    std::mt19937_64 rng(7171);
    std::uniform_real_distribution<double> re(-0.4, 0.4), im(0.4, 1.4);
    std::uniform_int_distribution<long> cd(-4, 4);
    int done = 0;
    while (done < 5) {
        long c = cd(rng), d = cd(rng);
        if (c == 0) continue;
        Int g;
        mpz_gcd(g.get_mpz_t(), Int(c).get_mpz_t(), Int(d).get_mpz_t());
        if (g != 1) continue;
        SL2Matrix gamma = bezout_gamma(Int(c), Int(d));
        Complex tau(re(rng), im(rng)), alpha(re(rng), im(rng));
        auto ph = [&](Complex z) { return eval_phi2_derivative(z, 2, 1e-12).value; };
        auto moeb = [&](Complex z) {
            return (Complex(gamma.a.get_d()) * z + Complex(gamma.b.get_d())) /
                   (Complex((double)c) * z + Complex((double)d));
        };
        Complex ctd = Complex((double)c) * tau + Complex((double)d);
        Complex cad = Complex((double)c) * alpha + Complex((double)d);
        Complex rhs = ph(moeb(tau)) - ph(moeb(alpha)) - I * PI3 / (3.0 * c * ctd) +
                      I * PI3 / (3.0 * c * cad) - 2.0 * M_PI * M_PI * std::log(ctd) +
                      2.0 * M_PI * M_PI * std::log(cad) + ph(alpha) - I * PI3 / 3.0 * tau +
                      I * PI3 / 3.0 * alpha;
        CHECK(std::abs(ph(tau) - rhs) < 1e-9);
        ++done;
    }
}

TEST_CASE("f_gamma: fixed-point value, probe and lift independence") {
    // At z = i the gamma = S terms cancel and the combination collapses to
    // pi^3/3 + 2 pi^2 Log(i) + i pi^3 i/3 = i pi^3 exactly.
    auto fS = compute_f_gamma(Int(1), Int(0), 1e-10);
    CHECK(std::abs(fS.f_gamma - I * PI3) < 1e-9);

    // probe independence for (c,d) = (2,1)
    SL2Matrix g21 = bezout_gamma(Int(2), Int(1));
    Complex f_i = f_probe(g21, {0.0, 1.0});
    Complex f_2i = f_probe(g21, {0.0, 2.0});
    Complex f_m = f_probe(g21, {0.3, 0.8});
    CHECK(std::abs(f_i - f_2i) < 2e-10);
    CHECK(std::abs(f_i - f_m) < 2e-10);

    // Bezout-lift independence for (c,d) = (3,1)
    SL2Matrix l1 = bezout_gamma(Int(3), Int(1));
    SL2Matrix l2{l1.a + l1.c, l1.b + l1.d, l1.c, l1.d};
    CHECK(l2.a * l2.d - l2.b * l2.c == 1);
    CHECK(std::abs(f_probe(l1, {0.0, 1.0}) - f_probe(l2, {0.0, 1.0})) < 2e-10);

    CHECK(std::abs(compute_f_gamma(Int(2), Int(1), 1e-10).f_gamma - f_i) < 1e-9);
    CHECK_THROWS_AS(compute_f_gamma(Int(0), Int(1), 1e-10), std::domain_error);
    CHECK_THROWS_AS(compute_f_gamma(Int(2), Int(4), 1e-10), std::domain_error);
}

TEST_CASE("cusp polynomial coefficients") {
    auto cp = cusp_polynomial(Int(1), Int(0), 1e-9);
    CHECK(std::abs(cp.A - (-I * PI3 / 18.0)) < 1e-12);
    // B = f_S/2 + 3 pi^2/2 with f_S = i pi^3
    CHECK(std::abs(cp.B - (I * PI3 / 2.0 + 1.5 * M_PI * M_PI)) < 1e-9);
    // Closed form for the linear coefficient at the cusp 0, via zeta'(2):
    // C = -pi^4/6 + i (pi^3/3 + 2 pi (zeta'(2) - zeta(2) log 2pi)).
    Complex c_expect(-std::pow(M_PI, 4) / 6.0,
                     PI3 / 3.0 + 2.0 * M_PI *
                         (arith::zeta_prime_2() -
                          arith::zeta_even(2) * std::log(2.0 * M_PI)));
    CHECK(std::abs(cp.C - c_expect) < 1e-7);
    CHECK(std::abs(cp.D - Complex(arith::zeta_product_constant(2), 0.0)) < 1e-9);

    // A depends only on c; C depends on the cusp mod 1, shared by (2,1), (2,-1)
    auto a1 = cusp_polynomial(Int(2), Int(1), 1e-9);
    auto a2 = cusp_polynomial(Int(2), Int(-1), 1e-9);
    CHECK(std::abs(a1.A - (-I * PI3 / 144.0)) < 1e-12);
    CHECK(std::abs(a1.A - a2.A) < 1e-14);
    CHECK(std::abs(a1.C - a2.C) < 1e-7);
    CHECK(std::abs(a1.D - a2.D) < 1e-10);
}

TEST_CASE("local expansion at rationals") {
    // At the cusp 0 the one-sided slopes sit symmetrically at -/+ pi^4/6.
    auto e0 = local_expansion(Int(0), Int(1), 1e-8);
    CHECK(e0.g2_right_slope == doctest::Approx(-std::pow(M_PI, 4) / 6.0).epsilon(1e-6));
    CHECK(e0.g2_left_slope == doctest::Approx(std::pow(M_PI, 4) / 6.0).epsilon(1e-6));
    for (auto [p, q] : {std::pair{1L, 2L}, {1L, 3L}, {2L, 5L}}) {
        auto ex = local_expansion(Int(p), Int(q), 1e-8);
        CHECK(ex.jump == doctest::Approx(std::pow(M_PI, 4) / (3.0 * q * q)).epsilon(1e-12));
        CHECK(ex.f2_log_coefficient ==
              doctest::Approx(PI3 / (3.0 * q * q)).epsilon(1e-12));
        CHECK(ex.g2_left_slope - ex.g2_right_slope == doctest::Approx(ex.jump));
    }
    CHECK_THROWS_AS(local_expansion(Int(2), Int(4), 1e-8), std::domain_error);
}

TEST_CASE("one-sided G2 slopes vs finite-difference oracle at 1/2") {
    auto ex = local_expansion(Int(1), Int(2), 1e-8);
    // model fit DQ(h) = s + c1 h log(1/h) + c2 h over h = 2^-8..2^-24
    auto fit_slope = [&](int sign) {
        std::vector<double> hs, dq;
        BigRat x(1, 2);
        for (int j = 8; j <= 24; j += 2) {
            BigRat h(sign, 1L << j);
            auto d = analytic::phi_diff_quotient(x, h, 2, 1e-5);
            hs.push_back(std::ldexp(1.0, -j));
            dq.push_back(d.dG);
        }
        // least squares on [1, h log(1/h), h]
        double A[3][3] = {}, b[3] = {};
        for (size_t i = 0; i < hs.size(); ++i) {
            double r[3] = {1.0, hs[i] * std::log(1.0 / hs[i]), hs[i]};
            for (int a = 0; a < 3; ++a) {
                b[a] += r[a] * dq[i];
                for (int c = 0; c < 3; ++c) A[a][c] += r[a] * r[c];
            }
        }
        // solve 3x3
        for (int c = 0; c < 3; ++c) {
            int piv = c;
            for (int rr = c + 1; rr < 3; ++rr)
                if (std::abs(A[rr][c]) > std::abs(A[piv][c])) piv = rr;
            std::swap(A[c], A[piv]);
            std::swap(b[c], b[piv]);
            for (int rr = c + 1; rr < 3; ++rr) {
                double f = A[rr][c] / A[c][c];
                for (int cc = c; cc < 3; ++cc) A[rr][cc] -= f * A[c][cc];
                b[rr] -= f * b[c];
            }
        }
        double sol[3];
        for (int rr = 2; rr >= 0; --rr) {
            double acc = b[rr];
            for (int cc = rr + 1; cc < 3; ++cc) acc -= A[rr][cc] * sol[cc];
            sol[rr] = acc / A[rr][rr];
        }
        return sol[0];
    };
    double right = fit_slope(+1);
    double left = -fit_slope(-1);  // dG with h<0 estimates -(left derivative)... sign below
    // phi_diff_quotient returns (G(x+h)-G(x))/h, so h<0 estimates the left slope directly.
    left = fit_slope(-1);
    CHECK(std::abs(right - ex.g2_right_slope) < 0.01 * std::abs(ex.jump) + 0.02);
    CHECK(std::abs(left - ex.g2_left_slope) < 0.01 * std::abs(ex.jump) + 0.02);
}

TEST_CASE("one-step functional equation at x = 0.37 pins P and Q") {
    BigRat x(37, 100);
    auto lhs = analytic::eval_series(x, 2, 1e-10);
    BigRat Tx = (BigRat(1, 1) / x).frac();
    auto rhs_phi = analytic::eval_series(Tx, 2, 1e-10);
    const auto& poly = step_polynomials();
    double xd = x.to_double();
    double x4 = xd * xd * xd * xd;
    auto integrand = [&](double t) -> Complex {
        double inv = 1.0 / t;
        return t * t * (xd - 2.0 * t) * analytic::phi_k_real(inv - std::floor(inv), 2, 3e-7);
    };
    auto amp = [&](double d) { return 1.98 * d * d * (xd + 2 * d); };
    auto integral = quad::integrate_cusp(integrand, 0.0, xd, amp, 1e-8, 400000);
    REQUIRE(integral.converged);

    double F_rhs = -x4 * rhs_phi.F.value - PI3 / 3.0 * xd * std::log(xd) +
                   (poly.p3 * xd * xd * xd + poly.p2 * xd * xd) - 6.0 * integral.value.imag();
    double G_rhs = x4 * rhs_phi.G.value - M_PI * M_PI * xd * xd * std::log(xd) +
                   (poly.q2 * xd * xd + poly.q0) + 6.0 * integral.value.real();
    CHECK(std::abs(lhs.F.value - F_rhs) < 2e-7);
    CHECK(std::abs(lhs.G.value - G_rhs) < 2e-7);
}

TEST_CASE("real-line transformation residuals (Prop 2.2 shape)") {
    SL2Matrix S{Int(0), Int(-1), Int(1), Int(0)};
    auto r1 = phi2_transform_check(BigRat(3, 10), S, 1e-7);
    CHECK(r1.residual < 1e-7);
    CHECK(r1.residual <= r1.certificate);

    SL2Matrix g21 = bezout_gamma(Int(2), Int(1));
    auto r2 = phi2_transform_check(BigRat(51, 100), g21, 1e-7);
    CHECK(r2.residual < 1e-7);

    // degenerate guard: x within 1e-9 of the cusp
    BigRat near_cusp = BigRat(-1, 2) + BigRat(1, Int("10000000000"));
    CHECK_THROWS_AS(phi2_transform_check(near_cusp, g21, 1e-7), std::domain_error);
}

TEST_CASE("iterated CF evaluator matches the direct series") {
    auto direct = analytic::eval_series(BigRat(2, 5), 2, 1e-10);
    cf::RealSpec spec = cf::parse_real("rational:2/5");
    auto via_cf = eval_F2G2_cf(spec, 1e-8);
    CHECK(std::abs(via_cf.F.value - direct.F.value) < 1e-8);
    CHECK(std::abs(via_cf.G.value - direct.G.value) < 1e-8);
    CHECK(std::abs(via_cf.F.value - direct.F.value) <=
          via_cf.F.error_bound + direct.F.error_bound);

    cf::RealSpec golden = cf::parse_real(
        "cf:[1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,"
        "1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1]");
    auto direct_g = analytic::eval_series(golden.value, 2, 1e-10);
    auto cf_g = eval_F2G2_cf(golden, 1e-8);
    CHECK(std::abs(cf_g.F.value - direct_g.F.value) < 1e-8);
    CHECK(std::abs(cf_g.G.value - direct_g.G.value) < 1e-8);
    CHECK(cf_g.depth_used < 20);  // beta^4 cuts off quickly
}

TEST_CASE("derivative series at quadratic irrational surrogates") {
    cf::RealSpec golden = cf::parse_real(
        "cf:[1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,"
        "1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1]");
    auto ds = derivative_series(golden, 40, 1e-5);
    CHECK(!ds.f2_divergent);
    BigRat h(1, 1000000);
    auto up = analytic::phi_diff_quotient(golden.value, h, 2, 1e-4);
    auto dn = analytic::phi_diff_quotient(golden.value, -h, 2, 1e-4);
    double sym_F = 0.5 * (up.dF + dn.dF);
    double sym_G = 0.5 * (up.dG + dn.dG);
    CHECK(std::abs(ds.f2_prime.value - sym_F) < 1e-2);
    CHECK(std::abs(ds.g2_prime.value - sym_G) < 1e-2);

    std::string twos = "cf:[2";
    for (int i = 1; i < 60; ++i) twos += ",2";
    twos += "]";
    cf::RealSpec sqrt2 = cf::parse_real(twos);
    auto ds2 = derivative_series(sqrt2, 40, 1e-5);
    auto up2 = analytic::phi_diff_quotient(sqrt2.value, h, 2, 1e-4);
    auto dn2 = analytic::phi_diff_quotient(sqrt2.value, -h, 2, 1e-4);
    CHECK(std::abs(ds2.g2_prime.value - 0.5 * (up2.dG + dn2.dG)) < 1e-2);
    CHECK(std::abs(ds2.f2_prime.value - 0.5 * (up2.dF + dn2.dF)) < 1e-2);
}

TEST_CASE("weight-k transformation law") {
    Complex tau(0.3, 1.0), alpha(0.0, 1.0);
    for (int k : {4, 6}) {
        auto deg = verify_funceq_k(k, alpha, alpha, 1e-8);
        CHECK(deg.residual < 1e-8);
        auto r = verify_funceq_k(k, tau, alpha, 1e-7);
        CHECK(r.residual < 1e-6);
        auto r2 = verify_funceq_k(k, tau, Complex(0.0, 2.0), 1e-7);
        CHECK(r2.residual < 1e-6);
    }
    CHECK_THROWS_AS(verify_funceq_k(2, tau, alpha, 1e-7), std::domain_error);
    CHECK_THROWS_AS(verify_funceq_k(5, tau, alpha, 1e-7), std::domain_error);
}
