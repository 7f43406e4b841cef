#include <cmath>
#include <complex>

#include "doctest.h"
#include "fseries/quadrature.hpp"

using namespace fseries::quad;

TEST_CASE("polynomial and trig integrals") {
    auto r = integrate([](double t) { return t * t; }, 0.0, 1.0, 1e-12, 10000);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-13);

    auto s = integrate([](double t) { return std::sin(t); }, 0.0, M_PI, 1e-12, 10000);
    CHECK(std::abs(s.value - 2.0) < 1e-12);

    auto o = integrate([](double t) { return std::sin(50.0 * t); }, 0.0, 1.0, 1e-11, 100000);
    double expect = (1.0 - std::cos(50.0)) / 50.0;
    CHECK(o.converged);
    CHECK(std::abs(o.value - expect) < 1e-10);
}

TEST_CASE("presplit hides aligned jumps") {
    auto f = [](double t) { return t < 0.5 ? 1.0 : 3.0; };
    auto r = integrate(f, 0.0, 1.0, 1e-13, 5000, {0.5});
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) < 1e-13);
}

TEST_CASE("budget exhaustion is reported") {
    auto nasty = [](double t) { return std::sin(1e4 * t * t); };
    auto r = integrate(nasty, 0.0, 1.0, 1e-14, 120);
    CHECK(!r.converged);
    CHECK(r.err_est > 1e-14);
}

TEST_CASE("complex line integral of exp") {
    std::complex<double> z0(0.2, 1.0), z1(-0.4, 2.5);
    auto r = integrate_line([](std::complex<double> z) { return std::exp(z); }, z0, z1, 1e-12,
                            20000);
    CHECK(r.converged);
    CHECK(std::abs(r.value - (std::exp(z1) - std::exp(z0))) < 1e-11);
}

TEST_CASE("cusp integrator: algebraic singularity with exact value") {
    auto f = [](double t) { return std::complex<double>(std::pow(t, 1.5), 0.0); };
    auto amp = [](double d) { return std::pow(d, 1.5); };
    auto r = integrate_cusp(f, 0.0, 1.0, amp, 1e-10, 100000);
    CHECK(r.converged);
    CHECK(std::abs(r.value.real() - 0.4) < 1e-9);
}

TEST_CASE("cusp integrator: oscillatory endpoint vs composite-Simpson oracle") {
    // f(t) = t^2 cos(1/t) on (0, 0.8]: the t^2 damping makes the head negligible.
    auto f = [](double t) { return std::complex<double>(t * t * std::cos(1.0 / t), 0.0); };
    auto amp = [](double d) { return d * d; };
    auto r = integrate_cusp(f, 0.0, 0.8, amp, 1e-9, 400000);
    CHECK(r.converged);

    const double e0 = 1e-4;
    const long n = 4'000'000;
    const double hstep = (0.8 - e0) / (2 * n);
    auto g = [](double t) { return t * t * std::cos(1.0 / t); };
    double s_odd = 0, s_even = 0;
    for (long i = 1; i < 2 * n; i += 2) s_odd += g(e0 + i * hstep);
    for (long i = 2; i < 2 * n; i += 2) s_even += g(e0 + i * hstep);
    double simpson = (g(e0) + g(0.8) + 4 * s_odd + 2 * s_even) * hstep / 3.0;
    CHECK(std::abs(r.value.real() - simpson) < 1e-7 + e0 * e0 * e0 / 3.0);
}
