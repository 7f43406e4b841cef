#include "fseries/clausen.hpp"

#include <cmath>
#include <vector>

#include "fseries/arith.hpp"

namespace fseries::clausen {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr int kTerms = 40;

// d_m = zeta(2m)/(m(2m+1)): Cl2(theta) = theta(1 - log theta + S(w)) with
// S(w) = sum_m d_m w^m, w = (theta/2pi)^2, valid on (0, 2pi); used for
// w <= ~0.42 where forty terms reach ~1e-16.
const std::vector<double>& coeffs() {
    static const std::vector<double> d = [] {
        std::vector<double> v(kTerms + 1, 0.0);
        for (int m = 1; m <= kTerms; ++m)
            v[static_cast<size_t>(m)] = arith::zeta_even(2 * m) / (m * (2.0 * m + 1.0));
        return v;
    }();
    return d;
}

double series_S(double w) {
    const auto& d = coeffs();
    double acc = 0.0, wp = 1.0;
    for (int m = 1; m <= kTerms; ++m) {
        wp *= w;
        double term = d[static_cast<size_t>(m)] * wp;
        acc += term;
        if (term < 1e-18) break;  // terms decrease monotonically (w < 0.45)
    }
    return acc;
}

/// (S(wy) - S(wx)) / (wy - wx), stable as wy -> wx.
double series_S_slope(double wx, double wy) {
    const auto& d = coeffs();
    // P_m = (wy^m - wx^m)/(wy - wx): P_1 = 1, P_m = wy P_{m-1} + wx^{m-1}.
    double acc = d[1], P = 1.0, xpow = 1.0;
    for (int m = 2; m <= kTerms; ++m) {
        xpow *= wx;
        P = wy * P + xpow;
        acc += d[static_cast<size_t>(m)] * P;
    }
    return acc;
}

double cl2_series(double theta) {
    if (theta <= 0.0) return 0.0;
    return theta * cl2_over_theta(theta, std::log(theta));
}

/// Chart slope [ser(t+dt) - ser(t)]/dt with ser(t) = t(1 - log t + S).
/// log_t = log(t) and u = dt/t arrive resolved (possibly from exact data).
double chart_slope(double t, double dt, double log_t, double u) {
    double ty = t + dt;
    double wx = (t / kTwoPi) * (t / kTwoPi);
    double wy = (ty / kTwoPi) * (ty / kTwoPi);
    double log1p_over_u = (std::abs(u) < 1e-8) ? (1.0 - 0.5 * u) : std::log1p(u) / u;
    double dlog_part = log_t + (1.0 + u) * log1p_over_u;  // d[t log t]/dt
    double s_part = series_S(wx) + ty * (ty + t) / (kTwoPi * kTwoPi) * series_S_slope(wx, wy);
    return 1.0 - dlog_part + s_part;
}

}  // namespace

double cl2_over_theta(double theta, double log_theta) {
    double w = (theta / kTwoPi) * (theta / kTwoPi);
    return 1.0 - log_theta + series_S(w);
}

double cl2_frac(double f) {
    if (f <= 0.0 || f >= 1.0) return 0.0;
    if (f <= 0.5) return cl2_series(kTwoPi * f);
    return -cl2_series(kTwoPi * (1.0 - f));
}

double cl2(double theta) {
    double f = theta / kTwoPi;
    f -= std::floor(f);
    return cl2_frac(f);
}

double cl2_frac_slope(double fx, double df, const BigRat* exact_fx, const BigRat* exact_fy) {
    if (std::abs(df) >= 1e-4) {
        // No cancellation risk worth the chart machinery.
        return (cl2_frac(fx + df) - cl2_frac(fx)) / (kTwoPi * df);
    }

    // Map to the chart where both points live: near 0 use g(f) = ser(2 pi f),
    // near 1 use g(f) = -ser(2 pi (1-f)) whose slope equals the chart slope
    // with base 1-fx and increment -df.
    bool chart0 = (fx + (fx + df) <= 1.0);
    double f0, dd;
    BigRat e0s, e1s;
    const BigRat *e0 = nullptr, *e1 = nullptr;
    if (chart0) {
        f0 = fx;
        dd = df;
        e0 = exact_fx;
        e1 = exact_fy;
    } else {
        dd = -df;
        if (exact_fx && exact_fy) {
            e0s = BigRat(1, 1) - *exact_fx;
            e1s = BigRat(1, 1) - *exact_fy;
            e0 = &e0s;
            e1 = &e1s;
            f0 = e0s.to_double();
        } else {
            f0 = 1.0 - fx;
        }
    }

    const double tiny = 1e-250;
    double t = kTwoPi * f0, dt = kTwoPi * dd;
    bool target_zero = (e1 && e1->is_zero()) || (!e1 && f0 + dd == 0.0);
    if (target_zero) {
        // slope = [0 - ser(t)]/dt
        double log_t = (f0 > tiny || !e0) ? std::log(t) : std::log(kTwoPi) + e0->log();
        return -t * cl2_over_theta(t, log_t) / dt;
    }
    if (f0 > tiny) {
        double log_t = std::log(t);
        double u;
        if (dd != 0.0) {
            u = dd / f0;
        } else if (e0 && e1) {
            u = ((*e1 - *e0) / *e0).to_double();
        } else {
            u = 0.0;
        }
        return chart_slope(t, dt, log_t, u);
    }
    // Base point indistinguishable from the chart endpoint: use exact data.
    if (e0 && e1) {
        if (e0->is_zero()) {
            // slope = ser(dt)/dt = 1 - log(dt) + S  (dd > 0 here: fracs >= 0)
            double log_dt = std::log(kTwoPi) + e1->log();
            return cl2_over_theta(dt, log_dt);
        }
        double log_t_exact = std::log(kTwoPi) + e0->log();
        double u = ((*e1 - *e0) / *e0).to_double();
        return chart_slope(t, dt, log_t_exact, u);
    }
    return 0.0;  // both below any representable scale and no exact data
}

}  // namespace fseries::clausen
