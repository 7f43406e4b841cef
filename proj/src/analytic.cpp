#include "fseries/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "fseries/arith.hpp"
#include "fseries/clausen.hpp"
#include "fseries/quadrature.hpp"

namespace fseries::analytic {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kMaxCl2 = 1.0149417;  // Cl2(pi/3), the sup of |Cl2|
constexpr double kMaxB2 = 1.0 / 6.0;
constexpr double kEpsFloor = 1e-13;

void require_even_weight(int k) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("weight k must be even and >= 2");
}

struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

double mpz_ratio_to_double(const Int& num, const Int& den) {
    if (num == 0) return 0.0;
    long en, ed;
    double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
    double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
    return std::ldexp(mn / md, static_cast<int>(en - ed));
}

/// Yields the exact fractional parts {e x}, e = 1, 2, ... for x in [0,1).
struct FracStepper {
    bool small = true;
    unsigned long ru = 0, pu = 0, qu = 1;
    Int rz, pz, qz;

    explicit FracStepper(const BigRat& xfrac) {
        if (xfrac.sign() < 0 || xfrac >= BigRat(1, 1))
            throw std::invalid_argument("FracStepper: x must be in [0,1)");
        if (mpz_fits_ulong_p(xfrac.den.get_mpz_t()) && xfrac.den.get_ui() < (1UL << 62)) {
            pu = xfrac.num.get_ui();
            qu = xfrac.den.get_ui();
        } else {
            small = false;
            pz = xfrac.num;
            qz = xfrac.den;
            rz = 0;
        }
    }

    /// Advance e by one; returns true when the fractional part wrapped past 1.
    bool step() {
        if (small) {
            ru += pu;
            if (ru >= qu) { ru -= qu; return true; }
            return false;
        }
        rz += pz;
        if (rz >= qz) { rz -= qz; return true; }
        return false;
    }

    double frac() const {
        if (small) return static_cast<double>(ru) / static_cast<double>(qu);
        return mpz_ratio_to_double(rz, qz);
    }
    BigRat frac_exact() const {
        if (small) return BigRat(Int(ru), Int(qu));
        return BigRat(rz, qz);
    }
    /// 1 - {e x}, exact.
    BigRat gap_exact() const {
        if (small) return BigRat(Int(qu - ru), Int(qu));
        return BigRat(qz - rz, qz);
    }
};

/// Cached sigma_{k-1}(n)/n^{k+1} coefficients for the naive method.
const std::vector<double>& naive_coeffs(int k, long n_terms) {
    static std::mutex mu;
    static std::map<int, std::vector<double>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& v = cache[k];
    if (static_cast<long>(v.size()) < n_terms) {
        auto table = arith::shared_sigma_table(k - 1, n_terms);
        v.resize(static_cast<size_t>(table->limit));
        for (long n = 1; n <= table->limit; ++n)
            v[static_cast<size_t>(n - 1)] =
                table->sigma(n).get_d() / std::pow(static_cast<double>(n), k + 1);
    }
    return v;
}

long naive_terms_for(double eps) {
    double hi = 16;
    while ((2.0 + std::log(hi)) / hi > eps) {
        hi *= 2;
        if (hi > 4e9) throw std::domain_error("eval_series(naive): eps too small for the harmonic tail bound");
    }
    double lo = hi / 2;
    while (hi - lo > 2) {
        double mid = 0.5 * (lo + hi);
        ((2.0 + std::log(mid)) / mid <= eps ? hi : lo) = mid;
    }
    return static_cast<long>(hi) + 1;
}

PhiPair eval_naive(const BigRat& xf, int k, double eps) {
    long N = naive_terms_for(eps * 0.5);
    const auto& coeff = naive_coeffs(k, N);
    // e^{2 pi i n x} by rotation; the drift enters the certificate.
    double x0 = xf.to_double();
    std::complex<double> w = std::exp(std::complex<double>(0.0, kTwoPi * x0));
    std::complex<double> z(1.0, 0.0);
    Kahan f, g;
    for (long n = 1; n <= N; ++n) {
        z *= w;
        f.add(coeff[static_cast<size_t>(n - 1)] * z.imag());
        g.add(coeff[static_cast<size_t>(n - 1)] * z.real());
    }
    double tail = (2.0 + std::log(static_cast<double>(N))) / static_cast<double>(N);
    double cert = tail + static_cast<double>(N) * 5e-16 + 1e-14;
    return {{f.sum, cert, N}, {g.sum, cert, N}};
}

long hyperbola_terms_for(int k, double eps) {
    double worst = std::max(kMaxCl2, M_PI * M_PI * kMaxB2);
    double E = std::pow(worst / (k * eps), 1.0 / k);
    if (E > 5e8) throw std::domain_error("eval_series(hyperbola): eps unreachable");
    return static_cast<long>(E) + 2;
}

double inv_pow_kp1(long e, int k) {
    double ed = static_cast<double>(e);
    if (k == 2) return 1.0 / (ed * ed * ed);
    if (k == 4) { double e2 = ed * ed; return 1.0 / (e2 * e2 * ed); }
    return std::pow(ed, -(k + 1));
}

PhiPair eval_hyperbola(const BigRat& xf, int k, double eps) {
    long E = hyperbola_terms_for(k, eps * 0.7);
    FracStepper st(xf);
    Kahan f, g;
    for (long e = 1; e <= E; ++e) {
        st.step();
        double fr = st.frac();
        double c = inv_pow_kp1(e, k);
        f.add(clausen::cl2_frac(fr) * c);
        g.add(M_PI * M_PI * clausen::b2_frac(fr) * c);
    }
    double geo = 1.0 / (k * std::pow(static_cast<double>(E), k));
    double slop = 3e-14;
    return {{f.sum, kMaxCl2 * geo + slop, E}, {g.sum, M_PI * M_PI * kMaxB2 * geo + slop, E}};
}

}  // namespace

PhiPair eval_series(const BigRat& x, int k, double eps, Method method) {
    require_even_weight(k);
    if (eps < kEpsFloor) throw std::domain_error("eval_series: eps below binary64 floor 1e-13");
    BigRat xf = x.frac();
    if (xf.is_zero()) {
        double g0 = arith::zeta_product_constant(k);
        return {{0.0, 0.0, 0}, {g0, 1e-14, 0}};
    }
    return (method == Method::naive) ? eval_naive(xf, k, eps) : eval_hyperbola(xf, k, eps);
}

std::complex<double> phi_k_real(const BigRat& x, int k, double eps) {
    PhiPair p = eval_series(x, k, eps, Method::hyperbola);
    return {p.G.value, p.F.value};
}

std::complex<double> phi_k_real(double x, int k, double eps) {
    double fr = x - std::floor(x);
    if (fr == 1.0) fr = 0.0;
    return phi_k_real(rat_from_double(fr), k, eps);
}

namespace {

/// Bound for sum_{n>N} n^p r^n (0 < r < 1): first term over 1 - rho with
/// rho = r ((N+2)/(N+1))^p, valid when rho < 1.
double geometric_tail(double p, double r, long N) {
    double rho = r * std::pow((static_cast<double>(N) + 2.0) / (static_cast<double>(N) + 1.0), p);
    if (rho >= 1.0) return HUGE_VAL;
    return std::pow(static_cast<double>(N) + 1.0, p) *
           std::pow(r, static_cast<double>(N) + 1.0) / (1.0 - rho);
}

long q_terms_for(double p, double r, double eps, double prefactor) {
    long N = 8;
    while (prefactor * geometric_tail(p, r, N) > eps) {
        N *= 2;
        if (N > (1L << 22))
            throw std::runtime_error("q-series: certificate unreachable (imaginary part too small)");
    }
    long lo = N / 2, hi = N;
    while (hi - lo > 8) {
        long mid = (lo + hi) / 2;
        (prefactor * geometric_tail(p, r, mid) <= eps ? hi : lo) = mid;
    }
    return hi;
}

std::complex<double> q_series_sum(std::complex<double> q, int k, double s, long N) {
    auto table = arith::shared_sigma_table(k - 1, N);
    std::complex<double> qp(1.0, 0.0), acc(0.0, 0.0);
    for (long n = 1; n <= N; ++n) {
        qp *= q;
        acc += table->sigma(n).get_d() * std::pow(static_cast<double>(n), -s) * qp;
    }
    return acc;
}

}  // namespace

ComplexSeriesValue eval_eisenstein(std::complex<double> z, int k, double eps) {
    require_even_weight(k);
    if (z.imag() <= 0.0) throw std::domain_error("eval_eisenstein: need Im z > 0");
    double r = std::exp(-kTwoPi * z.imag());
    double pref = std::abs((BigRat(-2L * k, 1) / arith::bernoulli(k)).to_double());
    long N = q_terms_for(static_cast<double>(k), r, eps * 0.5, pref);
    std::complex<double> q = std::exp(std::complex<double>(0.0, kTwoPi) * z);
    double factor = (BigRat(-2L * k, 1) / arith::bernoulli(k)).to_double();
    ComplexSeriesValue out;
    out.value = 1.0 + factor * q_series_sum(q, k, 0.0, N);
    out.error_bound =
        pref * geometric_tail(static_cast<double>(k), r, N) + 1e-15 * static_cast<double>(N);
    out.terms_used = N;
    return out;
}

ComplexSeriesValue eval_phi_k_derivative(std::complex<double> z, int k, int order, double eps) {
    require_even_weight(k);
    if (order < 0 || order > k + 1)
        throw std::domain_error("eval_phi_k_derivative: order outside 0..k+1");
    if (z.imag() <= 0.0) throw std::domain_error("eval_phi_k_derivative: need Im z > 0");
    double r = std::exp(-kTwoPi * z.imag());
    double pref = std::pow(kTwoPi, order);
    double p = std::max(0.0, static_cast<double>(order) - 1.0);  // sigma(n) n^{j-k-1} <= n^{j-1}
    long N = q_terms_for(p, r, eps * 0.5, pref);
    std::complex<double> q = std::exp(std::complex<double>(0.0, kTwoPi) * z);
    std::complex<double> s = q_series_sum(q, k, static_cast<double>(k + 1 - order), N);
    std::complex<double> i_pow(1.0, 0.0);
    for (int j = 0; j < order; ++j) i_pow *= std::complex<double>(0.0, 1.0);
    ComplexSeriesValue out;
    out.value = pref * i_pow * s;
    out.error_bound = pref * geometric_tail(p, r, N) + 1e-15 * static_cast<double>(N) * pref;
    out.terms_used = N;
    return out;
}

ComplexSeriesValue eval_phi2_derivative(std::complex<double> z, int order, double eps) {
    if (order < 0 || order > 3) throw std::domain_error("eval_phi2_derivative: order outside 0..3");
    return eval_phi_k_derivative(z, 2, order, eps);
}

SeriesValue eval_Lk(const BigRat& x, int k, double eps) {
    require_even_weight(k);
    if (eps < kEpsFloor) throw std::domain_error("eval_Lk: eps below floor");
    double R_d = std::pow(M_PI * M_PI / ((k - 1) * eps * 0.5), 1.0 / (k - 1));
    if (R_d > 2e8) throw std::domain_error("eval_Lk: eps unreachable at this weight");
    long R = static_cast<long>(R_d) + 1;
    FracStepper st(x.frac());
    Kahan acc;
    for (long r = 1; r <= R; ++r) {
        st.step();
        double fr = st.frac();
        if (fr == 0.0) continue;  // ((n)) = 0: the Fourier-series value of the sawtooth
        acc.add((fr - 0.5) * inv_pow_kp1(r, k) * static_cast<double>(r));
    }
    SeriesValue out;
    out.value = 2.0 * M_PI * M_PI * acc.sum;
    out.error_bound =
        M_PI * M_PI / ((k - 1) * std::pow(static_cast<double>(R), k - 1)) + 1e-13;
    out.terms_used = R;
    return out;
}

double lk_truncated(double t, int k, long R) {
    double acc = 0.0;
    if (k == 2) {
        for (long r = R; r >= 1; --r) {
            double u = static_cast<double>(r) * t;
            u -= std::floor(u);
            acc += (u - 0.5) / (static_cast<double>(r) * static_cast<double>(r));
        }
    } else {
        for (long r = R; r >= 1; --r) {
            double u = static_cast<double>(r) * t;
            u -= std::floor(u);
            acc += (u - 0.5) * std::pow(static_cast<double>(r), -k);
        }
    }
    return 2.0 * M_PI * M_PI * acc;
}

SeriesValue gk_via_integral(const BigRat& x, int k, double eps, long quad_budget) {
    require_even_weight(k);
    if (x.sign() < 0 || x >= BigRat(1, 1))
        throw std::domain_error("gk_via_integral: x must lie in [0,1)");
    double base = arith::zeta_product_constant(k);
    if (x.is_zero()) return {base, 1e-14, 0};
    double xd = x.to_double();

    // Integrated truncation: |int_0^x (L_k - L_k^R)| = 2 pi^2 |sum_{r>R}
    // psi(rx) r^{-(k+1)}| <= pi^2/(4 k R^k), psi the sawtooth antiderivative.
    double R_d = std::pow(M_PI * M_PI / (4.0 * k * (eps * 0.2)), 1.0 / k);
    long R = static_cast<long>(R_d) + 1;

    // The truncated L_k jumps by 2 pi^2/r^k at multiples of 1/r; align the
    // large ones with panel boundaries where the rule never sees them.
    std::vector<double> presplit;
    for (long r = 2; r <= 80; ++r)
        for (long j = 1; j < r; ++j) {
            double t = static_cast<double>(j) / static_cast<double>(r);
            if (t < xd) presplit.push_back(t);
        }
    auto f = [&](double t) { return lk_truncated(t, k, R); };
    auto q = quad::integrate(f, 0.0, xd, eps * 0.6, quad_budget, presplit);
    if (!q.converged)
        throw quad::BudgetExhausted("gk_via_integral: quadrature bound not reached within budget");

    SeriesValue out;
    out.value = q.value + base;
    out.error_bound = q.err_est + M_PI * M_PI / (4.0 * k * std::pow(static_cast<double>(R), k)) +
                      static_cast<double>(R) * 3e-16 + 1e-13;
    out.terms_used = R;
    return out;
}

namespace {

/// Estimated tail of the slope series past E. The G part is certified by
/// |B2'| <= 1; the F part carries the logarithmic Clausen slope, bounded here
/// by its typical log E growth.
double diff_tail_estimate(int k, long E) {
    double Ek = std::pow(static_cast<double>(E), k - 1);
    return (kTwoPi * (std::log(static_cast<double>(E)) + 3.0) + M_PI * M_PI) /
           ((k - 1) * Ek);
}

}  // namespace

DiffQuotient phi_diff_quotient(const BigRat& x, const BigRat& h, int k, double eps,
                               long min_terms) {
    require_even_weight(k);
    if (h.is_zero()) throw std::domain_error("phi_diff_quotient: h must be nonzero");
    BigRat y = x + h;
    if (!(x > BigRat(0, 1) && x < BigRat(1, 1) && y > BigRat(0, 1) && y < BigRat(1, 1)))
        throw std::domain_error("phi_diff_quotient: x and x+h must lie in (0,1)");

    long E = std::max(1L << 13, min_terms);
    while (diff_tail_estimate(k, E) > eps && E < (1L << 22)) E *= 2;

    FracStepper sx(x), sy(y);
    // e*h tracked exactly as ehn/h.den with ehn incremented by h.num.
    Int ehn(0);
    long wraps_x = 0, wraps_y = 0;
    const bool h_pos = h.sign() > 0;
    Kahan dF, dG;

    for (long e = 1; e <= E; ++e) {
        wraps_x += sx.step() ? 1 : 0;
        wraps_y += sy.step() ? 1 : 0;
        ehn += h.num;
        long wrap = wraps_y - wraps_x;  // floor(e*y) - floor(e*x)
        double fx = sx.frac(), fy = sy.frac();
        double inv_ek = inv_pow_kp1(e, k) * static_cast<double>(e);  // e^{-k}
        double abs_eh = std::abs(mpz_ratio_to_double(ehn, h.den));

        if (abs_eh >= 1e-4) {
            double eh_d = mpz_ratio_to_double(ehn, h.den);
            double cF = (clausen::cl2_frac(fy) - clausen::cl2_frac(fx)) / eh_d;
            double cG = M_PI * M_PI * (clausen::b2_frac(fy) - clausen::b2_frac(fx)) / eh_d;
            dF.add(cF * inv_ek);
            dG.add(cG * inv_ek);
            continue;
        }

        if (wrap == 0) {
            // {ey} - {ex} = e h exactly.
            BigRat exact_fx, exact_fy;
            const BigRat *pfx = nullptr, *pfy = nullptr;
            if (fx < 1e-9 || fy < 1e-9 || fx > 1.0 - 1e-9 || fy > 1.0 - 1e-9) {
                exact_fx = sx.frac_exact();
                exact_fy = sy.frac_exact();
                pfx = &exact_fx;
                pfy = &exact_fy;
            }
            double df_d = mpz_ratio_to_double(ehn, h.den);
            double slope = clausen::cl2_frac_slope(fx, df_d, pfx, pfy);
            dF.add(kTwoPi * slope * inv_ek);
            dG.add(M_PI * M_PI * (fx + fy - 1.0) * inv_ek);
            continue;
        }

        // Single wrap past an integer (|e h| < 1e-4 forces |wrap| = 1):
        // both Clausen arguments sit next to the cusp at 0, where the two
        // pieces add with no cancellation.
        BigRat u = h_pos ? sx.gap_exact() : sx.frac_exact();
        BigRat v = h_pos ? sy.frac_exact() : sy.gap_exact();
        Int eh_num = h_pos ? ehn : Int(-ehn);
        BigRat eh_abs(eh_num, h.den);
        double ru = (u / eh_abs).to_double();
        double rv = (v / eh_abs).to_double();
        double u_d = u.to_double(), v_d = v.to_double();
        double cu = u.is_zero() ? 0.0
                                : clausen::cl2_over_theta(kTwoPi * u_d, std::log(kTwoPi) + u.log());
        double cv = v.is_zero() ? 0.0
                                : clausen::cl2_over_theta(kTwoPi * v_d, std::log(kTwoPi) + v.log());
        dF.add(kTwoPi * (rv * cv + ru * cu) * inv_ek);
        // B2(fy) - B2(fx) = (v - u)(v + u - 1) in chart coordinates.
        double ratio = ((v - u) / h).to_double();
        dG.add(M_PI * M_PI * ratio * (u_d + v_d - 1.0) * inv_ek / static_cast<double>(e));
    }

    DiffQuotient out;
    out.dF = dF.sum;
    out.dG = dG.sum;
    out.err_est = diff_tail_estimate(k, E) + 1e-11;
    out.terms_used = E;
    return out;
}

}  // namespace fseries::analytic
