#include "fseries/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "fseries/analytic.hpp"
#include "fseries/arith.hpp"
#include "fseries/brjuno.hpp"
#include "fseries/contfrac.hpp"
#include "fseries/funceq.hpp"
#include "fseries/quadrature.hpp"

namespace fseries::verify {

namespace {

using Complex = std::complex<double>;
const Complex I(0.0, 1.0);
const double PI2 = M_PI * M_PI;
const double PI3 = PI2 * M_PI;
const double PI4 = PI2 * PI2;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

BigRat random_reduced(std::mt19937_64& rng, long qmax) {
    std::uniform_int_distribution<long> qd(2, qmax);
    while (true) {
        long q = qd(rng);
        long p = 1 + static_cast<long>(rng() % static_cast<unsigned long>(q - 1));
        if (std::gcd(p, q) == 1) return BigRat(p, q);
    }
}

std::vector<Int> random_quotients(std::mt19937_64& rng, int depth, long amax) {
    std::vector<Int> a;
    for (int i = 0; i < depth; ++i) a.push_back(Int(1 + (long)(rng() % amax)));
    return a;
}

template <typename F>
auto run_parallel(long n, F&& fn) {
    using R = decltype(fn(0L));
    unsigned workers = std::max(2u, std::thread::hardware_concurrency());
    std::vector<R> out(static_cast<size_t>(n));
    std::atomic<long> next{0};
    auto worker = [&]() {
        for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1))
            out[static_cast<size_t>(i)] = fn(i);
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

std::vector<double> ols(const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& y) {
    size_t m = rows[0].size();
    std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
    std::vector<double> b(m, 0.0);
    for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t r = 0; r < m; ++r) {
            b[r] += rows[i][r] * y[i];
            for (size_t c = 0; c < m; ++c) A[r][c] += rows[i][r] * rows[i][c];
        }
    }
    for (size_t c = 0; c < m; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < m; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        for (size_t r = c + 1; r < m; ++r) {
            double f = A[r][c] / A[c][c];
            for (size_t cc = c; cc < m; ++cc) A[r][cc] -= f * A[c][cc];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> sol(m);
    for (size_t r = m; r-- > 0;) {
        double acc = b[r];
        for (size_t cc = r + 1; cc < m; ++cc) acc -= A[r][cc] * sol[cc];
        sol[r] = acc / A[r][r];
    }
    return sol;
}

/// One-sided difference quotients of F2 and G2 at p/q over h = sign * 2^-j.
struct SlopeData {
    std::vector<double> h, dqF, dqG;
};
SlopeData one_sided_dq(const BigRat& x, int sign, int jlo, int jhi, double eps) {
    SlopeData out;
    bool at_zero = x.frac().is_zero();
    double base_G = at_zero ? arith::zeta_product_constant(2) : 0.0;
    for (int j = jlo; j <= jhi; ++j) {
        double hd = std::ldexp(sign < 0 ? -1.0 : 1.0, -j);
        if (at_zero) {
            // wrap so the evaluation point stays in (0,1); F2 and G2 are
            // 1-periodic and G2(0) is known exactly
            BigRat y = sign > 0 ? BigRat(1, Int(1) << j)
                                : BigRat(1, 1) - BigRat(1, Int(1) << j);
            auto v = analytic::eval_series(y, 2, 1e-13);
            out.dqF.push_back(v.F.value / hd);
            out.dqG.push_back((v.G.value - base_G) / hd);
        } else {
            BigRat h(sign, Int(1) << j);
            auto dq = analytic::phi_diff_quotient(x, h, 2, eps);
            out.dqF.push_back(dq.dF);
            out.dqG.push_back(dq.dG);
        }
        out.h.push_back(std::abs(hd));
    }
    return out;
}

double fit_g_slope(const SlopeData& d) {
    std::vector<std::vector<double>> rows;
    for (double h : d.h) rows.push_back({1.0, h * std::log(1.0 / h), h});
    return ols(rows, d.dqG)[0];
}

double fit_f_logslope(const SlopeData& d) {
    std::vector<std::vector<double>> rows;
    for (double h : d.h) rows.push_back({1.0, std::log(1.0 / h)});
    return ols(rows, d.dqF)[1];
}

CheckResult make(const std::string& id, const std::string& anchor, bool ok, double measured,
                 double tol, const std::string& details = "") {
    return CheckResult{id, anchor, ok, measured, tol, details};
}

// ------------------------------------------------------------------ criteria

CheckResult acc1(std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x1001);
    double worst_pair = 0.0, worst_cf = 0.0;
    bool ok = true;

    std::vector<cf::RealSpec> specs;
    for (int i = 0; i < 50; ++i)
        specs.push_back(cf::RealSpec{random_reduced(rng, 10000), std::nullopt, "r"});
    for (int i = 0; i < 10; ++i) {
        auto a = random_quotients(rng, 40, 4);
        auto orbit = cf::orbit_from_quotients(a);
        specs.push_back(cf::RealSpec{orbit.x, a, "cf"});
    }

    struct Row {
        double dn_f, dn_g, certn_f, certn_g;
        double dc_f, dc_g, certc_f, certc_g;
    };
    auto rows = run_parallel((long)specs.size(), [&](long i) -> Row {
        const auto& spec = specs[(size_t)i];
        auto nv = analytic::eval_series(spec.value, 2, 3e-5, analytic::Method::naive);
        auto hv = analytic::eval_series(spec.value, 2, 2e-9);
        auto cv = funceq::eval_F2G2_cf(spec, 1e-8);
        Row r;
        r.dn_f = std::abs(nv.F.value - hv.F.value);
        r.dn_g = std::abs(nv.G.value - hv.G.value);
        r.certn_f = nv.F.error_bound + hv.F.error_bound;
        r.certn_g = nv.G.error_bound + hv.G.error_bound;
        r.dc_f = std::abs(cv.F.value - hv.F.value);
        r.dc_g = std::abs(cv.G.value - hv.G.value);
        r.certc_f = cv.F.error_bound + hv.F.error_bound;
        r.certc_g = cv.G.error_bound + hv.G.error_bound;
        return r;
    });
    for (const Row& r : rows) {
        ok = ok && r.dn_f <= r.certn_f && r.dn_g <= r.certn_g;
        ok = ok && r.dc_f <= r.certc_f && r.dc_g <= r.certc_g;
        ok = ok && r.dc_f <= 1e-8 && r.dc_g <= 1e-8;
        worst_pair = std::max({worst_pair, r.dn_f / r.certn_f, r.dn_g / r.certn_g});
        worst_cf = std::max({worst_cf, r.dc_f, r.dc_g});
    }

    auto grid = run_parallel(200L, [&](long i) -> std::array<double, 2> {
        BigRat x(2 * i + 1, 400);
        auto nv = analytic::eval_series(x.reduced(), 4, 3e-5, analytic::Method::naive);
        auto hv = analytic::eval_series(x.reduced(), 4, 1e-9);
        double df = std::abs(nv.F.value - hv.F.value) / (nv.F.error_bound + hv.F.error_bound);
        double dg = std::abs(nv.G.value - hv.G.value) / (nv.G.error_bound + hv.G.error_bound);
        return {df, dg};
    });
    for (auto& g : grid) {
        ok = ok && g[0] <= 1.0 && g[1] <= 1.0;
        worst_pair = std::max({worst_pair, g[0], g[1]});
    }

    return make("acc1", "oracle equivalence naive/hyperbola/cf", ok, worst_cf, 1e-8,
                "worst cert ratio " + fmt(worst_pair));
}

CheckResult acc2() {
    double worst = 0.0;
    for (auto [p, q] : {std::pair{0L, 1L}, {1L, 2L}, {1L, 3L}, {2L, 5L}}) {
        BigRat x(p, q);
        double right = fit_g_slope(one_sided_dq(x, +1, 8, 24, 5e-4));
        double left = fit_g_slope(one_sided_dq(x, -1, 8, 24, 5e-4));
        double jump = left - right;
        double expect = PI4 / (3.0 * (double)q * (double)q);
        worst = std::max(worst, std::abs(jump - expect) / expect);
    }
    return make("acc2", "G2 one-sided derivative jump pi^4/(3 q^2)", worst < 0.01, worst, 0.01);
}

CheckResult acc3() {
    double worst = 0.0;
    for (long q : {1L, 2L, 3L}) {
        BigRat x = (q == 1) ? BigRat(0, 1) : BigRat(1, q);
        auto d = one_sided_dq(x, +1, 10, 26, 5e-4);
        double slope = fit_f_logslope(d);
        double expect = PI3 / (3.0 * (double)q * (double)q);
        worst = std::max(worst, std::abs(slope - expect) / expect);
    }
    return make("acc3", "F2 difference-quotient log blow-up pi^3/(3 q^2)", worst < 0.02,
                worst, 0.02);
}

CheckResult acc4(std::uint64_t seed, const std::string& fault) {
    std::mt19937_64 rng(seed ^ 0x4004);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.2, 1.5);
    std::uniform_int_distribution<long> cd(-5, 5);
    double worst = 0.0;
    int done = 0;
    while (done < 10) {
        long c = cd(rng), d = cd(rng);
        if (c == 0 || std::gcd(std::abs(c), std::abs(d)) != 1) continue;
        funceq::SL2Matrix g = funceq::bezout_gamma(Int(c), Int(d));
        Complex z(re(rng), im(rng));
        Complex czd = Complex((double)c) * z + Complex((double)d);
        Complex gz = (Complex(g.a.get_d()) * z + Complex(g.b.get_d())) / czd;
        auto lhs = analytic::eval_eisenstein(z, 2, 1e-12);
        auto rhs = analytic::eval_eisenstein(gz, 2, 1e-12);
        Complex expect = rhs.value / (czd * czd) - 6.0 / (I * M_PI) * (double)c / czd;
        worst = std::max(worst, std::abs(lhs.value - expect));
        ++done;
    }
    bool ok = worst < 1e-9;

    // phi2''' = (i pi^3/3)(E2 - 1); the Bernoulli fault hook surfaces here
    // because the q-expansion prefactor -2k/B_k feeds E2.
    double fault_shift = fault == "bernoulli" ? 1e-6 : 0.0;
    double worst3 = 0.0;
    for (Complex z : {Complex(0.0, 1.0), Complex(0.2, 0.7), Complex(-0.3, 0.9),
                      Complex(0.45, 1.2), Complex(0.1, 0.55)}) {
        auto d3 = analytic::eval_phi2_derivative(z, 3, 1e-12);
        auto e2 = analytic::eval_eisenstein(z, 2, 1e-12);
        Complex expect = I * PI3 / 3.0 * (e2.value * (1.0 + fault_shift) - 1.0);
        worst3 = std::max(worst3, std::abs(d3.value - expect));
    }
    ok = ok && worst3 < 1e-10;
    return make("acc4", "eisenstein-q-expansion quasi-modularity", ok,
                std::max(worst, worst3), 1e-9, "third-derivative residual " + fmt(worst3));
}

CheckResult acc5() {
    struct Pair {
        BigRat x;
        long c, d;
    };
    std::vector<Pair> pairs = {{BigRat(3, 10), 1, 0},
                               {BigRat(51, 100), 2, 1},
                               {BigRat(77, 100), 3, 1},
                               {BigRat(23, 100), 1, 1},
                               {BigRat(41, 100), 2, -1}};
    auto residuals = run_parallel((long)pairs.size(), [&](long i) {
        const auto& p = pairs[(size_t)i];
        funceq::SL2Matrix g = (p.c == 1 && p.d == 0)
                                  ? funceq::SL2Matrix{Int(0), Int(-1), Int(1), Int(0)}
                                  : funceq::bezout_gamma(Int(p.c), Int(p.d));
        auto r = funceq::phi2_transform_check(p.x, g, 1e-7);
        return std::pair{r.residual, r.residual <= r.certificate};
    });
    double worst = 0.0;
    bool certs = true;
    for (auto& [res, c] : residuals) {
        worst = std::max(worst, res);
        certs = certs && c;
    }
    return make("acc5", "phi2 real-line transformation residual", worst < 1e-7 && certs,
                worst, 1e-7);
}

CheckResult acc6() {
    struct Task {
        int k;
        Complex tau, alpha;
        bool degenerate;
    };
    std::vector<Task> tasks;
    for (int k : {4, 6}) {
        tasks.push_back({k, {0.3, 1.0}, {0.0, 1.0}, false});
        tasks.push_back({k, {-0.2, 1.5}, {0.0, 2.0}, false});
        tasks.push_back({k, {0.3, 1.0}, {0.3, 1.0}, true});
    }
    auto rs = run_parallel((long)tasks.size(), [&](long i) {
        const auto& t = tasks[(size_t)i];
        return funceq::verify_funceq_k(t.k, t.tau, t.alpha, t.degenerate ? 1e-9 : 1e-7);
    });
    double worst = 0.0, worst_deg = 0.0;
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].degenerate)
            worst_deg = std::max(worst_deg, rs[i].residual);
        else
            worst = std::max(worst, rs[i].residual);
    }
    bool ok = worst < 1e-6 && worst_deg < 1e-8;
    return make("acc6", "weight-k transformation law residual", ok, worst, 1e-6,
                "degenerate case " + fmt(worst_deg));
}

CheckResult acc7() {
    long checked = 0;
    bool ok = true;
    for (long q = 2; q <= 50 && ok; ++q) {
        for (long p = 1; p < q && ok; ++p) {
            if (std::gcd(p, q) != 1) continue;
            auto o = cf::expand_cf(BigRat(p, q), 100);
            int m = o.depth;
            for (int k = 0; k <= m && ok; ++k) {
                Int det = o.p(k) * o.q(k - 1) - o.p(k - 1) * o.q(k);
                ok = ok && det == ((k % 2 == 0) ? -1 : 1);
                BigRat bk = BigRat(o.p(k), 1) - BigRat(o.q(k), 1) * o.x;
                if (k % 2 == 0) bk = -bk;
                ok = ok && o.beta(k) == bk;
                BigRat lhs =
                    o.iterate(k) * (BigRat(-o.q(k - 1), 1) * o.x + BigRat(o.p(k - 1), 1));
                BigRat rhs = BigRat(o.q(k), 1) * o.x - BigRat(o.p(k), 1);
                ok = ok && lhs == rhs;
                ++checked;
            }
            for (int k = 0; k < m && ok; ++k) {
                ok = ok && o.beta(k) >= BigRat(1, o.q(k) + o.q(k + 1));
                ok = ok && o.beta(k) <= BigRat(1, o.q(k + 1));
                BigRat denom = BigRat(o.q(k + 1), 1) + o.iterate(k + 1) * BigRat(o.q(k), 1);
                ok = ok && o.beta(k) * denom == BigRat(1, 1);
                BigRat l2 = o.beta(k - 1) * BigRat(o.q(k), 1);
                BigRat r2 = BigRat(1, 1) - BigRat(o.q(k - 1), 1) * o.beta(k);
                ok = ok && l2 == r2;
                ok = ok && cf::qk_identity_check(o, k) == o.q(k);
            }
        }
    }
    return make("acc7", "exact continued-fraction identities, zero tolerance", ok,
                (double)checked, 0.0, "all reduced p/q with q <= 50");
}

CheckResult acc8(std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x8008);
    std::uniform_real_distribution<double> logh(-10.0, -0.7);
    long tried = 0, certified = 0;
    bool ok = true;
    while (tried < 1000) {
        auto a = random_quotients(rng, 40, 5);
        auto orbit = cf::orbit_from_quotients(a);
        double hd = std::pow(10.0, logh(rng)) * (rng() % 2 ? 1.0 : -1.0);
        BigRat h = rat_from_double(hd);
        BigRat y = orbit.x + h;
        if (!(y > BigRat(0, 1) && y < BigRat(1, 1))) continue;
        ++tried;
        int K;
        try {
            K = cf::locate_depth(orbit, h);
        } catch (const cf::InsufficientDepth&) {
            continue;
        }
        if (K + 3 <= orbit.depth) {
            BigRat lower(1, 2 * orbit.q(K + 2) * orbit.q(K + 3));
            BigRat upper(2, orbit.q(K) * orbit.q(K));
            ok = ok && lower <= h.abs() && h.abs() <= upper;
            ++certified;
        }
    }
    // The h_n bracket of the scan construction is enforced exactly inside
    // divergence_scan; a violation on either witness throws out of here.
    auto golden = brjuno::construct_extreme_number(brjuno::ExtremeKind::golden, 30);
    auto rows = brjuno::divergence_scan(golden.spec, {1, 3, 5, 7}, 0.1);
    auto liou = brjuno::construct_extreme_number(brjuno::ExtremeKind::liouville, 7, {}, 2.0);
    auto rows2 = brjuno::divergence_scan(liou.spec, {1, 3}, 0.1);
    ok = ok && rows.size() == 4 && rows2.size() == 2;
    return make("acc8", "basic-interval depth brackets (K_h scan, h_n rows)", ok,
                (double)certified, 0.0, fmt((double)certified) + " pairs certified");
}

CheckResult acc9(std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9009);
    std::vector<cf::RealSpec> specs;
    specs.push_back(brjuno::construct_extreme_number(brjuno::ExtremeKind::golden, 50).spec);
    specs.push_back(
        brjuno::construct_extreme_number(brjuno::ExtremeKind::periodic, 50, {2}).spec);
    specs.push_back(
        brjuno::construct_extreme_number(brjuno::ExtremeKind::periodic, 50, {3}).spec);
    specs.push_back(
        brjuno::construct_extreme_number(brjuno::ExtremeKind::liouville, 44, {}, 2.0).spec);
    for (int i = 0; i < 20; ++i) {
        auto a = random_quotients(rng, 46, 5);
        auto orbit = cf::orbit_from_quotients(a);
        specs.push_back(cf::RealSpec{orbit.x, a, "rand"});
    }
    bool ok = true;
    double worst_slack = -HUGE_VAL;
    for (const auto& spec : specs) {
        int depth = std::min<int>(40, (int)spec.quotients->size() - 4);
        auto rep = brjuno::brjuno_report(spec, depth);
        auto orbit = cf::expand(spec, depth + 4);
        auto log_q = [&](int n) {
            long e;
            double m = mpz_get_d_2exp(&e, orbit.q(n).get_mpz_t());
            return std::log(m) + (double)e * M_LN2;
        };
        double lhs = 0, mid = 0, rhs = 0, aux = 0;
        for (int n = 0; n <= depth; ++n) {
            double qn2 = std::exp(-2.0 * log_q(n));
            mid += rep.beta_gamma_terms[(size_t)n];
            lhs += log_q(n + 1) * qn2;
            rhs += (std::log(2.0) + log_q(n + 1)) * qn2;
            aux += (std::log(2.0) + log_q(n)) * qn2;
            ok = ok && mid <= rhs + 1e-10 && lhs <= 2.0 * mid + aux + 1e-10;
            worst_slack = std::max(worst_slack, mid - rhs);
        }
    }
    return make("acc9", "beta-gamma bracket at every depth <= 40", ok, worst_slack, 0.0,
                fmt((double)specs.size()) + " numbers tested");
}

CheckResult acc10() {
    auto golden = brjuno::construct_extreme_number(brjuno::ExtremeKind::golden, 60);
    auto ds = funceq::derivative_series(golden.spec, 40, 1e-5);
    BigRat h(1, 1000000);
    auto up = analytic::phi_diff_quotient(golden.spec.value, h, 2, 1e-4);
    auto dn = analytic::phi_diff_quotient(golden.spec.value, -h, 2, 1e-4);
    double symF = 0.5 * (up.dF + dn.dF);
    double diff_der = std::abs(ds.f2_prime.value - symF);
    bool ok_a = !ds.f2_divergent && diff_der < 1e-2;

    auto liou = brjuno::construct_extreme_number(brjuno::ExtremeKind::liouville, 7, {}, 2.0);
    auto lr = brjuno::divergence_scan(liou.spec, {1, 3, 5}, 0.02);
    bool increasing = lr[0].dq_f2 < lr[1].dq_f2 && lr[1].dq_f2 < lr[2].dq_f2;
    bool ok_b = increasing && lr[2].dq_f2 > 100.0;

    auto gr =
        brjuno::divergence_scan(golden.spec, {1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21}, 0.05);
    double gmax = 0.0;
    for (const auto& row : gr) gmax = std::max(gmax, std::abs(row.dq_f2));
    bool ok_c = gmax < 50.0;

    std::string details = "derivative-vs-DQ " + fmt(diff_der) + "; liouville DQ " +
                          fmt(lr[0].dq_f2) + ", " + fmt(lr[1].dq_f2) + ", " + fmt(lr[2].dq_f2) +
                          "; golden max " + fmt(gmax);
    return make("acc10", "differentiability dichotomy witnesses", ok_a && ok_b && ok_c,
                lr[2].dq_f2, 100.0, details);
}

CheckResult acc11() {
    struct Task {
        BigRat x;
        int k;
    };
    std::vector<Task> tasks;
    for (int k : {2, 4})
        for (BigRat x : {BigRat(1, 10), BigRat(3, 10), BigRat(113, 355)})
            tasks.push_back({x, k});
    auto diffs = run_parallel((long)tasks.size(), [&](long i) {
        const auto& t = tasks[(size_t)i];
        auto gi = analytic::gk_via_integral(t.x, t.k, 1e-6, 4'000'000);
        auto gs = analytic::eval_series(t.x, t.k, 1e-9);
        return std::abs(gi.value - gs.G.value);
    });
    double worst = *std::max_element(diffs.begin(), diffs.end());
    return make("acc11", "L_k integral oracle vs direct series", worst < 1e-6, worst, 1e-6);
}

CheckResult acc12(std::uint64_t seed) {
    bool ok = true;
    double global_max = 0.0;
    for (int which = 0; which < 2; ++which) {
        auto spec =
            which == 0
                ? brjuno::construct_extreme_number(brjuno::ExtremeKind::golden, 60).spec
                : brjuno::construct_extreme_number(brjuno::ExtremeKind::periodic, 60, {2}).spec;
        std::mt19937_64 rng(seed ^ (0xC00CULL + (unsigned)which));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::uniform_real_distribution<double> dec(-12.0, -1.0);
        std::vector<double> ratios;
        while (ratios.size() < 1000) {
            BigRat y;
            if (rng() % 2) {
                y = rat_from_double(uni(rng));
            } else {
                double off = std::pow(10.0, dec(rng)) * (rng() % 2 ? 1.0 : -1.0);
                y = spec.value + rat_from_double(off);
            }
            if (!(y > BigRat(0, 1) && y < BigRat(1, 1)) || y == spec.value) continue;
            BigRat h = y - spec.value;
            auto dq = analytic::phi_diff_quotient(spec.value, h, 2, 2e-3);
            double habs = h.abs().to_double();
            double ratio = std::abs(dq.dF) / (std::log(1.0 / habs) + 1.0);
            if (!std::isfinite(ratio)) {
                ok = false;
                break;
            }
            ratios.push_back(ratio);
            global_max = std::max(global_max, ratio);
            if (ratios.size() > 50) {
                std::vector<double> sorted(ratios.begin(), ratios.end() - 1);
                std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                                 sorted.end());
                double med = sorted[sorted.size() / 2];
                if (ratio > 10.0 * std::max(med, 1e-6)) ok = false;
            }
        }
    }
    return make("acc12", "modulus-of-continuity sampler sanity", ok, global_max, 0.0,
                "max bound_ratio " + fmt(global_max));
}

}  // namespace

std::vector<CheckResult> run_acceptance(std::uint64_t seed) {
    std::vector<CheckResult> out;
    out.push_back(acc1(seed));
    out.push_back(acc2());
    out.push_back(acc3());
    out.push_back(acc4(seed, ""));
    out.push_back(acc5());
    out.push_back(acc6());
    out.push_back(acc7());
    out.push_back(acc8(seed));
    out.push_back(acc9(seed));
    out.push_back(acc10());
    out.push_back(acc11());
    out.push_back(acc12(seed));
    return out;
}

std::vector<CheckResult> run_all(const Options& opts) {
    struct Entry {
        const char* module;
        std::function<CheckResult()> fn;
    };
    std::uint64_t seed = opts.seed;
    std::string fault = opts.inject_fault;

    std::vector<Entry> entries;
    entries.push_back({"arith", [seed, fault] {
                           bool ok = true;
                           ok = ok && arith::bernoulli(2) == BigRat(1, 6);
                           ok = ok && arith::bernoulli(4) == BigRat(-1, 30);
                           long expects[3] = {-24, 240, -504};
                           int idx = 0;
                           for (int k : {2, 4, 6}) {
                               BigRat v = BigRat(-2L * k, 1) / arith::bernoulli(k);
                               if (fault == "bernoulli") v = v + BigRat(1, 1000);
                               ok = ok && v == BigRat(expects[idx++], 1);
                           }
                           double z = arith::zeta_product_constant(2);
                           ok = ok && std::abs(z - 1.9773043502972961) < 1e-13;
                           return make("arith-constants",
                                       "eisenstein-q-expansion prefactor -2k/B_k", ok,
                                       ok ? 0.0 : 1.0, 0.0);
                       }});
    entries.push_back({"analytic", [seed] { return acc1(seed); }});
    entries.push_back({"funceq", [] { return acc2(); }});
    entries.push_back({"funceq", [] { return acc3(); }});
    entries.push_back({"funceq", [seed, fault] { return acc4(seed, fault); }});
    entries.push_back({"funceq", [] { return acc5(); }});
    entries.push_back({"funceq", [] { return acc6(); }});
    entries.push_back({"contfrac", [] { return acc7(); }});
    entries.push_back({"contfrac", [seed] { return acc8(seed); }});
    entries.push_back({"brjuno", [seed] { return acc9(seed); }});
    entries.push_back({"brjuno", [] { return acc10(); }});
    entries.push_back({"analytic", [] { return acc11(); }});
    entries.push_back({"analytic", [seed] { return acc12(seed); }});

    std::vector<CheckResult> out;
    for (auto& e : entries) {
        if (!opts.only.empty() && opts.only != e.module) continue;
        CheckResult r = e.fn();
        r.details = r.details.empty() ? std::string("module=") + e.module
                                      : r.details + "; module=" + e.module;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace fseries::verify
