#include "fseries/brjuno.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "fseries/analytic.hpp"

namespace fseries::brjuno {

namespace {

double log_int(const Int& n) {
    long e;
    double m = mpz_get_d_2exp(&e, n.get_mpz_t());
    return std::log(m) + static_cast<double>(e) * M_LN2;
}

}  // namespace

long quotient_bit_cap() {
    if (const char* env = std::getenv("FSERIES_MEM_CAP_BITS")) {
        long v = std::atol(env);
        if (v >= 64) return v;
    }
    return 1'000'000;
}

BrjunoReport brjuno_report(const cf::RealSpec& x, int depth) {
    cf::GaussOrbit orbit = cf::expand(x, depth + 4);
    if (orbit.depth < depth + 4 || orbit.last_positive_depth() < depth)
        throw cf::InsufficientDepth("brjuno_report: orbit depth must reach depth + 4");

    BrjunoReport rep;
    rep.depth = depth;
    std::vector<double> logq(static_cast<size_t>(depth + 5));
    for (int n = 0; n <= depth + 4; ++n) logq[static_cast<size_t>(n)] = log_int(orbit.q(n));

    for (int e : {1, 2, 4, 6}) {
        auto& sums = rep.brjuno_sums[e];
        double acc = 0.0;
        for (int n = 0; n <= depth; ++n) {
            double qn = logq[static_cast<size_t>(n)];
            acc += logq[static_cast<size_t>(n + 1)] * std::exp(-e * qn);
            sums.push_back(acc);
        }
    }

    rep.beta_gamma_sum = 0.0;
    for (int n = 0; n <= depth; ++n) {
        double term = orbit.beta(n - 1).to_double() * orbit.gamma(n);
        rep.beta_gamma_terms.push_back(term);
        rep.beta_gamma_sum += term;
    }

    for (int n = 0; n <= depth; ++n) {
        double q2 = std::exp(-2.0 * logq[static_cast<size_t>(n)]);
        rep.star_seq.push_back(logq[static_cast<size_t>(n + 4)] * q2);
        rep.starstar_seq.push_back(logq[static_cast<size_t>(n + 3)] * q2);
    }

    // Finite-depth flags: the witnessed sequence must stay small over the
    // trailing window (past the universal Fibonacci transient).
    int lo = std::max(6, (3 * depth) / 4);
    auto window_ok = [&](const std::vector<double>& s) {
        if (lo > depth) return true;
        double mx = 0.0;
        for (int n = lo; n <= depth; ++n) mx = std::max(mx, s[static_cast<size_t>(n)]);
        return mx < 0.05;
    };
    rep.star_ok = window_ok(rep.star_seq);
    bool ones_tail = false;
    for (int i = std::max(1, depth / 2); i <= depth + 3 && !ones_tail; ++i)
        if (orbit.a(i) == 1) ones_tail = true;
    rep.starstar_ok = window_ok(rep.starstar_seq) && !ones_tail;

    const auto& sq = rep.brjuno_sums[2];
    rep.sqb_converged_at_depth = true;
    for (size_t i = sq.size() >= 3 ? sq.size() - 3 : 0; i + 1 < sq.size(); ++i)
        if (sq[i + 1] - sq[i] >= 1e-6) rep.sqb_converged_at_depth = false;

    // kappa_n from |x - p_n/q_n| = beta_n / q_n, where defined.
    for (int n = 1; n <= depth; ++n) {
        BigRat bn = orbit.beta(n);
        if (bn.is_zero()) break;
        double log_err = bn.log() - logq[static_cast<size_t>(n)];
        rep.kappa.push_back(-log_err / logq[static_cast<size_t>(n)]);
    }
    rep.mu_est = 0.0;
    rep.nu_est = HUGE_VAL;
    size_t half = rep.kappa.size() / 2;
    for (size_t i = half; i < rep.kappa.size(); ++i) {
        rep.mu_est = std::max(rep.mu_est, rep.kappa[i]);
        rep.nu_est = std::min(rep.nu_est, rep.kappa[i]);
    }
    return rep;
}

namespace {

Int exp_quotient(double nats, long bit_cap, bool* saturated) {
    double bits = nats / M_LN2;
    if (bits >= static_cast<double>(bit_cap)) {
        *saturated = true;
        Int a;
        mpz_ui_pow_ui(a.get_mpz_t(), 2, static_cast<unsigned long>(bit_cap));
        return a;
    }
    if (nats <= 600.0) {
        double v = std::ceil(std::exp(nats));
        Int a;
        mpz_set_d(a.get_mpz_t(), v);
        if (a < 2) a = 2;
        return a;
    }
    // Too large for a double, still under the cap: 2^ceil(bits) >= exp(nats).
    Int a;
    mpz_ui_pow_ui(a.get_mpz_t(), 2, static_cast<unsigned long>(std::ceil(bits)));
    return a;
}

}  // namespace

ExtremeNumber construct_extreme_number(ExtremeKind kind, int depth,
                                       const std::vector<long>& periodic_block, double rate,
                                       long bit_cap) {
    if (depth < 1) throw std::domain_error("construct_extreme_number: depth must be >= 1");
    if (bit_cap < 0) bit_cap = quotient_bit_cap();
    ExtremeNumber out;
    std::vector<Int> a;

    switch (kind) {
        case ExtremeKind::golden:
            a.assign(static_cast<size_t>(depth), Int(1));
            break;
        case ExtremeKind::periodic: {
            if (periodic_block.empty())
                throw std::invalid_argument("construct_extreme_number: empty periodic block");
            for (int i = 0; i < depth; ++i) {
                long v = periodic_block[static_cast<size_t>(i) % periodic_block.size()];
                if (v < 1) throw std::invalid_argument("construct_extreme_number: quotient < 1");
                a.push_back(Int(v));
            }
            break;
        }
        case ExtremeKind::liouville: {
            if (rate < 1.0) throw std::domain_error("construct_extreme_number: rate must be >= 1");
            Int pm2(1), pm1(0), qm2(0), qm1(1);  // (p_{-1}, p_0), (q_{-1}, q_0)
            Int q_prev(1);  // q_0
            for (int i = 1; i <= depth; ++i) {
                // a_{i} = max(2, ceil(exp(q_{i-1}^rate))), bit-capped.
                double log_nats = rate * log_int(q_prev);
                double nats = (log_nats > 709.0) ? HUGE_VAL : std::exp(log_nats);
                Int ai;
                if (!std::isfinite(nats)) {
                    out.saturated = true;
                    mpz_ui_pow_ui(ai.get_mpz_t(), 2, static_cast<unsigned long>(bit_cap));
                } else {
                    ai = exp_quotient(nats, bit_cap, &out.saturated);
                }
                if (ai < 2) ai = 2;
                a.push_back(ai);
                Int p = ai * pm1 + pm2, q = ai * qm1 + qm2;
                pm2 = pm1; pm1 = p; qm2 = qm1; qm1 = q;
                q_prev = qm1;
            }
            break;
        }
        case ExtremeKind::star_violator: {
            if (depth < 14)
                throw std::domain_error("construct_extreme_number: star_violator needs depth >= 14");
            int m = std::min(depth - 5, 17);  // spike position, capped so q_{m-4}^2 fits the bit budget
            a.assign(static_cast<size_t>(depth), Int(1));
            a[static_cast<size_t>(m - 2)] = 16;  // booster keeps the square-Brjuno blip small
            // q_{m-4} among leading ones is Fib_{m-3}.
            long fib_a = 1, fib_b = 1;
            for (int i = 2; i < m - 3; ++i) { long t = fib_a + fib_b; fib_a = fib_b; fib_b = t; }
            double q4 = static_cast<double>(fib_b);
            a[static_cast<size_t>(m - 1)] = exp_quotient(q4 * q4, bit_cap, &out.saturated);
            for (int i = m; i < depth; ++i) a[static_cast<size_t>(i)] = 2;
            break;
        }
    }
    cf::GaussOrbit orbit = cf::orbit_from_quotients(a);
    out.spec.value = orbit.x;
    out.spec.quotients = std::move(a);
    out.spec.source = "constructed";
    return out;
}

std::vector<ScanRow> divergence_scan(const cf::RealSpec& x, const std::vector<int>& n_list,
                                     double eps) {
    int need = 0;
    for (int n : n_list) need = std::max(need, n + 2);
    cf::GaussOrbit orbit = cf::expand(x, need);
    std::vector<ScanRow> rows;
    for (int n : n_list) {
        if (n % 2 == 0) throw std::domain_error("divergence_scan: n must be odd");
        if (n + 1 > orbit.last_positive_depth())
            throw cf::InsufficientDepth("divergence_scan: rational terminated before n+1");
        // I(a_1..a_n, a_{n+1}+2): convergent with boosted last quotient.
        Int A = orbit.a(n + 1) + 2;
        Int P = A * orbit.p(n) + orbit.p(n - 1);
        Int Q = A * orbit.q(n) + orbit.q(n - 1);
        BigRat end1(P, Q);
        BigRat end2(P + orbit.p(n), Q + orbit.q(n));
        BigRat target = (end1 + end2) * BigRat(1, 2);
        BigRat h = target - orbit.x;
        // Bracket from the construction: 1/(18 q_{n+1}^2) < h <= 1/(q_n q_{n+1}).
        BigRat lower(1, 18 * orbit.q(n + 1) * orbit.q(n + 1));
        BigRat upper(1, orbit.q(n) * orbit.q(n + 1));
        if (!(h > lower && h <= upper))
            throw std::runtime_error("divergence_scan: h_n bracket violated");
        // Orbit resonances: terms e near multiples of a continuant q_j carry
        // Clausen slopes of size log(1/beta_j); make sure the evaluator sums
        // far enough past every level whose weight matters at this eps.
        long min_terms = 1L << 13;
        double missed = 0.0;
        for (int j = 1; j <= orbit.last_positive_depth(); ++j) {
            double lq = log_int(orbit.q(j));
            if (lq > std::log(4e6)) break;
            double qj = orbit.q(j).get_d();
            double weight = 2.0 * M_PI * (-orbit.beta(j).log()) / (qj * qj);
            if (weight < eps * 0.25) continue;
            long need = static_cast<long>(6.0 * qj);
            if (need <= (1L << 18)) min_terms = std::max(min_terms, need);
            else missed += weight * 0.2;
        }
        auto dq = analytic::phi_diff_quotient(orbit.x, h, 2, eps, min_terms);
        rows.push_back(ScanRow{n, h, dq.dF, dq.dG, dq.err_est + missed});
    }
    return rows;
}

}  // namespace fseries::brjuno
