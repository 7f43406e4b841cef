#include <cmath>
#include <random>

#include "doctest.h"
#include "fseries/brjuno.hpp"

using namespace fseries;
using namespace fseries::brjuno;

namespace {

cf::RealSpec golden_spec(int depth) {
    return construct_extreme_number(ExtremeKind::golden, depth).spec;
}

double log_int(const Int& n) {
    long e;
    double m = mpz_get_d_2exp(&e, n.get_mpz_t());
    return std::log(m) + double(e) * M_LN2;
}

}  // namespace

TEST_CASE("constructors") {
    auto g = construct_extreme_number(ExtremeKind::golden, 10);
    REQUIRE(g.spec.quotients.has_value());
    CHECK(g.spec.quotients->size() == 10);
    for (const Int& a : *g.spec.quotients) CHECK(a == 1);

    auto p = construct_extreme_number(ExtremeKind::periodic, 3, {2});
    REQUIRE(p.spec.quotients.has_value());
    CHECK(*p.spec.quotients == std::vector<Int>{2, 2, 2});
    // convergents of sqrt(2)-1: 0/1, 1/2, 2/5, 5/12
    auto orb = cf::expand(p.spec, 3);
    CHECK(orb.p(0) == 0);
    CHECK(orb.q(0) == 1);
    CHECK(orb.p(1) == 1);
    CHECK(orb.q(1) == 2);
    CHECK(orb.p(2) == 2);
    CHECK(orb.q(2) == 5);
    CHECK(orb.p(3) == 5);
    CHECK(orb.q(3) == 12);

    CHECK_THROWS_AS(construct_extreme_number(ExtremeKind::periodic, 3, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(construct_extreme_number(ExtremeKind::liouville, 4, {}, 0.5),
                    std::domain_error);
}

TEST_CASE("liouville growth and saturation") {
    auto l = construct_extreme_number(ExtremeKind::liouville, 5, {}, 2.0);
    REQUIRE(l.spec.quotients.has_value());
    const auto& a = *l.spec.quotients;
    // a1 = ceil(e) = 3, a2 = ceil(exp(q1^2)) = ceil(exp(9)) = 8104
    CHECK(a[0] == 3);
    CHECK(a[1] == 8104);
    CHECK(l.saturated);  // exp(q2^2) is astronomically past the default cap
    long cap = quotient_bit_cap();
    for (const Int& ai : a) CHECK((long)mpz_sizeinbase(ai.get_mpz_t(), 2) <= cap + 1);
}

TEST_CASE("brjuno report on the golden surrogate") {
    auto rep = brjuno_report(golden_spec(60), 30);
    // sum log q_{n+1}/q_n^2 with q_n = Fib_{n+1}: small and settled
    CHECK(rep.brjuno_sums[2].back() < 2.0);
    size_t m = rep.brjuno_sums[2].size();
    CHECK(rep.brjuno_sums[2][m - 1] - rep.brjuno_sums[2][m - 2] < 1e-6);
    CHECK(rep.sqb_converged_at_depth);
    CHECK(rep.star_ok);
    CHECK(!rep.starstar_ok);  // all quotients are 1
    // partial sums nondecreasing
    for (int e : {1, 2, 4, 6}) {
        const auto& s = rep.brjuno_sums[e];
        for (size_t i = 1; i < s.size(); ++i) CHECK(s[i] >= s[i - 1]);
    }
}

TEST_CASE("golden kappa estimates approach 2") {
    auto rep = brjuno_report(golden_spec(60), 40);
    CHECK(std::abs(rep.mu_est - 2.0) < 0.05);
    CHECK(std::abs(rep.nu_est - 2.0) < 0.05);
}

TEST_CASE("kappa bracket log(q_n q_{n+1})/log q_n <= kappa_n <= log(q_n q_{n+2})/log q_n") {
    std::mt19937_64 rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<long> block;
        for (int i = 0; i < 3; ++i) block.push_back(1 + (long)(rng() % 4));
        auto spec = construct_extreme_number(ExtremeKind::periodic, 40, block).spec;
        auto rep = brjuno_report(spec, 30);
        auto orbit = cf::expand(spec, 34);
        for (size_t i = 0; i < rep.kappa.size(); ++i) {
            int n = (int)i + 1;
            double lqn = log_int(orbit.q(n));
            double lo = (lqn + log_int(orbit.q(n + 1))) / lqn;
            double hi = (lqn + log_int(orbit.q(n + 2))) / lqn;
            CHECK(rep.kappa[i] >= lo - 1e-9);
            CHECK(rep.kappa[i] <= hi + 1e-9);
        }
    }
}

TEST_CASE("Lemma 3.7 bracket termwise at every depth") {
    std::vector<cf::RealSpec> specs;
    specs.push_back(golden_spec(50));
    specs.push_back(construct_extreme_number(ExtremeKind::periodic, 50, {2}).spec);
    specs.push_back(construct_extreme_number(ExtremeKind::periodic, 50, {3}).spec);
    specs.push_back(construct_extreme_number(ExtremeKind::liouville, 12, {}, 2.0).spec);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 5; ++i) {
        std::vector<long> block = {1 + (long)(rng() % 5), 1 + (long)(rng() % 5),
                                   1 + (long)(rng() % 5)};
        specs.push_back(construct_extreme_number(ExtremeKind::periodic, 46, block).spec);
    }
    for (const auto& spec : specs) {
        int depth = std::min<int>(40, (int)spec.quotients->size() - 4);
        auto rep = brjuno_report(spec, depth);
        auto orbit = cf::expand(spec, depth + 4);
        double lhs_sum = 0, mid_sum = 0, rhs_sum = 0, right_aux = 0;
        for (int n = 0; n <= depth; ++n) {
            double bg = rep.beta_gamma_terms[(size_t)n];
            double lq_n = log_int(orbit.q(n)), lq_n1 = log_int(orbit.q(n + 1));
            double qn2 = std::exp(-2.0 * lq_n);
            mid_sum += bg;
            rhs_sum += (std::log(2.0) + lq_n1) * qn2;
            lhs_sum += lq_n1 * qn2;
            right_aux += (std::log(2.0) + lq_n) * qn2;
            CHECK(mid_sum <= rhs_sum * (1.0 + 1e-12) + 1e-12);
            CHECK(lhs_sum <= 2.0 * mid_sum + right_aux + 1e-12);
        }
    }
}

TEST_CASE("liouville report: non-square-Brjuno at depth, flagged by increments") {
    auto l = construct_extreme_number(ExtremeKind::liouville, 8, {}, 2.0);
    auto rep = brjuno_report(l.spec, 2);
    // the term log q_3/q_2^2 ~ 1 keeps the sum visibly growing at this depth
    CHECK(!rep.sqb_converged_at_depth);
    CHECK(rep.brjuno_sums[2].back() > 2.0);
}

TEST_CASE("star violator: (*) fails at depth while the k=2 sums settle") {
    auto v = construct_extreme_number(ExtremeKind::star_violator, 18);
    auto rep = brjuno_report(v.spec, 14);
    CHECK(!rep.star_ok);
    CHECK(rep.sqb_converged_at_depth);
    CHECK(rep.brjuno_sums[2].back() < 3.0);
    double spike = 0.0;
    for (double s : rep.star_seq) spike = std::max(spike, s);
    CHECK(spike > 0.5);
}

TEST_CASE("divergence scan rows satisfy the interval bracket exactly") {
    auto g = golden_spec(40);
    auto rows = divergence_scan(g, {1, 3, 5, 9, 15, 21}, 0.05);
    auto orbit = cf::expand(g, 40);
    for (const auto& row : rows) {
        int n = row.n;
        BigRat lower(1, 18 * orbit.q(n + 1) * orbit.q(n + 1));
        BigRat upper(1, orbit.q(n) * orbit.q(n + 1));
        CHECK(row.h > lower);
        CHECK(row.h <= upper);
        // x + h_n lands in I(a_1..a_n, a_{n+1}+2), i.e. shares exactly n quotients
        CHECK(cf::locate_depth(orbit, row.h) == n);
        CHECK(std::isfinite(row.dq_f2));
    }
    // golden difference quotients stay bounded
    for (const auto& row : rows) CHECK(std::abs(row.dq_f2) < 50.0);
}

TEST_CASE("divergence scan on the liouville surrogate") {
    auto l = construct_extreme_number(ExtremeKind::liouville, 7, {}, 2.0);
    auto rows = divergence_scan(l.spec, {1, 3, 5}, 0.05);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(std::isfinite(row.dq_f2));
        CHECK(row.err_est < 1.0);
    }
    // Every honest growth step of the capped quotient sequence is visible by
    // the deepest row; the bit cap freezes the later increments (see the
    // derivative-series monitor for the same ceiling).
    CHECK(rows[2].dq_f2 > rows[0].dq_f2);
}
