#include "fseries/arith.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fseries::arith {

DivisorTable build_divisor_table(int weight_exponent, long limit) {
    if (weight_exponent < 0) throw std::domain_error("build_divisor_table: negative exponent");
    if (limit < 1) throw std::domain_error("build_divisor_table: limit must be >= 1");
    // ~48 bytes per mpz entry; refuse tables that would not fit a sane budget.
    if (limit > 200'000'000) throw std::length_error("build_divisor_table: table too large");

    DivisorTable t;
    t.weight_exponent = weight_exponent;
    t.limit = limit;
    t.values.assign(static_cast<size_t>(limit), Int(0));
    Int dk;
    for (long d = 1; d <= limit; ++d) {
        mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d),
                      static_cast<unsigned long>(weight_exponent));
        for (long m = d; m <= limit; m += d) t.values[static_cast<size_t>(m - 1)] += dk;
    }
    return t;
}

Int sigma_single(int weight_exponent, const Int& n) {
    if (weight_exponent < 0 || n < 1) throw std::domain_error("sigma_single: bad arguments");
    Int rest = n, result = 1;
    auto account = [&](const Int& prime, int mult) {
        // sigma is multiplicative: contribution of p^m is sum_{i<=m} p^{i(k-1)}.
        Int pk, term(1), acc(1);
        mpz_pow_ui(pk.get_mpz_t(), prime.get_mpz_t(), static_cast<unsigned long>(weight_exponent));
        for (int i = 0; i < mult; ++i) { term *= pk; acc += term; }
        result *= acc;
    };
    for (Int p = 2; p * p <= rest;) {
        if (rest % p == 0) {
            int m = 0;
            while (rest % p == 0) { rest /= p; ++m; }
            account(p, m);
        }
        p += (p == 2) ? 1 : 2;
    }
    if (rest > 1) account(rest, 1);
    return result;
}

BigRat bernoulli(int k) {
    if (k < 0 || k % 2 != 0) throw std::domain_error("bernoulli: k must be even and >= 0");
    if (k == 0) return BigRat(1, 1);
    // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j, seeded with B_0=1, B_1=-1/2.
    std::vector<BigRat> b(static_cast<size_t>(k) + 1);
    b[0] = BigRat(1, 1);
    if (k >= 1) b[1] = BigRat(-1, 2);
    Int binom;
    for (int m = 2; m <= k; ++m) {
        BigRat acc(0, 1);
        for (int j = 0; j < m; ++j) {
            if (j > 1 && j % 2 == 1) continue;  // odd Bernoulli numbers vanish
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m + 1),
                         static_cast<unsigned long>(j));
            // keep the accumulator reduced: unreduced denominators compound
            acc = (acc + BigRat(binom, 1) * b[static_cast<size_t>(j)]).reduced();
        }
        b[static_cast<size_t>(m)] = (acc * BigRat(-1, m + 1)).reduced();
    }
    return b[static_cast<size_t>(k)];
}

ZetaValue zeta_em(double s, double eps) {
    if (s <= 1.0) throw std::domain_error("zeta_em: requires s > 1");
    if (eps < 1e-16) eps = 1e-16;

    // zeta(s) = sum_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2
    //           + sum_{j>=1} B_{2j}/(2j)! * (s)(s+1)...(s+2j-2) * N^{-s-2j+1}.
    // For fixed N the corrections eventually diverge, so search (N, J).
    static const double b2j_over_fact[] = {
        0.0,
        8.3333333333333333e-02,   // B2/2!
        -1.3888888888888889e-03,  // B4/4!
        3.3068783068783069e-05,   // B6/6!
        -8.2671957671957672e-07,  // B8/8!
        2.0876756987868099e-08,   // B10/10!
        -5.2841901386874932e-10,  // B12/12!
        1.3382536530684679e-11,   // B14/14!
    };
    for (long n_base = 8; n_base <= (1L << 24); n_base *= 2) {
        double tail_bound = 0.0;
        // corrections with increasing j; stop when the next term certifies eps
        double corr = 0.0;
        double rising = s;  // s(s+1)...(s+2j-2), updated incrementally
        bool ok = false;
        const double dn = static_cast<double>(n_base);
        for (int j = 1; j <= 7; ++j) {
            double term = b2j_over_fact[j] * rising * std::pow(dn, -s - 2 * j + 1);
            if (j >= 2 && std::abs(term) <= eps) { tail_bound = std::abs(term); ok = true; break; }
            corr += term;
            rising *= (s + 2 * j - 1) * (s + 2 * j);
            if (j == 7) tail_bound = std::abs(term);
        }
        if (!ok && tail_bound > eps) continue;
        double head = 0.0;
        for (long n = n_base - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -s);
        double v = head + std::pow(dn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(dn, -s) + corr;
        return {v, tail_bound};
    }
    throw std::runtime_error("zeta_em: failed to certify requested accuracy");
}

double zeta_even(int k) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("zeta_even: k must be even >= 2");
    BigRat bk = bernoulli(k);
    Int fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(k));
    // zeta(k) = (-1)^{k/2+1} B_k (2pi)^k / (2 k!)
    double sign = (k / 2 % 2 == 0) ? -1.0 : 1.0;
    double ratio = (bk / BigRat(2 * fact, 1)).to_double();
    return sign * ratio * std::pow(2.0 * M_PI, k);
}

double zeta_prime_2() {
    // zeta'(2) = -sum ln n / n^2, Euler-Maclaurin past N.
    const double N = 262144.0;
    double sum = 0.0;
    for (long n = static_cast<long>(N) - 1; n >= 2; --n) {
        double dn = static_cast<double>(n);
        sum += std::log(dn) / (dn * dn);
    }
    double lnN = std::log(N);
    sum += (lnN + 1.0) / N;                    // integral tail
    sum += lnN / (2.0 * N * N);                // f(N)/2
    sum += (2.0 * lnN - 1.0) / (12.0 * N * N * N);  // -B2/2! f'(N)
    return -sum;
}

double zeta_product_constant(int k) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("zeta_product_constant: k must be even >= 2");
    double z2 = zeta_even(2);
    double zk1 = zeta_em(static_cast<double>(k + 1), 1e-16).value;  // odd argument
    return z2 * zk1;
}

std::shared_ptr<const DivisorTable> shared_sigma_table(int weight_exponent, long min_limit) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const DivisorTable>> registry;
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(weight_exponent);
    if (it != registry.end() && it->second->limit >= min_limit) return it->second;
    long limit = std::max(min_limit, it != registry.end() ? it->second->limit * 2 : 1024L);
    auto table = std::make_shared<DivisorTable>(build_divisor_table(weight_exponent, limit));
    registry[weight_exponent] = table;
    return table;
}

}  // namespace fseries::arith
