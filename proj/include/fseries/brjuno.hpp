#pragma once

#include <map>
#include <vector>

#include "fseries/contfrac.hpp"

namespace fseries::brjuno {

/// Finite-depth verdicts on Brjuno-type sums, never asymptotic claims: the
/// report carries the witnessed sequences so callers can see the evidence.
struct BrjunoReport {
    int depth;
    /// exponent -> partial sums of sum_{n<=m} log q_{n+1}/q_n^e, m = 0..depth
    std::map<int, std::vector<double>> brjuno_sums;
    std::vector<double> beta_gamma_terms;  // beta_{n-1} gamma_n
    double beta_gamma_sum;
    std::vector<double> star_seq;       // log q_{n+4}/q_n^2
    std::vector<double> starstar_seq;   // log q_{n+3}/q_n^2
    bool star_ok, starstar_ok;
    bool sqb_converged_at_depth;        // last increments of the k=2 sum below 1e-6
    std::vector<double> kappa;          // |x - p_n/q_n| = q_n^-kappa_n (n >= 1)
    double mu_est, nu_est;
};

BrjunoReport brjuno_report(const cf::RealSpec& x, int depth);

enum class ExtremeKind { golden, periodic, liouville, star_violator };

struct ExtremeNumber {
    cf::RealSpec spec;
    bool saturated = false;  // some quotient hit the bit cap
};

/// Quotient-list constructors for the classifier witnesses.
///  - golden: all ones.
///  - periodic: the given block repeated.
///  - liouville(rate): a_{n+1} = max(2, ceil(exp(q_n^rate))), bit-capped.
///  - star_violator: ones with one planted spike log a_m ~ q_{m-4}^2 so the
///    (*) witness sequence stays away from zero while the square-Brjuno sum
///    settles.
ExtremeNumber construct_extreme_number(ExtremeKind kind, int depth,
                                       const std::vector<long>& periodic_block = {},
                                       double rate = 2.0, long bit_cap = -1);

/// Default quotient bit cap: FSERIES_MEM_CAP_BITS or 10^6.
long quotient_bit_cap();

struct ScanRow {
    int n;
    BigRat h;       // exact; satisfies 1/(18 q_{n+1}^2) < h <= 1/(q_n q_{n+1})
    double dq_f2;   // (F2(x+h) - F2(x))/h
    double dq_g2;
    double err_est;
};

/// Difference quotients along the h_n of the divergence construction:
/// x+h_n lands in the basic interval with last quotient a_{n+1}+2.
std::vector<ScanRow> divergence_scan(const cf::RealSpec& x, const std::vector<int>& n_list,
                                     double eps = 0.02);

}  // namespace fseries::brjuno
