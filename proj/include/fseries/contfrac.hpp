#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fseries/rational.hpp"

namespace fseries::cf {

struct InsufficientDepth : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed real-number specification. The exact value is always available;
/// when the input was a quotient list it is retained losslessly so orbits can
/// be built from the prescribed quotients instead of re-expanding the value.
struct RealSpec {
    BigRat value;
    std::optional<std::vector<Int>> quotients;
    std::string source;
};

/// Grammar: "rational:<p>/<q>", "cf:[a1,a2,...]", "decimal:<digits>".
RealSpec parse_real(const std::string& spec);

/// Gauss-map orbit of a rational x in (0,1), all quantities exact.
///
/// Convergents use the seeds p_{-1}=1, p_{-2}=0, q_{-1}=0, q_{-2}=1 and
/// p_n = a_n p_{n-1} + p_{n-2} (a_0 = 0). Internally everything derives from
/// the residues r_k = q_k*num - p_k*den, which follow the same recurrence and
/// give T^k = -r_k/r_{k-1} and beta_k = |r_k|/den with no gcd work.
struct GaussOrbit {
    BigRat x;
    int depth = 0;             // quotients a_1..a_depth are available
    bool terminated = false;   // T^depth == 0 exactly

    std::vector<Int> quotients;  // quotients[i] = a_{i+1}
    std::vector<Int> conv_p, conv_q;  // index k+2 holds p_k / q_k, k = -2..depth
    std::vector<Int> residue;         // index k+1 holds r_k, k = -1..depth

    const Int& p(int k) const { return conv_p.at(static_cast<size_t>(k + 2)); }
    const Int& q(int k) const { return conv_q.at(static_cast<size_t>(k + 2)); }
    const Int& a(int i) const { return quotients.at(static_cast<size_t>(i - 1)); }
    const Int& r(int k) const { return residue.at(static_cast<size_t>(k + 1)); }

    /// T^k(x), exact; defined for 0 <= k <= depth.
    BigRat iterate(int k) const;
    /// beta_k = |q_k x - p_k|, exact; defined for -1 <= k <= depth.
    BigRat beta(int k) const;
    /// gamma_k = beta_{k-1} * log(1/T^k), k in [0, last_positive_depth()].
    double gamma(int k) const;
    /// Largest k with T^k(x) > 0 (depth, or depth-1 when terminated).
    int last_positive_depth() const { return terminated ? depth - 1 : depth; }

    /// Basic interval I_k(x): the open interval between p_k/q_k and
    /// (p_k + p_{k-1})/(q_k + q_{k-1}); defined for 0 <= k <= depth.
    BigRat interval_endpoint_conv(int k) const;    // p_k/q_k
    BigRat interval_endpoint_med(int k) const;     // mediant endpoint
    bool interval_contains(int k, const BigRat& y) const;
    /// Smaller endpoint p(k): p_k/q_k for even k, the mediant for odd k.
    BigRat smaller_endpoint(int k) const;
};

/// Orbit of a rational x in (0,1) by exact Gauss iteration, up to max_depth.
GaussOrbit expand_cf(const BigRat& x, int max_depth);

/// Orbit from prescribed partial quotients (each >= 1): the value is the
/// depth-N convergent, and the orbit reproduces exactly the given quotients.
GaussOrbit orbit_from_quotients(const std::vector<Int>& a, int max_depth = -1);

/// Dispatch on how the number was specified.
GaussOrbit expand(const RealSpec& spec, int max_depth);

/// (-1)^k beta_k sum_{j<=k} (-1)^j T^j / beta_j^2, exact. Equals q_k.
Int qk_identity_check(const GaussOrbit& orbit, int k);

/// The unique K with x+h in I_K(x) and x+h not in I_{K+1}(x).
/// Throws InsufficientDepth when the orbit cannot certify K.
int locate_depth(const GaussOrbit& orbit, const BigRat& h);

}  // namespace fseries::cf
