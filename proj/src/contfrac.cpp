#include "fseries/contfrac.hpp"

#include <cctype>
#include <stdexcept>

namespace fseries::cf {

namespace {

void seed_orbit(GaussOrbit& o, const BigRat& x) {
    if (x.sign() <= 0 || x >= BigRat(1, 1))
        throw std::domain_error("gauss orbit: x must lie in (0,1)");
    o.x = x;
    o.conv_p = {Int(0), Int(1), Int(0)};  // p_{-2}, p_{-1}, p_0
    o.conv_q = {Int(1), Int(0), Int(1)};  // q_{-2}, q_{-1}, q_0
    o.residue = {-x.den, x.num};          // r_{-1}, r_0
}

void push_quotient(GaussOrbit& o, const Int& a) {
    size_t n = o.conv_p.size();
    o.conv_p.push_back(a * o.conv_p[n - 1] + o.conv_p[n - 2]);
    o.conv_q.push_back(a * o.conv_q[n - 1] + o.conv_q[n - 2]);
    size_t m = o.residue.size();
    o.residue.push_back(a * o.residue[m - 1] + o.residue[m - 2]);
    o.quotients.push_back(a);
    o.depth += 1;
}

}  // namespace

BigRat GaussOrbit::iterate(int k) const {
    if (k < 0 || k > depth) throw std::out_of_range("GaussOrbit::iterate");
    if (k == 0) return x;
    if (r(k) == 0) return BigRat(0, 1);
    return BigRat(-r(k), r(k - 1));
}

BigRat GaussOrbit::beta(int k) const {
    if (k < -1 || k > depth) throw std::out_of_range("GaussOrbit::beta");
    Int n = r(k);
    if (n < 0) n = -n;
    return BigRat(n, x.den);
}

double GaussOrbit::gamma(int k) const {
    if (k < 0 || k > last_positive_depth()) throw std::out_of_range("GaussOrbit::gamma");
    // log(1/T^k) = log(|r_{k-1}| / |r_k|)
    Int hi = r(k - 1), lo = r(k);
    if (hi < 0) hi = -hi;
    if (lo < 0) lo = -lo;
    return beta(k - 1).to_double() * BigRat(hi, lo).log();
}

BigRat GaussOrbit::interval_endpoint_conv(int k) const { return BigRat(p(k), q(k)); }

BigRat GaussOrbit::interval_endpoint_med(int k) const {
    return BigRat(p(k) + p(k - 1), q(k) + q(k - 1));
}

bool GaussOrbit::interval_contains(int k, const BigRat& y) const {
    if (k < 0 || k > depth) throw std::out_of_range("GaussOrbit::interval_contains");
    if (k == 0) return y > BigRat(0, 1) && y < BigRat(1, 1);
    BigRat a = interval_endpoint_conv(k), b = interval_endpoint_med(k);
    return (a < b) ? (y > a && y < b) : (y > b && y < a);
}

BigRat GaussOrbit::smaller_endpoint(int k) const {
    return (k % 2 == 0) ? interval_endpoint_conv(k) : interval_endpoint_med(k);
}

GaussOrbit expand_cf(const BigRat& x, int max_depth) {
    GaussOrbit o;
    seed_orbit(o, x);
    Int a, num, den;
    while (o.depth < max_depth) {
        const Int& rk = o.residue.back();
        if (rk == 0) { o.terminated = true; break; }
        // a_{k+1} = floor(-r_{k-1}/r_k); the residues alternate in sign.
        num = o.residue[o.residue.size() - 2];
        den = rk;
        num = -num;
        mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        push_quotient(o, a);
    }
    if (!o.terminated && o.residue.back() == 0) o.terminated = true;
    return o;
}

GaussOrbit orbit_from_quotients(const std::vector<Int>& a, int max_depth) {
    if (a.empty()) throw std::invalid_argument("orbit_from_quotients: empty quotient list");
    for (const Int& ai : a)
        if (ai < 1) throw std::invalid_argument("orbit_from_quotients: quotients must be >= 1");
    // Value of [0; a_1, ..., a_N], recurring from (p_0, p_{-1}) = (0, 1).
    Int pm2(1), pm1(0), qm2(0), qm1(1);
    for (const Int& ai : a) {
        Int p = ai * pm1 + pm2, q = ai * qm1 + qm2;
        pm2 = pm1; pm1 = p; qm2 = qm1; qm1 = q;
    }
    if (pm1 >= qm1) throw std::domain_error("orbit_from_quotients: value not in (0,1)");

    GaussOrbit o;
    seed_orbit(o, BigRat(pm1, qm1));
    int want = (max_depth < 0) ? static_cast<int>(a.size())
                               : std::min<int>(max_depth, static_cast<int>(a.size()));
    for (int i = 0; i < want; ++i) push_quotient(o, a[static_cast<size_t>(i)]);
    o.terminated = (o.depth == static_cast<int>(a.size()));  // r_N = 0 exactly
    return o;
}

GaussOrbit expand(const RealSpec& spec, int max_depth) {
    if (spec.quotients) return orbit_from_quotients(*spec.quotients, max_depth);
    return expand_cf(spec.value.frac(), max_depth);
}

Int qk_identity_check(const GaussOrbit& orbit, int k) {
    if (k < 0 || k > orbit.depth || orbit.r(k) == 0)
        throw std::domain_error("qk_identity_check: k beyond termination");
    // sum_{j<=k} (-1)^j T^j/beta_j^2 with T^j = -r_j/r_{j-1}, beta_j = |r_j|/den:
    // each term is (-1)^{j+1} den^2 / (r_{j-1} r_j).
    BigRat sum(0, 1);
    Int den2 = orbit.x.den * orbit.x.den;
    for (int j = 0; j <= k; ++j) {
        Int prod = orbit.r(j - 1) * orbit.r(j);
        BigRat term(((j % 2 == 0) ? Int(-den2) : den2), prod);
        sum = sum + term;
    }
    BigRat value = orbit.beta(k) * sum;
    if (k % 2 != 0) value = -value;
    BigRat red = value.reduced();
    if (red.den != 1) throw std::runtime_error("qk_identity_check: non-integer result");
    return red.num;
}

int locate_depth(const GaussOrbit& orbit, const BigRat& h) {
    BigRat y = orbit.x + h;
    if (h.is_zero()) throw std::domain_error("locate_depth: h must be nonzero");
    if (!(y > BigRat(0, 1) && y < BigRat(1, 1)))
        throw std::domain_error("locate_depth: x+h outside (0,1)");
    int K = 0;
    for (int k = 1; k <= orbit.depth; ++k) {
        if (!orbit.interval_contains(k, y)) return K;
        K = k;
    }
    // Still inside the deepest interval. For a terminated (rational) orbit no
    // deeper interval exists, so K = depth is certified; otherwise we cannot
    // rule out membership one level down.
    if (orbit.terminated) return K;
    throw InsufficientDepth("locate_depth: orbit too shallow to certify K_h");
}

namespace {

Int parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_real: empty integer");
    return Int(s);
}

}  // namespace

RealSpec parse_real(const std::string& spec) {
    RealSpec out;
    out.source = spec;
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("parse_real: missing ':' in \"" + spec + "\"");
    std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);

    if (kind == "rational") {
        auto slash = body.find('/');
        if (slash == std::string::npos) throw std::invalid_argument("parse_real: rational needs p/q");
        Int p = parse_int(body.substr(0, slash));
        Int q = parse_int(body.substr(slash + 1));
        if (q == 0) throw std::invalid_argument("parse_real: zero denominator");
        out.value = BigRat(p, q).reduced();
        return out;
    }
    if (kind == "cf") {
        if (body.size() < 2 || body.front() != '[' || body.back() != ']')
            throw std::invalid_argument("parse_real: cf needs [a1,a2,...]");
        std::vector<Int> a;
        std::string item;
        for (size_t i = 1; i < body.size(); ++i) {
            char c = body[i];
            if (c == ',' || c == ']') {
                if (!item.empty()) { a.push_back(parse_int(item)); item.clear(); }
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                item.push_back(c);
            }
        }
        for (const Int& ai : a)
            if (ai < 1) throw std::invalid_argument("parse_real: cf quotients must be >= 1");
        if (a.empty()) throw std::invalid_argument("parse_real: empty quotient list");
        GaussOrbit o = orbit_from_quotients(a);
        out.value = o.x;
        out.quotients = std::move(a);
        return out;
    }
    if (kind == "decimal") {
        std::string digits = body;
        bool neg = false;
        size_t i = 0;
        if (i < digits.size() && (digits[i] == '+' || digits[i] == '-')) neg = digits[i++] == '-';
        std::string ip, fp;
        bool dot = false;
        for (; i < digits.size(); ++i) {
            char c = digits[i];
            if (c == '.') {
                if (dot) throw std::invalid_argument("parse_real: malformed decimal");
                dot = true;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                (dot ? fp : ip).push_back(c);
            } else {
                throw std::invalid_argument("parse_real: malformed decimal");
            }
        }
        if (ip.empty() && fp.empty()) throw std::invalid_argument("parse_real: empty decimal");
        Int num = ip.empty() ? Int(0) : Int(ip);
        Int den(1);
        for (char c : fp) { num = num * 10 + (c - '0'); den *= 10; }
        if (neg) num = -num;
        out.value = BigRat(num, den).reduced();
        return out;
    }
    throw std::invalid_argument("parse_real: unknown kind \"" + kind + "\"");
}

}  // namespace fseries::cf
