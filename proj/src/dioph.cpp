#include "twosq/dioph.hpp"

#include <algorithm>
#include <cmath>

namespace twosq::dioph {

namespace {

int64_t isqrt_i64(int64_t n) {
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// sqrt(n) continued fraction via the classical (m, d, a) recurrence.
int64_t sqrt_partial_quotient(int64_t n, std::size_t i) {
    int64_t a0 = isqrt_i64(n);
    if (i == 0) return a0;
    int64_t m = 0, d = 1, a = a0;
    for (std::size_t step = 0; step < i; ++step) {
        m = d * a - m;
        d = (n - m * m) / d;
        a = (a0 + m) / d;
    }
    return a;
}

}  // namespace

int64_t IrrationalSpec::partial_quotient(std::size_t i) const {
    switch (kind) {
        case Kind::sqrt_int:
            return sqrt_partial_quotient(n, i);
        case Kind::golden:
            return 1;
        case Kind::euler_e:
            // [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
            if (i == 0) return 2;
            return (i % 3 == 2) ? static_cast<int64_t>(2 * ((i + 1) / 3)) : 1;
        case Kind::explicit_cf:
            if (i >= cf.size())
                throw PrecisionExhausted("explicit_cf: partial quotient beyond supplied precision");
            return cf[i];
    }
    throw Error("partial_quotient: bad kind");
}

std::size_t IrrationalSpec::precision() const {
    return unbounded() ? static_cast<std::size_t>(-1) : cf.size();
}

IrrationalSpec make_sqrt(int64_t n) {
    if (n < 2) throw Error("make_sqrt: need n >= 2");
    if (n > 1000000000000LL) throw Error("make_sqrt: radicand too large");
    int64_t r = isqrt_i64(n);
    if (r * r == n) throw Error("make_sqrt: perfect square is rational");
    IrrationalSpec s;
    s.kind = IrrationalSpec::Kind::sqrt_int;
    s.n = n;
    return s;
}

IrrationalSpec make_golden() {
    IrrationalSpec s;
    s.kind = IrrationalSpec::Kind::golden;
    return s;
}

IrrationalSpec make_euler_e() {
    IrrationalSpec s;
    s.kind = IrrationalSpec::Kind::euler_e;
    return s;
}

IrrationalSpec make_explicit_cf(std::vector<int64_t> a) {
    if (a.empty()) throw Error("make_explicit_cf: need at least one partial quotient");
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] <= 0) throw Error("make_explicit_cf: partial quotients beyond a0 must be positive");
    IrrationalSpec s;
    s.kind = IrrationalSpec::Kind::explicit_cf;
    s.cf = std::move(a);
    return s;
}

std::vector<Convergent> convergents(const IrrationalSpec& alpha, std::size_t depth) {
    if (depth > alpha.precision())
        throw PrecisionExhausted("convergents: depth beyond available partial quotients");
    std::vector<Convergent> out;
    out.reserve(depth);
    BigInt pm2 = 0, pm1 = 1;  // p_{-2}=0, p_{-1}=1
    BigInt qm2 = 1, qm1 = 0;
    for (std::size_t i = 0; i < depth; ++i) {
        BigInt ai = alpha.partial_quotient(i);
        BigInt p = ai * pm1 + pm2;
        BigInt q = ai * qm1 + qm2;
        out.push_back({p, q});
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
    }
    return out;
}

RationalInterval alpha_interval(const IrrationalSpec& alpha, std::size_t depth) {
    if (depth + 2 > alpha.precision())
        throw PrecisionExhausted("alpha_interval: depth beyond available partial quotients");
    auto cs = convergents(alpha, depth + 2);
    BigRat a(cs[depth].p, cs[depth].q);
    BigRat b(cs[depth + 1].p, cs[depth + 1].q);
    if (a < b) return {a, b};
    return {b, a};
}

namespace {

// sup of |alpha - b/r| over the sandwich [lo, hi]
BigRat quality_sup(const RationalInterval& iv, const BigInt& b, int64_t r) {
    BigRat x(b, BigInt(r));
    BigRat dlo = iv.lo - x;
    if (dlo < 0) dlo = -dlo;
    BigRat dhi = iv.hi - x;
    if (dhi < 0) dhi = -dhi;
    return std::max(dlo, dhi);
}

// certified |alpha - b/r| <= bound, refining the sandwich while undecided
bool certify_quality(const IrrationalSpec& alpha, const BigInt& b, int64_t r,
                     const BigRat& bound, BigRat* sup_out) {
    std::size_t depth = 4;
    for (int round = 0; round < 64; ++round) {
        if (!alpha.unbounded() && depth + 2 > alpha.precision()) {
            if (alpha.precision() < 3) throw PrecisionExhausted("certify_quality: too few partial quotients");
            depth = alpha.precision() - 2;
        }
        auto iv = alpha_interval(alpha, depth);
        BigRat sup = quality_sup(iv, b, r);
        if (sup <= bound) {
            if (sup_out) *sup_out = sup;
            return true;
        }
        // inf over the sandwich: zero if b/r inside, else the smaller gap
        BigRat x(b, BigInt(r));
        if (x < iv.lo || x > iv.hi) {
            BigRat inf = (x < iv.lo) ? iv.lo - x : x - iv.hi;
            if (inf > bound) return false;
        }
        if (!alpha.unbounded() && depth + 2 >= alpha.precision())
            throw PrecisionExhausted("certify_quality: sandwich cannot be refined further");
        depth += 4;
    }
    throw IndeterminateComparison("certify_quality: refinement cap reached");
}

}  // namespace

CoprimePair find_coprime_approx(const IrrationalSpec& alpha, int64_t d, int64_t r_min,
                                int64_t r_cap) {
    if (d <= 0) throw Error("find_coprime_approx: d must be positive");
    BigRat sixd2 = BigRat(6 * d * d);

    CoprimePair found;
    auto try_candidate = [&](const BigInt& b, const BigInt& qbig) -> bool {
        if (qbig > r_cap) return false;
        int64_t r = static_cast<int64_t>(qbig);
        if (r <= r_min) return false;
        if (boost::multiprecision::gcd(BigInt(r), b * d) != 1) return false;
        BigRat bound = sixd2 / (BigRat(r) * BigRat(r));
        BigRat sup;
        if (!certify_quality(alpha, b, r, bound, &sup)) return false;
        found = {b, r, sup};
        return true;
    };

    // pass 1: convergent denominators in ascending order
    BigInt pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
    std::size_t limit = std::min<std::size_t>(alpha.precision(), 400);
    std::vector<Convergent> cs;
    for (std::size_t i = 0; i < limit; ++i) {
        BigInt ai = alpha.partial_quotient(i);
        BigInt p = ai * pm1 + pm2, q = ai * qm1 + qm2;
        cs.push_back({p, q});
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
        if (q > r_cap) break;
    }
    for (const auto& c : cs)
        if (try_candidate(c.p, c.q)) return found;

    // pass 2: semiconvergents q_{j-1} + t q_j, t < min(a_{j+1}, 6 d^2);
    // those satisfy |alpha - b/r| <= 1/(q_j r) <= 6 d^2 / r^2 by construction
    for (std::size_t j = 1; j < cs.size(); ++j) {
        const auto& prev = cs[j - 1];
        const auto& cur = cs[j];
        int64_t tmax;
        try {
            tmax = alpha.partial_quotient(j + 1);
        } catch (const PrecisionExhausted&) {
            break;
        }
        tmax = std::min<int64_t>(tmax - 1, 6 * d * d - 1);
        for (int64_t t = 1; t <= tmax; ++t) {
            BigInt r = prev.q + t * cur.q;
            BigInt b = prev.p + t * cur.p;
            if (r > r_cap) break;
            if (try_candidate(b, r)) return found;
        }
    }
    throw SearchExhausted("find_coprime_approx: no certified pair below the r cap");
}

std::vector<RationalApprox> theorem_pairs(const IrrationalSpec& alpha, int64_t q_min, int64_t q_max) {
    if (q_min > q_max) throw Error("theorem_pairs: q_min must be <= q_max");
    std::vector<RationalApprox> out;
    int64_t r_min = q_min - 1;
    BigRat twentyfour(24);
    for (;;) {
        CoprimePair cp;
        try {
            cp = find_coprime_approx(alpha, 2, r_min, q_max);
        } catch (const SearchExhausted&) {
            break;
        }
        if (cp.r > q_max) break;
        // strict Corollary bound and the parity constraint, re-checked
        BigRat q2 = BigRat(cp.r) * BigRat(cp.r);
        if (cp.quality_sup * q2 < twentyfour &&
            boost::multiprecision::gcd(BigInt(2) * cp.b, BigInt(cp.r)) == 1) {
            RationalApprox ra;
            ra.a = static_cast<int64_t>(cp.b);
            ra.q = cp.r;
            ra.quality_sup = cp.quality_sup;
            out.push_back(ra);
        }
        r_min = cp.r;
    }
    return out;
}

namespace {

// ||n alpha|| interval from the first convergent with denominator > guard.
DistInterval distance_interval_with_guard(const IrrationalSpec& alpha, int64_t n,
                                          const BigInt& guard) {
    std::size_t depth = 2;
    for (;;) {
        if (depth + 1 > alpha.precision())
            throw PrecisionExhausted("distance_to_nearest_integer: insufficient partial quotients");
        auto cs = convergents(alpha, depth + 1);
        if (cs.back().q > guard) break;
        depth += 4;
        if (depth > 100000) throw PrecisionExhausted("distance_to_nearest_integer: depth cap");
    }
    auto cs = convergents(alpha, depth + 1);
    const BigInt& p = cs.back().p;
    const BigInt& q = cs.back().q;

    // n alpha lies in (n p / q - n/q^2, n p / q + n/q^2); fold the
    // fractional-part interval with the distance function min(x, 1-x)
    BigRat w = BigRat(n) / BigRat(q * q);
    BigInt np = BigInt(n) * p;
    BigInt f = np % q;
    if (f < 0) f += q;
    BigRat frac(f, q);
    BigRat lo = frac - w, hi = frac + w;

    BigRat half(1, 2), one(1), zero(0);
    DistInterval out;
    if (lo >= zero && hi <= half) {
        out = {lo, hi};
    } else if (lo >= half && hi <= one) {
        out = {BigRat(one - hi), BigRat(one - lo)};
    } else if (lo < zero) {
        out = {zero, std::max(BigRat(-lo), hi)};
    } else if (hi > one) {
        out = {zero, std::max(BigRat(one - lo), BigRat(hi - one))};
    } else {  // straddles 1/2
        out = {std::min(lo, BigRat(one - hi)), half};
    }
    if (out.lo < zero) out.lo = zero;
    if (out.hi > half) out.hi = half;
    return out;
}

}  // namespace

DistInterval distance_to_nearest_integer(const IrrationalSpec& alpha, int64_t n) {
    if (n <= 0) throw Error("distance_to_nearest_integer: n must be positive");
    return distance_interval_with_guard(alpha, n, BigInt(10) * n * n);
}

ThresholdCompare compare_interval_to_threshold(const DistInterval& iv, int64_t n,
                                               const BigRat& C1, int64_t gnum, int64_t gden) {
    if (gden <= 0 || gnum < 0) throw Error("compare_interval_to_threshold: bad gamma");
    // r < C1 n^(-gnum/gden)  <=>  r^gden n^gnum < C1^gden   (all quantities >= 0)
    if (C1 < 0) return ThresholdCompare::NotBelow;
    auto upow = [](const BigRat& x, int64_t e) {
        BigRat r(1);
        for (int64_t i = 0; i < e; ++i) r *= x;
        return r;
    };
    BigRat npow = upow(BigRat(n), gnum);
    BigRat rhs = upow(C1, gden);
    BigRat hi_pow = upow(iv.hi, gden) * npow;
    if (hi_pow < rhs) return ThresholdCompare::Below;
    BigRat lo_pow = upow(iv.lo, gden) * npow;
    if (lo_pow >= rhs) return ThresholdCompare::NotBelow;
    return ThresholdCompare::Straddles;
}

bool dist_below_threshold(const IrrationalSpec& alpha, int64_t n, const BigRat& C1,
                          int64_t gnum, int64_t gden) {
    if (n <= 0) throw Error("dist_below_threshold: n must be positive");
    // widen the denominator guard geometrically until the comparison resolves
    BigInt guard = BigInt(10) * n * n;
    for (int round = 0; round < 24; ++round) {
        DistInterval iv = distance_interval_with_guard(alpha, n, guard);
        switch (compare_interval_to_threshold(iv, n, C1, gnum, gden)) {
            case ThresholdCompare::Below: return true;
            case ThresholdCompare::NotBelow: return false;
            case ThresholdCompare::Straddles: break;
        }
        guard *= 1024;
    }
    throw IndeterminateComparison("dist_below_threshold: refinement cap reached");
}

}  // namespace twosq::dioph
