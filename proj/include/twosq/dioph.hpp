// Continued fractions, certified coprime rational approximations, and exact
// interval arithmetic for ||n alpha||.  Alpha is never represented in
// floating point here: every comparison is an exact big-rational comparison
// against a convergent sandwich.
#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "twosq/errors.hpp"

namespace twosq::dioph {

using std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct IrrationalSpec {
    enum class Kind { sqrt_int, golden, euler_e, explicit_cf };
    Kind kind = Kind::sqrt_int;
    int64_t n = 2;                 // radicand for sqrt_int
    std::vector<int64_t> cf;       // partial quotients for explicit_cf

    // a_i of the continued fraction [a0; a1, a2, ...].
    int64_t partial_quotient(std::size_t i) const;
    // number of exact partial quotients available (SIZE_MAX if unbounded)
    std::size_t precision() const;
    bool unbounded() const { return kind != Kind::explicit_cf; }
};

IrrationalSpec make_sqrt(int64_t n);
IrrationalSpec make_golden();
IrrationalSpec make_euler_e();
IrrationalSpec make_explicit_cf(std::vector<int64_t> a);

struct Convergent {
    BigInt p, q;
};

// First `depth` convergents p_j/q_j, in lowest terms, exact.
std::vector<Convergent> convergents(const IrrationalSpec& alpha, std::size_t depth);

// Exact sandwich lo < alpha < hi from consecutive convergents at index
// >= depth; width 1/(q_depth q_{depth+1}).
struct RationalInterval {
    BigRat lo, hi;
    BigRat width() const { return hi - lo; }
};
RationalInterval alpha_interval(const IrrationalSpec& alpha, std::size_t depth);

struct CoprimePair {
    BigInt  b;
    int64_t r;
    // exact certificate: sup |alpha - b/r| over the alpha sandwich
    BigRat  quality_sup;
};

// Lemma-4-style search: pairs (b, r) with r > r_min, gcd(r, b d) = 1 and
// certified |alpha - b/r| <= 6 d^2 / r^2.  Candidates are convergents in
// ascending order, then semiconvergents; every returned pair is certified
// exactly.  Throws SearchExhausted when nothing is found below r_cap.
CoprimePair find_coprime_approx(const IrrationalSpec& alpha, int64_t d, int64_t r_min,
                                int64_t r_cap = 1000000000LL);

struct RationalApprox {
    int64_t a = 0, q = 1;
    BigRat  quality_sup;  // certified sup of |alpha - a/q|, < 24/q^2
};

// All pairs produced by iterating find_coprime_approx with d = 2 across
// denominators in [q_min, q_max]; each satisfies gcd(2a, q) = 1 and the
// strict bound |alpha - a/q| < 24/q^2, certified exactly.
std::vector<RationalApprox> theorem_pairs(const IrrationalSpec& alpha, int64_t q_min, int64_t q_max);

// Exact rational bounds on ||n alpha||, interval within [0, 1/2] of width
// < 1/(10 n), from a convergent with denominator > 10 n^2.
struct DistInterval {
    BigRat lo, hi;
};
DistInterval distance_to_nearest_integer(const IrrationalSpec& alpha, int64_t n);

enum class ThresholdCompare { Below, NotBelow, Straddles };

// Compares the interval against C1 * n^(-gnum/gden) exactly (both endpoints
// raised to the gden-th power; no irrational arithmetic).
ThresholdCompare compare_interval_to_threshold(const DistInterval& iv, int64_t n,
                                               const BigRat& C1, int64_t gnum, int64_t gden);

// ||n alpha|| < C1 n^(-gamma) with gamma = gnum/gden, decided exactly;
// refines the sandwich until the threshold leaves the interval.  Throws
// IndeterminateComparison only if the refinement cap binds.
bool dist_below_threshold(const IrrationalSpec& alpha, int64_t n, const BigRat& C1,
                          int64_t gnum, int64_t gden);

}  // namespace twosq::dioph
