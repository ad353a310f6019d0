// Exact integer and multiplicative-function utilities: factorization,
// modular inverses, the two-squares representation function r2 and its
// sieve, Ramanujan sums, and small helpers (phi, mu, divisors, chi_4).
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "twosq/errors.hpp"

namespace twosq::arith {

using std::int64_t;
using std::uint64_t;

struct Factorization {
    uint64_t n = 1;
    // (prime, exponent) pairs in increasing prime order; empty for n = 1.
    std::vector<std::pair<uint64_t, int>> factors;
};

// Trial division over small primes plus Pollard rho for the 63-bit range.
Factorization factorize(uint64_t n);

bool is_prime(uint64_t n);

// Least nonnegative a-bar with a * a-bar == 1 (mod m); mod_inverse(a,1) = 0.
// Throws NotCoprime when gcd(a, m) > 1.
int64_t mod_inverse(int64_t a, int64_t m);

int64_t gcd_i64(int64_t a, int64_t b);

// chi_4(n) for the non-trivial character mod 4: table {0,1,0,-1}.
inline int chi4(int64_t n) {
    static constexpr int table[4] = {0, 1, 0, -1};
    return table[((n % 4) + 4) % 4];
}

// Number of (x,y) in Z^2 with x^2 + y^2 = n, via the factorization of n.
int64_t r2(uint64_t n);

// r2(n) for 1 <= n <= N by lattice-point accumulation over x^2 + y^2 <= N.
// Element [n-1] is r2(n).  Guard: N <= 1e8.
std::vector<std::uint16_t> r2_sieve(uint64_t N);

// Ramanujan sum c_k(n) by Hoelder's formula mu(k/g) phi(k) / phi(k/g),
// g = gcd(k, n); exact integer.
int64_t ramanujan_sum(int64_t k, int64_t n);

int64_t euler_phi(uint64_t n);
int      mobius(uint64_t n);
int64_t divisor_count(uint64_t n);
// Divisors of n in increasing order.
std::vector<uint64_t> divisors(uint64_t n);

struct DivisorBoundCheck {
    int64_t r2_value;
    double  bound;  // n^(c / log log n)
};

// Pairs r2(n) with the classical divisor-type bound n^(c/loglog n).
// Requires n >= 16 so that log log n > 0.  c is configurable (default 2).
DivisorBoundCheck divisor_bound_check(uint64_t n, double c = 2.0);

}  // namespace twosq::arith
