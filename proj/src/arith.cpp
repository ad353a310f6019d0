#include "twosq/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twosq/util.hpp"

namespace twosq::arith {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((u128)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit integers.
bool miller_rabin(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

uint64_t pollard_rho(uint64_t n) {
    if ((n & 1) == 0) return 2;
    uint64_t c = 1;
    for (;;) {
        uint64_t x = 2, y = 2, d = 1;
        auto f = [&](uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            uint64_t diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
        ++c;
    }
}

void factor_into(uint64_t n, std::vector<uint64_t>& primes) {
    if (n == 1) return;
    if (miller_rabin(n)) { primes.push_back(n); return; }
    uint64_t d = pollard_rho(n);
    factor_into(d, primes);
    factor_into(n / d, primes);
}

}  // namespace

bool is_prime(uint64_t n) { return miller_rabin(n); }

Factorization factorize(uint64_t n) {
    if (n == 0) throw Error("factorize: n must be positive");
    Factorization f;
    f.n = n;
    std::vector<uint64_t> primes;
    uint64_t m = n;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        while (m % p == 0) { primes.push_back(p); m /= p; }
    }
    factor_into(m, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        f.factors.emplace_back(primes[i], static_cast<int>(j - i));
        i = j;
    }
    return f;
}

int64_t gcd_i64(int64_t a, int64_t b) {
    return static_cast<int64_t>(std::gcd(a < 0 ? -(unsigned long long)a : (unsigned long long)a,
                                         b < 0 ? -(unsigned long long)b : (unsigned long long)b));
}

int64_t mod_inverse(int64_t a, int64_t m) {
    if (m <= 0) throw Error("mod_inverse: modulus must be positive");
    if (m == 1) return 0;
    int64_t r0 = m, r1 = mod_floor(a, m);
    int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        int64_t q = r0 / r1;
        int64_t r2v = r0 - q * r1;
        r0 = r1; r1 = r2v;
        int64_t t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw NotCoprime("mod_inverse: gcd(a,m) > 1");
    return mod_floor(t0, m);
}

int64_t r2(uint64_t n) {
    if (n == 0) throw Error("r2: n must be positive");
    // r2(n) = 4 prod over p = 1 (mod 4) of (e+1), zero if some p = 3 (mod 4)
    // has odd exponent; the power of 2 is inert.
    auto f = factorize(n);
    int64_t out = 4;
    for (auto [p, e] : f.factors) {
        if (p == 2) continue;
        if (p % 4 == 1) out *= (e + 1);
        else if (e % 2 == 1) return 0;
    }
    return out;
}

std::vector<std::uint16_t> r2_sieve(uint64_t N) {
    if (N == 0) throw Error("r2_sieve: N must be positive");
    if (N > 100000000ull) throw LimitExceeded("r2_sieve: N exceeds 1e8 guard");
    std::vector<std::uint16_t> counts(N, 0);
    uint64_t xmax = static_cast<uint64_t>(std::sqrt(static_cast<double>(N)));
    while ((xmax + 1) * (xmax + 1) <= N) ++xmax;
    while (xmax * xmax > N) --xmax;
    for (uint64_t x = 0; x <= xmax; ++x) {
        uint64_t x2 = x * x;
        int wx = (x > 0) ? 2 : 1;
        for (uint64_t y = 0; x2 + y * y <= N; ++y) {
            uint64_t n = x2 + y * y;
            if (n == 0) continue;
            int wy = (y > 0) ? 2 : 1;
            counts[n - 1] = static_cast<std::uint16_t>(counts[n - 1] + wx * wy);
        }
    }
    return counts;
}

int64_t euler_phi(uint64_t n) {
    auto f = factorize(n);
    int64_t out = 1;
    for (auto [p, e] : f.factors) {
        int64_t pe = 1;
        for (int i = 0; i < e - 1; ++i) pe *= static_cast<int64_t>(p);
        out *= pe * (static_cast<int64_t>(p) - 1);
    }
    return out;
}

int mobius(uint64_t n) {
    auto f = factorize(n);
    for (auto [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

int64_t divisor_count(uint64_t n) {
    auto f = factorize(n);
    int64_t out = 1;
    for (auto [p, e] : f.factors) out *= (e + 1);
    return out;
}

std::vector<uint64_t> divisors(uint64_t n) {
    auto f = factorize(n);
    std::vector<uint64_t> out{1};
    for (auto [p, e] : f.factors) {
        std::size_t base = out.size();
        uint64_t pe = 1;
        for (int i = 1; i <= e; ++i) {
            pe *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int64_t ramanujan_sum(int64_t k, int64_t n) {
    if (k <= 0) throw Error("ramanujan_sum: k must be positive");
    int64_t g = gcd_i64(k, n);
    int64_t kg = k / g;
    int mu = mobius(static_cast<uint64_t>(kg));
    if (mu == 0) return 0;
    int64_t phik = euler_phi(static_cast<uint64_t>(k));
    int64_t phikg = euler_phi(static_cast<uint64_t>(kg));
    return mu * (phik / phikg);
}

DivisorBoundCheck divisor_bound_check(uint64_t n, double c) {
    if (n < 16) throw Error("divisor_bound_check: requires n >= 16");
    double ln = std::log(static_cast<double>(n));
    double bound = std::pow(static_cast<double>(n), c / std::log(ln));
    return {r2(n), bound};
}

}  // namespace twosq::arith
