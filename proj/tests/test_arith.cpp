#include "doctest.h"

#include <cmath>
#include <complex>

#include "twosq/arith.hpp"

using namespace twosq;
using namespace twosq::arith;

namespace {

// independent oracle: plain trial division
std::vector<std::pair<uint64_t, int>> factorize_oracle(uint64_t n) {
    std::vector<std::pair<uint64_t, int>> out;
    for (uint64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// independent oracle: lattice enumeration of x^2 + y^2 = n
int64_t r2_oracle(int64_t n) {
    int64_t count = 0;
    auto m = static_cast<int64_t>(std::sqrt(static_cast<double>(n))) + 1;
    for (int64_t x = -m; x <= m; ++x)
        for (int64_t y = -m; y <= m; ++y)
            if (x * x + y * y == n) ++count;
    return count;
}

// independent oracle: direct complex Ramanujan sum
double ramanujan_oracle(int64_t k, int64_t n) {
    std::complex<double> s{0.0, 0.0};
    for (int64_t h = 1; h <= k; ++h) {
        if (gcd_i64(h, k) != 1) continue;
        double ang = 2.0 * M_PI * static_cast<double>((n % k + k) % k) * h / k;
        s += std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s.real();
}

}  // namespace

TEST_CASE("factorize matches trial division") {
    CHECK(factorize(1).factors.empty());
    auto f12 = factorize(12);
    REQUIRE(f12.factors.size() == 2);
    CHECK(f12.factors[0] == std::pair<uint64_t, int>{2, 2});
    CHECK(f12.factors[1] == std::pair<uint64_t, int>{3, 1});
    auto f169 = factorize(169);
    REQUIRE(f169.factors.size() == 1);
    CHECK(f169.factors[0] == std::pair<uint64_t, int>{13, 2});
    for (uint64_t n : {2ULL, 97ULL, 1024ULL, 99991ULL, 123456789ULL, 999999937ULL,
                       600851475143ULL}) {
        CHECK(factorize(n).factors == factorize_oracle(n));
    }
}

TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(1, 7) == 1);
    CHECK(mod_inverse(4, 9) == 7);
    CHECK_THROWS_AS(mod_inverse(2, 4), NotCoprime);
    CHECK(mod_inverse(5, 1) == 0);
    // bijection property over all coprime pairs with m <= 500
    for (int64_t m = 2; m <= 500; ++m)
        for (int64_t a = 1; a < m; ++a) {
            if (gcd_i64(a, m) != 1) continue;
            int64_t ab = mod_inverse(a, m);
            CHECK(((a * ab) % m) == 1);
        }
}

TEST_CASE("r2 against lattice enumeration") {
    CHECK(r2(1) == 4);
    CHECK(r2(3) == 0);
    CHECK(r2(25) == 12);
    for (int64_t n = 1; n <= 2000; ++n) CHECK(r2(static_cast<uint64_t>(n)) == r2_oracle(n));
}

TEST_CASE("r2 divisor formula and positivity criterion") {
    for (int64_t n = 1; n <= 10000; ++n) {
        int64_t byformula = 0;
        for (int64_t d = 1; d <= n; ++d)
            if (n % d == 0) byformula += chi4(d);
        byformula *= 4;
        CHECK(r2(static_cast<uint64_t>(n)) == byformula);

        bool positive = r2(static_cast<uint64_t>(n)) > 0;
        bool criterion = true;
        for (auto [p, e] : factorize(static_cast<uint64_t>(n)).factors)
            if (p % 4 == 3 && e % 2 == 1) criterion = false;
        CHECK(positive == criterion);
    }
}

TEST_CASE("r2_sieve") {
    auto s5 = r2_sieve(5);
    CHECK(s5 == std::vector<std::uint16_t>{4, 4, 0, 4, 8});
    CHECK(r2_sieve(1) == std::vector<std::uint16_t>{4});
    auto s = r2_sieve(5000);
    for (int64_t n = 1; n <= 5000; ++n)
        CHECK(static_cast<int64_t>(s[static_cast<std::size_t>(n - 1)]) == r2(static_cast<uint64_t>(n)));
    CHECK_THROWS_AS(r2_sieve(200000000ULL), LimitExceeded);
}

TEST_CASE("ramanujan sums: examples and Hoelder vs direct sum") {
    CHECK(ramanujan_sum(12, 0) == euler_phi(12));
    CHECK(ramanujan_sum(3, 1) == -1);
    CHECK(ramanujan_sum(4, 2) == -2);
    for (int64_t k = 1; k <= 200; ++k)
        for (int64_t n = -200; n <= 200; n += 7) {
            double direct = ramanujan_oracle(k, n);
            CHECK(std::abs(direct - static_cast<double>(ramanujan_sum(k, n))) < 1e-6);
        }
}

TEST_CASE("divisor_bound_check") {
    auto c16 = divisor_bound_check(16);
    CHECK(c16.r2_value == 4);
    CHECK(c16.bound > 0.0);
    CHECK(divisor_bound_check(25).r2_value == 12);
    CHECK(divisor_bound_check(360).r2_value == r2_oracle(360));
    CHECK_THROWS_AS(divisor_bound_check(15), Error);
    for (uint64_t n = 16; n <= 20000; n += 13) CHECK(r2(n) <= 4 * divisor_count(n));
}

TEST_CASE("helpers: phi, mu, divisors") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(9) == 6);
    CHECK(euler_phi(29) == 28);
    CHECK(mobius(1) == 1);
    CHECK(mobius(6) == 1);
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
    CHECK(divisors(12) == std::vector<uint64_t>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(169) == std::vector<uint64_t>{1, 13, 169});
}
