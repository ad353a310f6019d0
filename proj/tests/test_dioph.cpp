#include "doctest.h"

#include <cmath>

#include "twosq/dioph.hpp"

using namespace twosq;
using namespace twosq::dioph;

TEST_CASE("convergents of sqrt(2), golden ratio, e") {
    auto r2spec = make_sqrt(2);
    auto cs = convergents(r2spec, 5);
    REQUIRE(cs.size() == 5);
    CHECK(cs[0].p == 1); CHECK(cs[0].q == 1);
    CHECK(cs[1].p == 3); CHECK(cs[1].q == 2);
    CHECK(cs[2].p == 7); CHECK(cs[2].q == 5);
    CHECK(cs[3].p == 17); CHECK(cs[3].q == 12);
    CHECK(cs[4].p == 41); CHECK(cs[4].q == 29);
    // Pell identity |p^2 - 2 q^2| = 1 along the whole prefix
    for (const auto& c : convergents(r2spec, 30)) {
        BigInt pell = c.p * c.p - 2 * c.q * c.q;
        CHECK((pell == 1 || pell == -1));
    }
    // golden ratio: consecutive Fibonacci numbers
    auto golden = make_golden();
    auto gs = convergents(golden, 8);
    BigInt fib_prev = 1, fib = 1;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        CHECK(gs[i].q == fib_prev);
        BigInt next = fib + fib_prev;
        fib_prev = fib;
        fib = next;
    }
    // e = [2; 1, 2, 1, 1, 4, ...]
    auto espec = make_euler_e();
    CHECK(espec.partial_quotient(0) == 2);
    CHECK(espec.partial_quotient(1) == 1);
    CHECK(espec.partial_quotient(2) == 2);
    CHECK(espec.partial_quotient(5) == 4);
    CHECK(espec.partial_quotient(8) == 6);
    auto es = convergents(espec, 12);
    for (const auto& c : es) {
        double approx = static_cast<double>(c.p) / static_cast<double>(c.q);
        double qd = static_cast<double>(c.q);
        CHECK(std::abs(approx - M_E) < 1.0 / (qd * qd));
    }
    // denominators strictly increase from index 1 on
    auto all = convergents(r2spec, 25);
    for (std::size_t i = 2; i < all.size(); ++i) CHECK(all[i].q > all[i - 1].q);
}

TEST_CASE("make_sqrt rejects squares; explicit cf exhausts") {
    CHECK_THROWS_AS(make_sqrt(9), Error);
    auto fini = make_explicit_cf({1, 2, 2});
    CHECK_THROWS_AS(convergents(fini, 9), PrecisionExhausted);
}

TEST_CASE("alpha sandwich straddles the value") {
    auto r2spec = make_sqrt(2);
    for (std::size_t depth : {1u, 3u, 7u, 15u}) {
        auto iv = alpha_interval(r2spec, depth);
        CHECK(iv.lo < iv.hi);
        double lo = static_cast<double>(iv.lo), hi = static_cast<double>(iv.hi);
        CHECK(lo < std::sqrt(2.0));
        CHECK(hi > std::sqrt(2.0));
    }
}

TEST_CASE("find_coprime_approx: worked examples") {
    auto r2spec = make_sqrt(2);
    auto p1 = find_coprime_approx(r2spec, 1, 1);
    CHECK(p1.b == 3);
    CHECK(p1.r == 2);
    auto p2 = find_coprime_approx(r2spec, 2, 10);
    CHECK(p2.b == 41);
    CHECK(p2.r == 29);
    auto g = find_coprime_approx(make_golden(), 1, 1);
    CHECK(g.r == 2);
    CHECK(g.b == 3);
    // contract clauses, certified
    for (auto [d, rmin] : {std::pair<int64_t, int64_t>{1, 1}, {2, 10}, {3, 50}, {2, 1000}}) {
        auto cp = find_coprime_approx(r2spec, d, rmin);
        CHECK(cp.r > rmin);
        CHECK(boost::multiprecision::gcd(BigInt(cp.r), cp.b * d) == 1);
        CHECK(cp.quality_sup * cp.r * cp.r <= BigRat(6 * d * d));
    }
    CHECK_THROWS_AS(find_coprime_approx(r2spec, 1, 1000, 1005), SearchExhausted);
}

TEST_CASE("theorem_pairs") {
    auto r2spec = make_sqrt(2);
    auto ps = theorem_pairs(r2spec, 20, 200);
    bool has29 = false, has169 = false;
    for (const auto& p : ps) {
        CHECK(p.q % 2 == 1);  // (2a, q) = 1 forces odd q
        CHECK(p.quality_sup * p.q * p.q < BigRat(24));
        if (p.q == 29) { has29 = true; CHECK(p.a == 41); }
        if (p.q == 169) { has169 = true; CHECK(p.a == 239); }
    }
    CHECK(has29);
    CHECK(has169);
    auto unit = theorem_pairs(r2spec, 1, 1);
    REQUIRE(unit.size() == 1);
    CHECK(unit[0].a == 1);
    CHECK(unit[0].q == 1);
}

TEST_CASE("distance to nearest integer") {
    auto r2spec = make_sqrt(2);
    auto d1 = distance_to_nearest_integer(r2spec, 1);
    CHECK(static_cast<double>(d1.lo) <= 0.41421357);
    CHECK(static_cast<double>(d1.hi) >= 0.41421356);
    auto d29 = distance_to_nearest_integer(r2spec, 29);
    double mid = 0.5 * (static_cast<double>(d29.lo) + static_cast<double>(d29.hi));
    CHECK(std::abs(mid - 0.0121933088) < 1e-6);
    for (int64_t n : {1, 2, 5, 12, 29, 70, 1000, 123456}) {
        auto iv = distance_to_nearest_integer(r2spec, n);
        CHECK(iv.lo >= 0);
        CHECK(iv.hi <= BigRat(1, 2));
        CHECK(iv.hi - iv.lo < BigRat(1, 10 * n));
        // double-precision cross check
        double frac = n * std::sqrt(2.0) - std::floor(n * std::sqrt(2.0));
        double dist = std::min(frac, 1.0 - frac);
        CHECK(dist >= static_cast<double>(iv.lo) - 1e-9);
        CHECK(dist <= static_cast<double>(iv.hi) + 1e-9);
    }
}

TEST_CASE("threshold comparisons are exact and refine to a decision") {
    auto r2spec = make_sqrt(2);
    // ||29 sqrt 2|| = 0.0122 < 29^{-1/2} = 0.186
    CHECK(dist_below_threshold(r2spec, 29, BigRat(1), 1, 2));
    // ||3 sqrt 2|| = 0.2426 vs 3^{-1/2} = 0.577: below
    CHECK(dist_below_threshold(r2spec, 3, BigRat(1), 1, 2));
    // ||7 sqrt 2|| = 0.1005 vs 7^{-1} = 0.1428: below; vs 7^{-2}: not
    CHECK(dist_below_threshold(r2spec, 7, BigRat(1), 1, 1));
    CHECK_FALSE(dist_below_threshold(r2spec, 7, BigRat(1), 2, 1));
    // C1 = 0 excludes everything
    CHECK_FALSE(dist_below_threshold(r2spec, 12, BigRat(0), 1, 2));
    // gamma = 3/7 path
    CHECK(dist_below_threshold(r2spec, 29, BigRat(1), 3, 7));
}
