#include "doctest.h"

#include <cmath>

#include "twosq/arith.hpp"
#include "twosq/voronoi.hpp"

using namespace twosq;
using namespace twosq::voronoi;
using quadforms::make_form;
using analysis::make_plateau;

TEST_CASE("lhs: direct twisted sums") {
    auto q11 = make_form(1, 0, 1);
    auto f = make_plateau(200.0);
    // h = k = 1 reduces to the plain weighted count
    cplx plain = voronoi_lhs(q11, 1, 1, f);
    CHECK(std::abs(plain.imag()) < 1e-12);
    auto r2 = arith::r2_sieve(400);
    double direct = 0.0;
    for (int64_t n = 200; n <= 400; ++n)
        direct += static_cast<double>(r2[static_cast<std::size_t>(n - 1)]) *
                  analysis::window_eval(f, static_cast<double>(n));
    CHECK(std::abs(plain.real() - direct) < 1e-9 * std::abs(direct));
    // k = 3: finite sum over the support only
    cplx tw = voronoi_lhs(q11, 3, 1, f);
    cplx check{0.0, 0.0};
    for (int64_t n = 200; n <= 400; ++n) {
        double w = analysis::window_eval(f, static_cast<double>(n));
        check += static_cast<double>(r2[static_cast<std::size_t>(n - 1)]) * w *
                 e_of(static_cast<double>(n % 3) / 3.0);
    }
    CHECK(std::abs(tw - check) < 1e-9 * (1.0 + std::abs(check)));
    CHECK_THROWS_AS(voronoi_lhs(q11, 3, 3, f), NotCoprime);
}

TEST_CASE("two-squares identity at k = 1 (plain Gauss circle with weight)") {
    auto q11 = make_form(1, 0, 1);
    auto rep = verify(q11, 1, 1, make_plateau(500.0));
    CHECK(rep.pass);
    CHECK(rep.abs_gap < 1e-6 * std::abs(rep.lhs));
    // frozen from the external oracle run: lhs - main settles near -0.5847
    CHECK(std::abs((rep.lhs - rep.rhs_main).real() - (-0.584687)) < 1e-4);
}

TEST_CASE("two-squares identity for odd k, both h values") {
    auto q11 = make_form(1, 0, 1);
    auto f = make_plateau(500.0);
    for (int64_t k : {3, 5}) {
        analysis::BesselTransformCache cache(f, kTwoPi / static_cast<double>(k));
        for (int64_t h = 1; h < k; ++h) {
            if (arith::gcd_i64(h, k) != 1) continue;
            auto rep = verify(q11, k, h, f, &cache);
            CHECK(rep.pass);
            CHECK(rep.abs_gap < 1e-6 * std::abs(rep.lhs));
        }
    }
}

TEST_CASE("two-squares and general paths agree") {
    auto q11 = make_form(1, 0, 1);
    auto f = make_plateau(500.0);
    for (int64_t k : {3, 5}) {
        auto a = voronoi_rhs_two_squares(k, 2 % k == 0 ? 1 : 2, f);
        auto b = voronoi_rhs_general(q11, k, 2 % k == 0 ? 1 : 2, f);
        CHECK(std::abs(a.main - b.main) < 1e-9 * (1.0 + std::abs(a.main)));
        CHECK(std::abs((a.main + a.dual) - (b.main + b.dual)) <
              1e-6 * (1.0 + std::abs(a.main)));
    }
}

TEST_CASE("general identity for Delta = 3 and Delta = 8 forms") {
    auto f = make_plateau(500.0);
    for (auto [a1, b1, c1] : {std::tuple<int64_t, int64_t, int64_t>{1, 1, 1}, {1, 0, 2}}) {
        auto form = make_form(a1, b1, c1);
        auto rep = verify(form, 5, 1, f);
        CHECK(rep.pass);
        CHECK(rep.abs_gap < 1e-5 * std::abs(rep.lhs));
    }
}

TEST_CASE("truncation: tightening the stop target moves the dual less than the certificate") {
    auto q11 = make_form(1, 0, 1);
    auto f = make_plateau(500.0);
    auto base = voronoi_rhs_two_squares(3, 1, f);
    auto tight = voronoi_rhs_two_squares(3, 1, f, nullptr, 1e-4);
    CHECK(std::abs(base.dual - tight.dual) <= base.truncation_bound + 1e-12);
    CHECK(tight.terms_used >= base.terms_used);
}

TEST_CASE("error conditions") {
    auto q11 = make_form(1, 0, 1);
    auto f = make_plateau(300.0);
    CHECK_THROWS_AS(voronoi_rhs_two_squares(4, 1, f), EvenModulus);
    CHECK_THROWS_AS(voronoi_rhs_two_squares(5, 5, f), NotCoprime);
    CHECK_THROWS_AS(voronoi_lhs(q11, 5, 1, analysis::make_bump()), Error);
}
