#include "doctest.h"

#include <cmath>

#include "twosq/analysis.hpp"
#include "twosq/arith.hpp"
#include "twosq/experiments.hpp"

using namespace twosq;
using namespace twosq::experiments;

namespace {

ExperimentConfig cfg_29_06() {
    return make_config(dioph::make_sqrt(2), 41, 29, 3, 5, 0.02);
}

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(make_config(dioph::make_sqrt(2), 2, 4, 3, 5, 0.02), InvalidConfig);   // (2a,q) != 1
    CHECK_THROWS_AS(make_config(dioph::make_sqrt(2), 41, 29, 1, 2, 0.1), InvalidConfig);  // beta < 1/3 + 6 eps
    CHECK_THROWS_AS(make_config(dioph::make_sqrt(2), 41, 29, 7, 5, 0.02), InvalidConfig); // beta >= 1
    auto cfg = make_config(dioph::make_sqrt(2), 41, 29, 1, 2, 0.02);
    CHECK(cfg.gamma_num() == 1);
    CHECK(cfg.gamma_den() == 3);
    auto c2 = make_config(dioph::make_sqrt(2), 41, 29, 2, 5, 0.02);
    CHECK(c2.gamma_num() == 3);
    CHECK(c2.gamma_den() == 7);
}

TEST_CASE("S_direct matches the externally computed value") {
    // frozen from an independent implementation of the same finite sum
    double S = compute_S_direct(cfg_29_06());
    CHECK(S > 0.0);
    CHECK(std::abs(S - 117.08945436483289) < 1e-6 * S);
}

TEST_CASE("T1 closed form matches the externally computed value") {
    double T1 = compute_T1(cfg_29_06());
    CHECK(std::abs(T1 - 138.98080515618244) < 2e-6 * T1);
    // plateau-indicator comparison: replacing w by its plateau indicator
    // moves S by at most the Phi-weighted r2 mass of the ramps
    auto cfg = cfg_29_06();
    double X = cfg.X(), L = cfg.L();
    auto r2 = arith::r2_sieve(static_cast<std::uint64_t>(2 * X) + 2);
    auto w = analysis::make_plateau(X);
    int64_t abar = arith::mod_inverse(cfg.a, cfg.q);
    double s_ind = 0.0, ramp_mass = 0.0;
    auto bmax = static_cast<int64_t>(std::floor(L));
    for (int64_t b = -bmax; b <= bmax; ++b) {
        if (arith::gcd_i64(b, cfg.q) != 1) continue;
        double pb = analysis::window_eval(analysis::make_bump(), static_cast<double>(b) / L);
        if (pb == 0.0) continue;
        int64_t c = mod_floor(abar * mod_floor(b, cfg.q), cfg.q);
        auto n0 = static_cast<int64_t>(std::ceil(X));
        n0 += mod_floor(c - n0, cfg.q);
        for (int64_t n = n0; n <= static_cast<int64_t>(2 * X); n += cfg.q) {
            auto r = static_cast<double>(r2[static_cast<std::size_t>(n - 1)]);
            if (r == 0.0) continue;
            bool plateau = (n >= 1.25 * X && n <= 1.75 * X);
            if (plateau) s_ind += pb * r;
            else ramp_mass += pb * r * 1.0;
        }
    }
    double S = compute_S_direct(cfg);
    CHECK(std::abs(S - s_ind) <= ramp_mass + 1e-9);
}

TEST_CASE("T1 Euler factors at q = 9 and q = 1") {
    auto cfg9 = make_config(dioph::make_sqrt(2), 1, 9, 3, 5, 0.02);
    double intw = analysis::window_integral(analysis::make_plateau(cfg9.X())).value.real();
    double B9 = 0.0;
    auto bmax = static_cast<int64_t>(std::floor(cfg9.L()));
    for (int64_t b = -bmax; b <= bmax; ++b) {
        if (arith::gcd_i64(b, 9) != 1) continue;
        B9 += analysis::window_eval(analysis::make_bump(), static_cast<double>(b) / cfg9.L());
    }
    double expect = M_PI / 9.0 * intw * B9 * (1.0 + 1.0 / 3.0);  // G(3,1) = -3
    CHECK(std::abs(compute_T1(cfg9) - expect) < 1e-9 * expect);

    auto cfg1 = make_config(dioph::make_sqrt(2), 1, 1, 3, 5, 0.02);
    double intw1 = analysis::window_integral(analysis::make_plateau(cfg1.X())).value.real();
    double B1 = 0.0;
    for (int64_t b = -1; b <= 1; ++b)
        B1 += analysis::window_eval(analysis::make_bump(), static_cast<double>(b) / cfg1.L());
    CHECK(std::abs(compute_T1(cfg1) - M_PI * intw1 * B1) < 1e-9 * compute_T1(cfg1));
}

TEST_CASE("decomposition oracle: S = T1 + T2 by disjoint routes") {
    auto rep = verify_decomposition(cfg_29_06());
    CHECK(rep.identity_pass);
    CHECK(rep.identity_gap <= 1e-4 * std::abs(rep.T1_closed));
    CHECK(rep.bounds_pass);
    CHECK(rep.S_direct > 0.0);
    // the smoothed main term is the right scale but not exact
    CHECK(rep.ratio_S_over_T1 > 0.5);
    CHECK(rep.ratio_S_over_T1 < 2.0);
}

TEST_CASE("decomposition oracle at beta = 1/2") {
    auto cfg = make_config(dioph::make_sqrt(2), 41, 29, 1, 2, 0.02);
    auto rep = verify_decomposition(cfg);
    CHECK(rep.identity_pass);
    CHECK(rep.identity_gap <= 1e-4 * std::abs(rep.T1_closed));
}

TEST_CASE("count_approximants: small-X brute force cross-check") {
    auto alpha = dioph::make_sqrt(2);
    // exhaustive double-precision scan is a valid oracle when no distance is
    // within 1e-6 of its threshold (checked inside the loop)
    for (double X : {25.0, 50.0}) {
        auto got = approximant_list(alpha, X, dioph::BigRat(1), 1, 2);
        std::vector<int64_t> expect;
        auto r2 = arith::r2_sieve(static_cast<std::uint64_t>(2 * X));
        for (int64_t n = 1; n <= static_cast<int64_t>(2 * X); ++n) {
            if (r2[static_cast<std::size_t>(n - 1)] == 0) continue;
            double v = n * std::sqrt(2.0);
            double dist = std::abs(v - std::round(v));
            double thr = 1.0 / std::sqrt(static_cast<double>(n));
            REQUIRE(std::abs(dist - thr) > 1e-6);
            if (dist < thr) expect.push_back(n);
        }
        CHECK(got == expect);
    }
}

TEST_CASE("count_approximants: monotonicity and degenerate threshold") {
    auto alpha = dioph::make_sqrt(2);
    auto c_small = count_approximants(alpha, 1e3, dioph::BigRat(1), 1, 2);
    auto c_big = count_approximants(alpha, 1e4, dioph::BigRat(1), 1, 2);
    CHECK(c_small > 0);
    CHECK(c_big >= c_small);
    CHECK(count_approximants(alpha, 1e3, dioph::BigRat(0), 1, 2) == 0);
    auto c_loose = count_approximants(alpha, 1e3, dioph::BigRat(2), 1, 2);
    CHECK(c_loose >= c_small);
    // C1 large enough that the threshold exceeds 1/2 everywhere: every
    // representable n counts
    auto c_all = count_approximants(alpha, 100.0, dioph::BigRat(100), 1, 2);
    int64_t reps = 0;
    auto r2 = arith::r2_sieve(200);
    for (auto v : r2) reps += (v > 0);
    CHECK(c_all == reps);
}

TEST_CASE("counted approximants re-verify individually") {
    auto alpha = dioph::make_sqrt(2);
    auto list = approximant_list(alpha, 2000.0, dioph::BigRat(1), 1, 2);
    CHECK(!list.empty());
    for (int64_t n : list) {
        CHECK(arith::r2(static_cast<uint64_t>(n)) > 0);
        CHECK(dioph::dist_below_threshold(alpha, n, dioph::BigRat(1), 1, 2));
    }
}

TEST_CASE("reproducibility across thread counts") {
    auto alpha = dioph::make_sqrt(2);
    int saved = thread_count();
    set_thread_count(1);
    auto c1 = count_approximants(alpha, 5e3, dioph::BigRat(1), 1, 2);
    auto s1 = compute_S_direct(cfg_29_06());
    set_thread_count(8);
    auto c8 = count_approximants(alpha, 5e3, dioph::BigRat(1), 1, 2);
    auto s8 = compute_S_direct(cfg_29_06());
    set_thread_count(saved);
    CHECK(c1 == c8);
    CHECK(s1 == s8);  // bit-identical by the fixed chunk grid
}

TEST_CASE("scaling study produces rows") {
    auto alpha = dioph::make_sqrt(2);
    auto pairs = dioph::theorem_pairs(alpha, 1, 40);
    REQUIRE(!pairs.empty());
    std::vector<dioph::RationalApprox> chosen;
    for (const auto& p : pairs)
        if (p.q >= 5) chosen.push_back(p);
    auto rows = scaling_study(alpha, 3, 5, chosen, 0.02);
    CHECK(rows.size() == chosen.size());
    for (const auto& row : rows) {
        CHECK(row.report.identity_pass);
        CHECK(row.X_ref > 0.0);
    }
}
