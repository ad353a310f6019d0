#include "twosq/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "twosq/arith.hpp"
#include "twosq/expsums.hpp"

namespace twosq::voronoi {

namespace {

bool is_two_squares_form(const BinaryQuadraticForm& f) {
    return f.a1 == 1 && f.b1 == 0 && f.c1 == 1;
}

// representation counts of the form given by (a, b, c) over [1, cap]
std::vector<int64_t> rep_counts(int64_t a, int64_t b, int64_t c, int64_t cap) {
    std::vector<int64_t> counts(static_cast<std::size_t>(cap), 0);
    int64_t D = 4 * a * c - b * b;
    auto xmax = static_cast<int64_t>(std::sqrt(
                    4.0 * static_cast<double>(c) * static_cast<double>(cap) / static_cast<double>(D))) + 2;
    for (int64_t x = -xmax; x <= xmax; ++x) {
        double disc = static_cast<double>(4 * c) * static_cast<double>(cap) -
                      static_cast<double>(D) * static_cast<double>(x) * static_cast<double>(x);
        if (disc < 0) continue;
        double s = std::sqrt(disc);
        auto ylo = static_cast<int64_t>(std::ceil((-static_cast<double>(b * x) - s) / (2.0 * c))) - 1;
        auto yhi = static_cast<int64_t>(std::floor((-static_cast<double>(b * x) + s) / (2.0 * c))) + 1;
        for (int64_t y = ylo; y <= yhi; ++y) {
            int64_t n = a * x * x + b * x * y + c * y * y;
            if (n >= 1 && n <= cap) ++counts[static_cast<std::size_t>(n - 1)];
        }
    }
    return counts;
}

struct DualOutcome {
    cplx    total{0.0, 0.0};
    double  quad_error = 0.0;
    double  tail_movement = 0.0;
    int64_t terms = 0;
    int64_t n_stop = 0;
};

// Checkpointed dual summation over a shared integral cache: blocks [B, 2B)
// double until the partial sum moves by less than `target` twice in a row
// past n_min.  coef(n) supplies the arithmetic factor of I_n.
DualOutcome dual_sum(analysis::BesselTransformCache& cache,
                     const std::function<cplx(int64_t)>& coef, double target, int64_t n_min,
                     int64_t n_cap) {
    DualOutcome out;
    KahanSum total;
    int64_t block_lo = 1, block_hi = 16;
    int stable = 0;
    for (;;) {
        cache.ensure(block_hi - 1);
        cplx before = total.value();
        for (int64_t n = block_lo; n < block_hi; ++n) {
            cplx c = coef(n);
            if (c == cplx{0.0, 0.0}) continue;
            total.add(c * cache.value(n));
            out.quad_error += std::abs(c) * cache.error(n);
        }
        out.terms += block_hi - block_lo;
        double movement = std::abs(total.value() - before);
        if (block_hi >= n_min) {
            stable = (movement < target) ? stable + 1 : 0;
            if (stable >= 2) {
                out.tail_movement = movement;
                out.n_stop = block_hi - 1;
                break;
            }
        }
        if (block_hi > n_cap)
            throw ToleranceNotMet("dual_sum: partial sums failed to stabilize below the term cap");
        block_lo = block_hi;
        block_hi *= 2;
    }
    out.total = total.value();
    return out;
}

// closed-form j-decay bound on sum_{n > N} rmult sqrt(n) |I_n|, minimized
// over the available integration-by-parts orders
double tail_bound_after(const SmoothWindow& f, double beta_coeff, double rmult, int64_t N) {
    double X = f.support_lo();
    double best = std::numeric_limits<double>::infinity();
    for (int j = 5; j <= 12; ++j) {
        double geom = std::pow(
            2.0 * std::sqrt(2.0) / (beta_coeff * std::sqrt(static_cast<double>(N)) * std::sqrt(X)), j);
        double per_at_N = analysis::profile_derivative_sup(f.kind, j) * X * geom;
        // sum_{n>N} sqrt(n) (n/N)^{-j/2} <= N^{3/2} * 2/(j-3) by the integral test
        double tail = rmult * per_at_N * std::pow(static_cast<double>(N), 1.5) * 2.0 / (j - 3);
        best = std::min(best, tail);
    }
    return best;
}

int64_t stop_threshold(int64_t k, int64_t Delta0, const SmoothWindow& f) {
    // dual terms only start decaying past n ~ Delta0 k^2 / (4 X^{1-eps});
    // eps fixed at 0.1 in this heuristic
    double Xeff = std::pow(f.support_lo(), 0.9);
    return 32 + static_cast<int64_t>(2.0 * static_cast<double>(Delta0) *
                                     static_cast<double>(k) * static_cast<double>(k) / Xeff);
}

}  // namespace

cplx voronoi_lhs(const BinaryQuadraticForm& form, int64_t k, int64_t h, const SmoothWindow& f) {
    if (k <= 0) throw Error("voronoi_lhs: k must be positive");
    if (arith::gcd_i64(h, k) != 1) throw NotCoprime("voronoi_lhs: gcd(h,k) != 1");
    if (f.kind == analysis::WindowKind::bump_phi)
        throw Error("voronoi_lhs: f must have positive support");
    auto hi = static_cast<int64_t>(std::ceil(f.support_hi()));
    auto counts = rep_counts(form.a1, form.b1, form.c1, hi);
    auto roots = root_table(k);
    int64_t hm = mod_floor(h, k);
    return parallel_sum(hi, [&](int64_t i) -> cplx {
        int64_t n = 1 + i;
        int64_t r = counts[static_cast<std::size_t>(i)];
        if (r == 0) return {0.0, 0.0};
        double w = analysis::window_eval(f, static_cast<double>(n));
        if (w == 0.0) return {0.0, 0.0};
        return static_cast<double>(r) * w * roots[static_cast<std::size_t>(mod_floor(n % k * hm, k))];
    });
}

RhsResult voronoi_rhs_two_squares(int64_t k, int64_t h, const SmoothWindow& f,
                                  analysis::BesselTransformCache* cache, double tail_target_scale) {
    if (k <= 0) throw Error("voronoi_rhs_two_squares: k must be positive");
    if (k % 2 == 0) throw EvenModulus("voronoi_rhs_two_squares: k must be odd");
    if (arith::gcd_i64(h, k) != 1) throw NotCoprime("voronoi_rhs_two_squares: gcd(h,k) != 1");
    if (f.kind == analysis::WindowKind::bump_phi)
        throw Error("voronoi_rhs_two_squares: f must have positive support");

    auto form = quadforms::make_form(1, 0, 1);
    cplx G = expsums::gauss_sum(form, k, 1);
    auto intf = analysis::window_integral(f);
    double pref = M_PI / (static_cast<double>(k) * static_cast<double>(k));

    RhsResult res;
    res.main = pref * G * intf.value;
    res.quadrature_error = pref * std::abs(G) * intf.abs_error_estimate;

    int64_t D0bar = (k == 1) ? 0 : arith::mod_inverse(4, k);
    int64_t hbar = (k == 1) ? 0 : arith::mod_inverse(h, k);
    int64_t tw_mult = (k == 1) ? 0 : mod_floor(hbar * D0bar, k);
    auto roots = root_table(k);

    std::vector<std::uint16_t> r2;
    auto ensure_r2 = [&](int64_t n) {
        if (static_cast<int64_t>(r2.size()) < n) r2 = arith::r2_sieve(static_cast<std::uint64_t>(2 * n));
    };

    double beta_coeff = kTwoPi / static_cast<double>(k);
    analysis::BesselTransformCache local(f, beta_coeff);
    analysis::BesselTransformCache& ic = cache ? *cache : local;

    auto coef = [&](int64_t n) -> cplx {
        ensure_r2(n);
        int64_t r = r2[static_cast<std::size_t>(n - 1)];
        if (r == 0) return {0.0, 0.0};
        cplx tw = roots[static_cast<std::size_t>(mod_floor(-tw_mult * (n % k), k))];
        return pref * G * static_cast<double>(r) * tw;
    };

    double target = 2e-8 * tail_target_scale * std::max(std::abs(res.main), 1e-9 * f.support_lo());
    auto acc = dual_sum(ic, coef, target, stop_threshold(k, 4, f), 1 << 22);
    res.dual = acc.total;
    res.quadrature_error += acc.quad_error;
    res.tail_movement = acc.tail_movement;
    res.terms_used = acc.terms;
    res.truncation_bound = tail_bound_after(f, beta_coeff, pref * std::abs(G) * 6.0, acc.n_stop);
    return res;
}

RhsResult voronoi_rhs_general(const BinaryQuadraticForm& form, int64_t k, int64_t h,
                              const SmoothWindow& f, analysis::BesselTransformCache* cache,
                              double tail_target_scale) {
    if (k <= 0) throw Error("voronoi_rhs_general: k must be positive");
    if (arith::gcd_i64(h, k) != 1) throw NotCoprime("voronoi_rhs_general: gcd(h,k) != 1");
    if (f.kind == analysis::WindowKind::bump_phi)
        throw Error("voronoi_rhs_general: f must have positive support");

    auto sf = quadforms::star_form(form, k);
    const auto& split = sf.split;
    if (arith::gcd_i64(split.Delta0, split.k1) != 1)
        throw NoValidInverse("voronoi_rhs_general: Delta0 not invertible mod k1");
    // Dbar0 = delta1 * t is the inverse of Delta0 mod k1 divisible by delta1
    int64_t t = (split.k1 == 1)
                    ? 0
                    : arith::mod_inverse(mod_floor(split.delta1 * split.Delta0, split.k1), split.k1);
    int64_t hbar = (split.k1 == 1) ? 0 : arith::mod_inverse(h, split.k1);
    int64_t tw_mult = (split.k1 == 1) ? 0 : mod_floor(hbar * t, split.k1);

    cplx Gkh = expsums::gauss_sum(form, k, h);
    auto intf = analysis::window_integral(f);
    double sqrtD = std::sqrt(static_cast<double>(form.Delta));

    RhsResult res;
    double main_pref = kTwoPi / (sqrtD * static_cast<double>(k) * static_cast<double>(k));
    res.main = main_pref * Gkh * intf.value;
    res.quadrature_error = main_pref * std::abs(Gkh) * intf.abs_error_estimate;

    double dual_pref = kTwoPi / (static_cast<double>(k) * sqrtD);
    auto roots_k1 = root_table(std::max<int64_t>(split.k1, 1));

    // delta1 = 1 collapses the y-twist, leaving r~ = k^{-1} G_Q(k,h) r_{Q*}(n)
    bool fast = (split.delta1 == 1);
    int64_t astar = sf.Astar(0, 0) / 2, bstar = sf.Astar(0, 1), cstar = sf.Astar(1, 1) / 2;
    std::vector<int64_t> rq_star;
    auto ensure_rq = [&](int64_t n) {
        if (static_cast<int64_t>(rq_star.size()) < n)
            rq_star = rep_counts(astar, bstar, cstar, 2 * n);
    };

    double beta_coeff =
        2.0 * kTwoPi / (std::sqrt(static_cast<double>(split.Delta0)) * static_cast<double>(k));
    analysis::BesselTransformCache local(f, beta_coeff);
    analysis::BesselTransformCache& ic = cache ? *cache : local;

    auto coef = [&](int64_t n) -> cplx {
        cplx rt;
        if (fast) {
            ensure_rq(n);
            int64_t r = rq_star[static_cast<std::size_t>(n - 1)];
            if (r == 0) return {0.0, 0.0};
            rt = Gkh * (static_cast<double>(r) / static_cast<double>(k));
        } else {
            rt = expsums::r_tilde(form, n, k, h);
            if (rt == cplx{0.0, 0.0}) return {0.0, 0.0};
        }
        cplx tw = (split.k1 == 1)
                      ? cplx{1.0, 0.0}
                      : roots_k1[static_cast<std::size_t>(mod_floor(-tw_mult * (n % split.k1), split.k1))];
        return dual_pref * rt * tw;
    };

    double target = 2e-8 * tail_target_scale * std::max(std::abs(res.main), 1e-9 * f.support_lo());
    auto acc = dual_sum(ic, coef, target, stop_threshold(k, split.Delta0, f), 1 << 22);
    res.dual = acc.total;
    res.quadrature_error += acc.quad_error;
    res.tail_movement = acc.tail_movement;
    res.terms_used = acc.terms;
    // r_{Q*}(n) <= (8 sqrt(c*/D*) + 3) sqrt(n)
    double rq_const =
        8.0 * std::sqrt(static_cast<double>(cstar) / static_cast<double>(4 * astar * cstar - bstar * bstar)) + 3.0;
    res.truncation_bound = tail_bound_after(
        f, beta_coeff, dual_pref * rq_const * std::abs(Gkh) / static_cast<double>(k), acc.n_stop);
    return res;
}

VoronoiReport verify(const BinaryQuadraticForm& form, int64_t k, int64_t h, const SmoothWindow& f,
                     analysis::BesselTransformCache* cache) {
    VoronoiReport rep;
    rep.lhs = voronoi_lhs(form, k, h, f);
    RhsResult rhs = (is_two_squares_form(form) && k % 2 == 1)
                        ? voronoi_rhs_two_squares(k, h, f, cache)
                        : voronoi_rhs_general(form, k, h, f, cache);
    rep.rhs_main = rhs.main;
    rep.rhs_dual = rhs.dual;
    rep.rhs_truncation_bound = rhs.truncation_bound;
    rep.tail_movement = rhs.tail_movement;
    rep.quadrature_error = rhs.quadrature_error;
    rep.terms_used = rhs.terms_used;
    rep.abs_gap = std::abs(rep.lhs - rhs.main - rhs.dual);
    rep.pass = rep.abs_gap <=
               std::max(1e-6 * std::abs(rep.lhs), rhs.truncation_bound + rhs.quadrature_error);
    return rep;
}

}  // namespace twosq::voronoi
