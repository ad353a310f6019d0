#include "twosq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "twosq/arith.hpp"
#include "twosq/expsums.hpp"
#include "twosq/quadforms.hpp"

namespace twosq::experiments {

namespace {

const quadforms::BinaryQuadraticForm& two_squares_form() {
    static const auto f = quadforms::make_form(1, 0, 1);
    return f;
}

double phi_at(double t) { return analysis::window_eval(analysis::make_bump(), t); }

// G_Q(q,1) at odd prime p is chi_4(p) p; cross-checked by brute force for
// small p.
double gauss_at_prime(int64_t p) {
    double rule = static_cast<double>(arith::chi4(p) * p);
    if (p <= 101) {
        cplx brute = expsums::gauss_sum(two_squares_form(), p, 1);
        if (std::abs(brute - cplx{rule, 0.0}) > 1e-6 * p)
            throw Error("gauss_at_prime: chi4 rule disagrees with brute force");
    }
    return rule;
}

}  // namespace

int64_t ExperimentConfig::gamma_num() const {
    int64_t num = beta_den - beta_num, den = beta_den + beta_num;
    int64_t g = std::gcd(num, den);
    return num / g;
}

int64_t ExperimentConfig::gamma_den() const {
    int64_t num = beta_den - beta_num, den = beta_den + beta_num;
    int64_t g = std::gcd(num, den);
    return den / g;
}

ExperimentConfig make_config(dioph::IrrationalSpec alpha, int64_t a, int64_t q,
                             int64_t beta_num, int64_t beta_den, double epsilon, double C1) {
    if (q < 1) throw InvalidConfig("make_config: q must be positive");
    if (beta_den <= 0 || beta_num <= 0) throw InvalidConfig("make_config: beta must be positive");
    ExperimentConfig cfg;
    cfg.alpha = std::move(alpha);
    cfg.a = a;
    cfg.q = q;
    cfg.beta_num = beta_num;
    cfg.beta_den = beta_den;
    cfg.epsilon = epsilon;
    cfg.C1 = C1;
    if (arith::gcd_i64(2 * a, q) != 1) throw InvalidConfig("make_config: (2a, q) != 1");
    double beta = cfg.beta();
    if (!(beta < 1.0) || !(beta > 1.0 / 3.0 + 6.0 * epsilon))
        throw InvalidConfig("make_config: beta must satisfy 1/3 + 6 eps < beta < 1");
    if (epsilon <= 0.0) throw InvalidConfig("make_config: epsilon must be positive");
    return cfg;
}

double compute_S_direct(const ExperimentConfig& cfg) {
    double X = cfg.X(), L = cfg.L();
    if (X > 1e7) throw LimitExceeded("compute_S_direct: X exceeds 1e7 guard");
    auto two_x = static_cast<std::uint64_t>(std::ceil(2.0 * X)) + 1;
    auto r2 = arith::r2_sieve(two_x);
    auto w = analysis::make_plateau(X);
    int64_t q = cfg.q;
    int64_t abar = arith::mod_inverse(cfg.a, q);
    auto bmax = static_cast<int64_t>(std::floor(L));

    cplx total = parallel_sum(2 * bmax + 1, [&](int64_t i) -> cplx {
        int64_t b = i - bmax;
        if (arith::gcd_i64(b, q) != 1) return {0.0, 0.0};
        double pb = phi_at(static_cast<double>(b) / L);
        if (pb == 0.0) return {0.0, 0.0};
        int64_t c = mod_floor(abar * mod_floor(b, q), q);
        auto n0 = static_cast<int64_t>(std::ceil(X));
        n0 += mod_floor(c - n0, q);
        double inner = 0.0;
        for (int64_t n = n0; n <= static_cast<int64_t>(2.0 * X); n += q) {
            int64_t r = r2[static_cast<std::size_t>(n - 1)];
            if (r == 0) continue;
            inner += static_cast<double>(r) * analysis::window_eval(w, static_cast<double>(n));
        }
        return {pb * inner, 0.0};
    });
    return total.real();
}

namespace {

double euler_product_factor(int64_t q) {
    double prod = 1.0;
    for (auto [p, e] : arith::factorize(static_cast<std::uint64_t>(q)).factors) {
        (void)e;
        auto pp = static_cast<int64_t>(p);
        prod *= 1.0 - gauss_at_prime(pp) / (static_cast<double>(pp) * static_cast<double>(pp));
    }
    return prod;
}

double exact_b_sum(const ExperimentConfig& cfg) {
    double L = cfg.L();
    auto bmax = static_cast<int64_t>(std::floor(L));
    double B = 0.0;
    for (int64_t b = -bmax; b <= bmax; ++b) {
        if (arith::gcd_i64(b, cfg.q) != 1) continue;
        B += phi_at(static_cast<double>(b) / L);
    }
    return B;
}

}  // namespace

double compute_T1(const ExperimentConfig& cfg) {
    auto w = analysis::make_plateau(cfg.X());
    double intw = analysis::window_integral(w).value.real();
    return M_PI / static_cast<double>(cfg.q) * intw * exact_b_sum(cfg) * euler_product_factor(cfg.q);
}

double compute_T1_smoothed(const ExperimentConfig& cfg) {
    auto w = analysis::make_plateau(cfg.X());
    double intw = analysis::window_integral(w).value.real();
    double phihat0 = analysis::fourier_transform(analysis::make_bump(), 0.0).value.real();
    double q = static_cast<double>(cfg.q);
    double phi_q = static_cast<double>(arith::euler_phi(static_cast<std::uint64_t>(cfg.q)));
    return M_PI * phihat0 * cfg.L() * phi_q / (q * q) * euler_product_factor(cfg.q) * intw;
}

T2Result compute_T2_spectral(const ExperimentConfig& cfg) {
    double X = cfg.X(), L = cfg.L();
    if (X > 1e7) throw LimitExceeded("compute_T2_spectral: X exceeds 1e7 guard");
    int64_t q = cfg.q;
    auto w = analysis::make_plateau(X);
    double T1_scale = std::abs(compute_T1(cfg));

    auto divs = arith::divisors(static_cast<std::uint64_t>(q));
    T2Result out;
    KahanSum total;

    // lazily extended r2 sieve shared across divisors
    std::vector<std::uint16_t> r2;
    auto ensure_r2 = [&](int64_t n) {
        if (static_cast<int64_t>(r2.size()) < n)
            r2 = arith::r2_sieve(static_cast<std::uint64_t>(std::max<int64_t>(2 * n, 4096)));
    };

    for (auto kd : divs) {
        auto k = static_cast<int64_t>(kd);
        cplx G = (k <= 2000) ? expsums::gauss_sum(two_squares_form(), k, 1)
                             : cplx{static_cast<double>(arith::chi4(k) * k), 0.0};

        // K_k(n) = sum_t B_t S(n, c t; k) = sum*_x e_k(n x) D(c xbar) with
        // D(y) = sum_t B_t e_k(t y) and B_t the Phi-mass of b == t (mod k)
        auto roots = root_table(k);
        std::vector<double> B(static_cast<std::size_t>(k), 0.0);
        auto bmax = static_cast<int64_t>(std::floor(L));
        for (int64_t b = -bmax; b <= bmax; ++b) {
            if (arith::gcd_i64(b, q) != 1) continue;
            double pb = phi_at(static_cast<double>(b) / L);
            if (pb != 0.0) B[static_cast<std::size_t>(mod_floor(b, k))] += pb;
        }
        std::vector<cplx> D(static_cast<std::size_t>(k));
        parallel_for(k, [&](int64_t y) {
            KahanSum acc;
            for (int64_t t = 0; t < k; ++t) {
                if (B[static_cast<std::size_t>(t)] == 0.0) continue;
                acc.add(B[static_cast<std::size_t>(t)] * roots[static_cast<std::size_t>(mod_floor(t * y, k))]);
            }
            D[static_cast<std::size_t>(y)] = acc.value();
        });
        std::vector<int64_t> units, unit_inv_times_c;
        int64_t c = 0;
        if (k > 1) {
            int64_t D0bar = arith::mod_inverse(4, k);
            int64_t abar = arith::mod_inverse(cfg.a, k);
            c = mod_floor(D0bar * abar, k);
            for (int64_t x = 1; x < k; ++x)
                if (arith::gcd_i64(x, k) == 1) {
                    units.push_back(x);
                    unit_inv_times_c.push_back(mod_floor(c * arith::mod_inverse(x, k), k));
                }
        }
        double pref = M_PI / static_cast<double>(q) * 1.0 / static_cast<double>(k);

        auto Kk = [&](int64_t n) -> cplx {
            if (k == 1) return {std::accumulate(B.begin(), B.end(), 0.0), 0.0};
            KahanSum acc;
            int64_t nm = mod_floor(n, k);
            for (std::size_t i = 0; i < units.size(); ++i) {
                cplx ex = roots[static_cast<std::size_t>(mod_floor(nm * units[i], k))];
                acc.add(ex * D[static_cast<std::size_t>(unit_inv_times_c[i])]);
            }
            return acc.value();
        };

        // dual-style summation over n with checkpoint doubling
        analysis::BesselTransformCache cache(w, kTwoPi / static_cast<double>(k));
        KahanSum ksum;
        double kquad = 0.0;
        double target = 1e-6 * std::max(T1_scale, 1e-12) /
                        static_cast<double>(divs.size());
        double Xeff = std::pow(X, 1.0 - cfg.epsilon);
        int64_t n_min = 32 + static_cast<int64_t>(8.0 * static_cast<double>(k) * k / Xeff);
        int64_t block_lo = 1, block_hi = 16;
        int stable = 0;
        int64_t terms = 0, n_stop = 0;
        double movement = 0.0;
        for (;;) {
            cache.ensure(block_hi - 1);
            ensure_r2(block_hi);
            cplx before = ksum.value();
            for (int64_t n = block_lo; n < block_hi; ++n) {
                int64_t r = r2[static_cast<std::size_t>(n - 1)];
                if (r == 0) continue;
                cplx kv = Kk(n);
                double wt = static_cast<double>(r) / static_cast<double>(k);  // w~ = I_n / k
                ksum.add(pref * G * wt * cache.value(n) * kv);
                kquad += std::abs(pref * G * wt * kv) * cache.error(n);
            }
            terms += block_hi - block_lo;
            movement = std::abs(ksum.value() - before);
            if (block_hi >= n_min) {
                stable = (movement < target) ? stable + 1 : 0;
                if (stable >= 2) {
                    n_stop = block_hi - 1;
                    break;
                }
            }
            if (block_hi > (1 << 22))
                throw ToleranceNotMet("compute_T2_spectral: n-sum failed to stabilize");
            block_lo = block_hi;
            block_hi *= 2;
        }
        total.add(ksum.value());
        out.quad_error += kquad;
        out.terms += terms;
        out.tail_movement += movement;

        // certified j-decay tail: |K| <= sum_t |B_t| phi(k), r2 <= 6 sqrt(n)
        double Bmass = std::accumulate(B.begin(), B.end(), 0.0);
        double phik = static_cast<double>(k == 1 ? 1 : units.size());
        double rmult = (M_PI / static_cast<double>(q)) * std::abs(G) / static_cast<double>(k) *
                       Bmass * phik * 6.0 / static_cast<double>(k);
        double best = std::numeric_limits<double>::infinity();
        double beta_coeff = kTwoPi / static_cast<double>(k);
        for (int j = 5; j <= 12; ++j) {
            double geom = std::pow(2.0 * std::sqrt(2.0) /
                                       (beta_coeff * std::sqrt(static_cast<double>(n_stop) * X)), j);
            double per = analysis::profile_derivative_sup(w.kind, j) * X * geom;
            best = std::min(best, rmult * per * std::pow(static_cast<double>(n_stop), 1.5) * 2.0 / (j - 3));
        }
        out.truncation_bound += best;
        char line[160];
        std::snprintf(line, sizeof(line),
                      "k=%lld terms=%lld n_stop=%lld partial=%.6e movement=%.3e",
                      static_cast<long long>(k), static_cast<long long>(terms),
                      static_cast<long long>(n_stop), ksum.value().real(), movement);
        out.per_k.emplace_back(line);
    }
    cplx v = total.value();
    if (std::abs(v.imag()) > 1e-6 * (1.0 + std::abs(v.real())))
        throw Error("compute_T2_spectral: nonreal total");
    out.value = v.real();
    return out;
}

ExperimentReport verify_decomposition(const ExperimentConfig& cfg, bool with_count) {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    rep.a = cfg.a;
    rep.q = cfg.q;
    rep.beta = cfg.beta();
    rep.epsilon = cfg.epsilon;
    rep.L = cfg.L();
    rep.X = cfg.X();
    rep.gamma = cfg.gamma();
    rep.threads = thread_count();

    rep.S_direct = compute_S_direct(cfg);
    rep.T1_closed = compute_T1(cfg);
    rep.T1_smoothed = compute_T1_smoothed(cfg);
    auto t2 = compute_T2_spectral(cfg);
    rep.T2_spectral = t2.value;
    rep.truncation_bound_certified = t2.truncation_bound;

    rep.ratio_S_over_T1 = rep.S_direct / rep.T1_smoothed;
    rep.identity_gap = std::abs(rep.S_direct - rep.T1_closed - rep.T2_spectral);
    rep.gap_budget = t2.quad_error + 8.0 * t2.tail_movement + 1e-12 * std::abs(rep.T1_closed);

    double lnq = std::log(static_cast<double>(cfg.q));
    rep.lower_bound_witness = (cfg.q == 1) ? 0.0 : rep.X * rep.L / (cfg.q * lnq * lnq);
    rep.upper_bound_witness = rep.X * rep.L / cfg.q;
    double C = cfg.slack_C;
    rep.bounds_pass =
        (rep.lower_bound_witness <= C * rep.S_direct) && (rep.S_direct <= C * rep.upper_bound_witness);

    double tol = std::max(1e-4 * std::abs(rep.T1_closed), rep.gap_budget);
    rep.identity_pass = rep.identity_gap <= tol;
    if (!rep.identity_pass) {
        std::string diag = "verify_decomposition: |S - T1 - T2| = " + std::to_string(rep.identity_gap) +
                           " exceeds tolerance " + std::to_string(tol);
        for (const auto& line : t2.per_k) diag += "\n  " + line;
        throw DecompositionMismatch(diag);
    }

    if (with_count) {
        dioph::BigRat c1(static_cast<long long>(std::llround(cfg.C1 * 1e6)), 1000000LL);
        rep.count_A = count_approximants(cfg.alpha, rep.X, c1, cfg.gamma_num(), cfg.gamma_den());
    }
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

std::vector<int64_t> approximants_impl(const dioph::IrrationalSpec& alpha, double X,
                                       const dioph::BigRat& C1, int64_t gnum, int64_t gden) {
    if (!(X >= 1.0)) throw Error("count_approximants: X must be >= 1");
    if (X > 5e7) throw LimitExceeded("count_approximants: X exceeds guard");
    auto two_x = static_cast<int64_t>(std::floor(2.0 * X));
    auto r2 = arith::r2_sieve(static_cast<std::uint64_t>(two_x));
    std::vector<std::uint8_t> in_set(static_cast<std::size_t>(two_x), 0);
    parallel_for(two_x, [&](int64_t i) {
        int64_t n = i + 1;
        if (r2[static_cast<std::size_t>(i)] == 0) return;
        if (dioph::dist_below_threshold(alpha, n, C1, gnum, gden)) in_set[static_cast<std::size_t>(i)] = 1;
    });
    std::vector<int64_t> out;
    for (int64_t i = 0; i < two_x; ++i)
        if (in_set[static_cast<std::size_t>(i)]) out.push_back(i + 1);
    return out;
}

}  // namespace

int64_t count_approximants(const dioph::IrrationalSpec& alpha, double X, const dioph::BigRat& C1,
                           int64_t gnum, int64_t gden) {
    return static_cast<int64_t>(approximants_impl(alpha, X, C1, gnum, gden).size());
}

std::vector<int64_t> approximant_list(const dioph::IrrationalSpec& alpha, double X,
                                      const dioph::BigRat& C1, int64_t gnum, int64_t gden) {
    return approximants_impl(alpha, X, C1, gnum, gden);
}

std::vector<ScalingRow> scaling_study(const dioph::IrrationalSpec& alpha, int64_t beta_num,
                                      int64_t beta_den, const std::vector<dioph::RationalApprox>& pairs,
                                      double epsilon, bool with_count) {
    std::vector<ScalingRow> rows;
    for (const auto& pr : pairs) {
        auto cfg = make_config(alpha, pr.a, pr.q, beta_num, beta_den, epsilon);
        auto rep = verify_decomposition(cfg, with_count);
        ScalingRow row;
        row.q = pr.q;
        row.X = rep.X;
        row.S_over_T1 = rep.ratio_S_over_T1;
        row.count_A = rep.count_A;
        row.X_ref = std::pow(rep.X, 1.0 - rep.gamma);
        row.report = rep;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace twosq::experiments
