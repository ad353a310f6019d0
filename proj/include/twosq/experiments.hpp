// End-to-end computations of the smoothed congruence sum S, its main term
// T1 (closed form) and error term T2 (spectral: Gauss sums, Kloosterman
// sums, Bessel transforms), the decomposition check S = T1 + T2, and the
// exact approximant-set count.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twosq/analysis.hpp"
#include "twosq/dioph.hpp"
#include "twosq/util.hpp"

namespace twosq::experiments {

using std::int64_t;

struct ExperimentConfig {
    dioph::IrrationalSpec alpha;
    int64_t a = 1;
    int64_t q = 1;
    // beta kept as an exact rational so gamma = (1-beta)/(1+beta) is exact
    int64_t beta_num = 3, beta_den = 5;
    double  epsilon = 0.1;
    double  C1 = 1.0;
    double  slack_C = 50.0;

    double beta() const { return static_cast<double>(beta_num) / static_cast<double>(beta_den); }
    double L() const { return std::pow(static_cast<double>(q), beta()); }
    double X() const { return std::pow(static_cast<double>(q), 1.0 + beta()); }
    // gamma = (beta_den - beta_num) / (beta_den + beta_num), in lowest terms
    int64_t gamma_num() const;
    int64_t gamma_den() const;
    double  gamma() const { return static_cast<double>(gamma_num()) / static_cast<double>(gamma_den()); }
};

// Validates gcd(2a, q) = 1 and 1/3 + 6 eps < beta < 1; throws InvalidConfig.
ExperimentConfig make_config(dioph::IrrationalSpec alpha, int64_t a, int64_t q,
                             int64_t beta_num, int64_t beta_den, double epsilon = 0.1,
                             double C1 = 1.0);

// S = sum_{(b,q)=1} Phi(b/L) sum_{n == abar b (q)} r2(n) w(n), exact double
// loop over arithmetic progressions in [X, 2X].  Guard: X <= 1e7.
double compute_S_direct(const ExperimentConfig& cfg);

// Closed form (pi/q) (int w) B_q prod_{p|q} (1 - G_Q(p,1)/p^2) with the
// b-sum B_q = sum_{(b,q)=1} Phi(b/L) evaluated exactly.
double compute_T1(const ExperimentConfig& cfg);

// The smoothed variant with B_q replaced by L Phihat(0) phi(q)/q; carries
// the asymptotic main-term shape used for the S/T1 trend.
double compute_T1_smoothed(const ExperimentConfig& cfg);

struct T2Result {
    double  value = 0.0;
    double  truncation_bound = 0.0;   // certified j-decay tail bound
    double  tail_movement = 0.0;      // empirical stop diagnostic
    double  quad_error = 0.0;
    int64_t terms = 0;
    std::vector<std::string> per_k;   // one diagnostic line per divisor k
};

// T2 = (pi/q) sum_{k|q} (G(k,1)/k) sum_n r2(n) w~_k(n) K_k(n) with
// K_k(n) = sum_{(b,q)=1} Phi(b/L) S(n, D0bar abar b; k); the n-sums are cut
// by checkpoint-doubling stabilization.
T2Result compute_T2_spectral(const ExperimentConfig& cfg);

struct ExperimentReport {
    int64_t a = 0, q = 1;
    double  beta = 0.0, epsilon = 0.0;
    double  L = 0.0, X = 0.0, gamma = 0.0;
    double  S_direct = 0.0;
    double  T1_closed = 0.0;
    double  T1_smoothed = 0.0;
    double  T2_spectral = 0.0;
    double  ratio_S_over_T1 = 0.0;          // against the smoothed main term
    double  identity_gap = 0.0;             // |S - T1_closed - T2|
    double  gap_budget = 0.0;               // quadrature + empirical tail allowance
    double  truncation_bound_certified = 0.0;
    double  lower_bound_witness = 0.0;      // X L / (q ln^2 q)
    double  upper_bound_witness = 0.0;      // X L / q
    bool    bounds_pass = false;            // witnesses vs slack_C
    bool    identity_pass = false;
    int64_t count_A = -1;                   // approximant count (if computed)
    double  runtime_seconds = 0.0;
    int     threads = 1;
};

// Computes S, T1, T2, asserts the decomposition within the budget, checks
// the Theorem-3 bound witnesses, and (optionally) counts approximants.
// Throws DecompositionMismatch with per-k diagnostics when the identity
// fails beyond tolerance.
ExperimentReport verify_decomposition(const ExperimentConfig& cfg, bool with_count = false);

// #{n <= 2X : r2(n) > 0, ||n alpha|| < C1 n^{-gamma}}, gamma = gnum/gden,
// decided exactly per n; deterministic across thread counts.
int64_t count_approximants(const dioph::IrrationalSpec& alpha, double X, const dioph::BigRat& C1,
                           int64_t gnum, int64_t gden);

// The counted n themselves (for independent re-verification).
std::vector<int64_t> approximant_list(const dioph::IrrationalSpec& alpha, double X,
                                      const dioph::BigRat& C1, int64_t gnum, int64_t gden);

struct ScalingRow {
    int64_t q = 0;
    double  X = 0.0;
    double  S_over_T1 = 0.0;
    int64_t count_A = 0;
    double  X_ref = 0.0;  // X^{1-gamma}
    ExperimentReport report;
};

// One verify_decomposition row per (a, q) pair at the given beta.
std::vector<ScalingRow> scaling_study(const dioph::IrrationalSpec& alpha, int64_t beta_num,
                                      int64_t beta_den, const std::vector<dioph::RationalApprox>& pairs,
                                      double epsilon = 0.02, bool with_count = false);

}  // namespace twosq::experiments
