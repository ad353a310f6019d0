// Smooth compactly supported weights and their derivatives (Taylor-mode
// evaluation), Bessel J_nu, adaptive Gauss-Legendre quadrature for plain,
// Fourier, and Bessel-oscillatory integrals, and the Hankel-type transform
// w~_k(n) with certified decay bounds.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "twosq/util.hpp"

namespace twosq::analysis {

using std::int64_t;

// ---------------------------------------------------------------------------
// Smooth windows.  plateau_w: support [X,2X], identically 1 on [5X/4,7X/4],
// ramps built from s(t) = sigma(t)/(sigma(t)+sigma(1-t)), sigma(t)=exp(-1/t).
// bump_phi: e * exp(-1/(1-t^2)) on (-1,1), max 1 at t=0 (X ignored).
// partition_u: plateau profile transplanted to [1,2].
// ---------------------------------------------------------------------------

enum class WindowKind { plateau_w, bump_phi, partition_u };

struct SmoothWindow {
    WindowKind kind = WindowKind::plateau_w;
    double X = 1.0;

    double support_lo() const;
    double support_hi() const;
};

SmoothWindow make_plateau(double X);
SmoothWindow make_bump();
SmoothWindow make_partition_u();

double window_eval(const SmoothWindow& win, double x);

// Derivatives w^(0..order)(x) by Taylor-mode evaluation of the mollifier
// composition (exact to rounding, no finite differences).  order <= 12.
std::vector<double> window_derivatives(const SmoothWindow& win, double x, int order);

// max over a 1e4-point grid of |w^(j)(x)| * X^j, j-th derivative by central
// finite differences.  j in 1..6.
double window_derivative_bound_check(const SmoothWindow& win, int j);

// sup over the standardized profile of |P^(j)| (equals sup |w^(j)| X^j),
// measured on a refined grid of Taylor-mode derivatives.  Cached per (kind,j).
double profile_derivative_sup(WindowKind kind, int j);

// ---------------------------------------------------------------------------
// Bessel J_nu, nu in 0..8: power series for x < 12, Hankel asymptotics for
// J0/J1 beyond, upward recurrence for higher orders.  Abs error <= 1e-10
// for x <= 1e4.
// ---------------------------------------------------------------------------
double bessel_j(int order, double x);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureResult {
    cplx   value{0.0, 0.0};
    double abs_error_estimate = 0.0;
    int    panels_used = 0;

    double real() const { return value.real(); }
};

// Fourier transform hat{f}(xi) = int f(y) e(-xi y) dy over the support,
// e(x) = exp(2 pi i x).  Panels capped at a quarter period of the phase.
QuadratureResult fourier_transform(const SmoothWindow& win, double xi, double rel_tol = 1e-12);

// int w(x) dx over the support.
QuadratureResult window_integral(const SmoothWindow& win, double rel_tol = 1e-12);

// int J0(beta sqrt(x)) w(x) dx with panels tied to the local oscillation
// wavelength; abs_floor short-circuits refinement for negligible values.
QuadratureResult bessel_weighted_integral(const SmoothWindow& win, double beta,
                                          double rel_tol = 1e-10, double abs_floor = 0.0);

// w~_k(n) = (1/k) int J0(2 pi sqrt(n x)/k) w(x) dx.
QuadratureResult w_tilde(int64_t k, int64_t n, const SmoothWindow& win,
                         double rel_tol = 1e-10, double abs_floor = 0.0);

// Certified bound on |int J0(beta sqrt(x)) f(x) dx| from j-fold integration
// by parts: min over j <= 12 of S_j * X * (2 sqrt(2) / (beta sqrt(X)))^j with
// S_j the measured profile-derivative sup.  Requires a positive-support
// window (plateau_w or partition_u).
double osc_integral_term_bound(const SmoothWindow& win, double beta);

// Lazily grown table of I_n = int J0(beta_coeff sqrt(n) sqrt(x)) w(x) dx for
// n = 1, 2, ...; the integrals do not depend on the additive twists that
// multiply them, so dual sums for every h share one table.  Extension is
// parallel over n with a fixed chunk grid.
class BesselTransformCache {
  public:
    BesselTransformCache(SmoothWindow win, double beta_coeff)
        : win_(win), beta_coeff_(beta_coeff) {}

    void ensure(int64_t n_hi);

    cplx value(int64_t n) const { return vals_[static_cast<std::size_t>(n - 1)]; }
    double error(int64_t n) const { return errs_[static_cast<std::size_t>(n - 1)]; }
    int64_t size() const { return static_cast<int64_t>(vals_.size()); }
    double beta(int64_t n) const { return beta_coeff_ * std::sqrt(static_cast<double>(n)); }
    const SmoothWindow& window() const { return win_; }
    double beta_coeff() const { return beta_coeff_; }

  private:
    SmoothWindow win_;
    double beta_coeff_;
    std::vector<cplx> vals_;
    std::vector<double> errs_;
};

}  // namespace twosq::analysis
