// Two-sided numerical verification of the Voronoi summation identity for
// positive definite binary quadratic forms: the general form and its
// two-squares specialization.  Both sides are computed by disjoint code
// paths (direct twisted sums vs Gauss sums + Bessel quadrature).
#pragma once

#include <cstdint>

#include "twosq/analysis.hpp"
#include "twosq/quadforms.hpp"
#include "twosq/util.hpp"

namespace twosq::voronoi {

using std::int64_t;
using quadforms::BinaryQuadraticForm;
using analysis::SmoothWindow;

// sum_n r_Q(n) e_k(n h) f(n); complex for general h.
cplx voronoi_lhs(const BinaryQuadraticForm& form, int64_t k, int64_t h, const SmoothWindow& f);

struct RhsResult {
    cplx    main{0.0, 0.0};
    cplx    dual{0.0, 0.0};
    // closed-form j-decay bound on the omitted tail (honest but often loose
    // at desk scale; see also tail_movement)
    double  truncation_bound = 0.0;
    // |last inter-checkpoint movement| of the dual partial sum at the stop
    double  tail_movement = 0.0;
    double  quadrature_error = 0.0;
    int64_t terms_used = 0;
};

// (pi/k^2) G_Q(k,1) [ int f + sum_n r2(n) e_k(-hbar D0bar n) int J0(2 pi sqrt(nx)/k) f ],
// k odd.  The dual sum is cut where its partial sums stabilize under
// checkpoint doubling; the j-decay tail bound is reported alongside.  The
// optional cache shares the h-independent Bessel integrals across calls
// with the same (k, f).
RhsResult voronoi_rhs_two_squares(int64_t k, int64_t h, const SmoothWindow& f,
                                  analysis::BesselTransformCache* cache = nullptr,
                                  double tail_target_scale = 1.0);

// Lemma-3 shape: 2 pi Delta^{-1/2} k^{-2} G_Q(k,h) int f plus the
// r~_{Q*}-twisted dual with Bessel argument 4 pi sqrt(n x / Delta0) / k.
RhsResult voronoi_rhs_general(const BinaryQuadraticForm& form, int64_t k, int64_t h,
                              const SmoothWindow& f,
                              analysis::BesselTransformCache* cache = nullptr,
                              double tail_target_scale = 1.0);

struct VoronoiReport {
    cplx    lhs{0.0, 0.0};
    cplx    rhs_main{0.0, 0.0};
    cplx    rhs_dual{0.0, 0.0};
    double  rhs_truncation_bound = 0.0;
    double  tail_movement = 0.0;
    double  quadrature_error = 0.0;
    double  abs_gap = 0.0;
    int64_t terms_used = 0;
    bool    pass = false;
};

// Assembles both sides; pass iff
// abs_gap <= max(1e-6 |lhs|, truncation_bound + quadrature budget).
VoronoiReport verify(const BinaryQuadraticForm& form, int64_t k, int64_t h, const SmoothWindow& f,
                     analysis::BesselTransformCache* cache = nullptr);

}  // namespace twosq::voronoi
