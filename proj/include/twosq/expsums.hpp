// Complete exponential sums: Gauss sums (plain and shifted) with their
// closed-form evaluations, Kloosterman sums, and the twisted representation
// sum r~_{Q*}(n,k,h) appearing in the general Voronoi formula.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "twosq/quadforms.hpp"
#include "twosq/util.hpp"

namespace twosq::expsums {

using std::int64_t;
using quadforms::BinaryQuadraticForm;

// G_Q(k,h) = sum over x,y mod k of e_k(h Q(x,y)).  Brute force over k^2
// terms with compensated accumulation for k > 512.  Guard: k <= 1e4.
cplx gauss_sum(const BinaryQuadraticForm& form, int64_t k, int64_t h);

// G_Q(k,h,a) = sum over x mod k of e_k(h Q(x) + a.x).
cplx gauss_sum_shifted(const BinaryQuadraticForm& form, int64_t k, int64_t h,
                       int64_t a0, int64_t a1);

// |LHS - RHS| for the shifted-sum evaluation
//   G_Q(k,h,a) = E_{delta0}(Adag a) e_{k1}(-hbar (Dbar/delta1) Qdag(a))
//                 * sum_x e_k(h Q(x)) e_{delta1}(x . g a),
// both sides by direct summation.  Dbar is an inverse of Delta mod k1 with
// delta1 | Dbar; throws NoValidInverse when none exists.
double verify_shifted_identity(const BinaryQuadraticForm& form, int64_t k, int64_t h,
                               int64_t a0, int64_t a1);

// Kronecker symbol (a | n), fully general.
int kronecker_symbol(int64_t a, int64_t n);

// Right-hand side of the odd-modulus evaluation
//   G_Q(k,h) = (h | N(k,Q)) G_Q(k,1).
cplx gauss_sum_kronecker(const BinaryQuadraticForm& form, int64_t k, int64_t h);

// |G_Q(k1 k2, 1) - G_Q(k1,1) G_Q(k2,1)| for odd coprime k1, k2.
double gauss_multiplicativity_check(const BinaryQuadraticForm& form, int64_t k1, int64_t k2);

// S(m,n;k) = sum over units x mod k of e((m x + n xbar)/k).  S(.,.;1) = 1
// by the empty-modulus convention.  Guard: k <= 1e6.
cplx kloosterman(int64_t m, int64_t n, int64_t k);

// |sum_{c mod k} e(rc/k) S(cd, x; k)  -  k sum*_{u: du == r mod k} e(-x ubar/k)|
double kloosterman_twist_identity_check(int64_t d, int64_t r, int64_t x, int64_t k);

// Lattice points of Q*(v) = n; v ranges over all of Z^2.
std::vector<std::pair<int64_t, int64_t>> representations(const quadforms::StarForm& sf, int64_t n);
std::vector<std::pair<int64_t, int64_t>> representations(const BinaryQuadraticForm& form, int64_t n);

// r~_{Q*}(n,k,h) = k^{-1} sum_{Q*(x)=n} sum_{y mod k} e_k(h Q(y)) e_{delta1}(y . g V B x).
// Guard: n k^2 <= 1e12.
cplx r_tilde(const BinaryQuadraticForm& form, int64_t n, int64_t k, int64_t h);

}  // namespace twosq::expsums
