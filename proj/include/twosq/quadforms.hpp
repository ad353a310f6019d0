// Positive definite binary quadratic forms: Gram matrix, adjoint, Smith
// Normal Form over Z, the delta0/delta1 level decomposition, the derived
// form Q*, and the kernel count N(k,Q).
#pragma once

#include <array>
#include <cstdint>

#include "twosq/errors.hpp"

namespace twosq::quadforms {

using std::int64_t;

// 2x2 integer matrix, row major.
struct Mat2 {
    std::array<std::array<int64_t, 2>, 2> m{{{0, 0}, {0, 0}}};

    static Mat2 identity() { return Mat2{{{{1, 0}, {0, 1}}}}; }
    static Mat2 diag(int64_t a, int64_t b) { return Mat2{{{{a, 0}, {0, b}}}}; }

    int64_t& operator()(int i, int j) { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    int64_t  operator()(int i, int j) const { return m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2    mat_mul(const Mat2& a, const Mat2& b);
Mat2    mat_transpose(const Mat2& a);
int64_t mat_det(const Mat2& a);

struct BinaryQuadraticForm {
    int64_t a1 = 1, b1 = 0, c1 = 1;
    Mat2    A;            // [[2a1, b1], [b1, 2c1]]
    int64_t Delta = 4;    // det A = 4 a1 c1 - b1^2 > 0

    // Q(x,y) = a1 x^2 + b1 x y + c1 y^2
    int64_t eval(int64_t x, int64_t y) const;
};

// Throws NotPositiveDefinite unless a1 > 0 and 4 a1 c1 - b1^2 > 0.
BinaryQuadraticForm make_form(int64_t a1, int64_t b1, int64_t c1);

struct AdjointData {
    Mat2    Adag;
    int64_t Delta;  // Adag * A = A * Adag = Delta * I2, checked exactly
};

AdjointData adjoint(const BinaryQuadraticForm& form);

struct SmithData {
    Mat2    U, V;      // U * Adag * V = diag(s1, s2)
    int64_t s1 = 1, s2 = 1;  // s1 | s2, both nonnegative
    int64_t detU = 1, detV = 1;  // each +-1, exposed for monitoring
};

// Deterministic 2x2 Smith Normal Form by integer row/column reduction.
// Pivot rule: smallest nonzero |entry|, ties broken row-major.
SmithData smith_normal_form(const Mat2& Adag);

struct DeltaSplit {
    int64_t k = 1;
    int64_t delta0 = 1, delta1 = 1;
    int64_t Delta0 = 1, k1 = 1;
    int64_t g = 1;  // least positive solution of g*k1 == 1 (mod delta1)
};

// Per-prime split of gcd(Delta, k): delta0 collects p^ord_p(Delta) where
// ord_p(Delta) <= ord_p(k), delta1 collects p^ord_p(k) where
// ord_p(Delta) > ord_p(k).
DeltaSplit delta_split(int64_t Delta, int64_t k);

struct StarForm {
    int64_t b1 = 1, b2 = 1;  // B = diag(delta0 / gcd(delta0, s_i))
    Mat2    Astar;           // delta0^{-1} B V^T Adag V B, integral
    DeltaSplit split;
    // Q*(x,y) = (1/2) (x,y) Astar (x,y)^T
    int64_t eval(int64_t x, int64_t y) const;
};

// Throws NonIntegralStar if the division by delta0 leaves a remainder
// anywhere (the construction guarantees integrality; a failure signals a bug).
StarForm star_form(const BinaryQuadraticForm& form, int64_t k);

// N(k,Q) = #{x mod k : A x == 0 (mod k)} by enumeration (k <= 1e4 guard).
int64_t count_kernel(const BinaryQuadraticForm& form, int64_t k);

}  // namespace twosq::quadforms
