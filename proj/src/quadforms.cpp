#include "twosq/quadforms.hpp"

#include <cstdlib>
#include <tuple>

#include "twosq/arith.hpp"
#include "twosq/util.hpp"

namespace twosq::quadforms {

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r(i, j) = checked_add(checked_mul(a(i, 0), b(0, j)), checked_mul(a(i, 1), b(1, j)));
    return r;
}

Mat2 mat_transpose(const Mat2& a) {
    Mat2 r = a;
    std::swap(r(0, 1), r(1, 0));
    return r;
}

int64_t mat_det(const Mat2& a) {
    return checked_sub(checked_mul(a(0, 0), a(1, 1)), checked_mul(a(0, 1), a(1, 0)));
}

int64_t BinaryQuadraticForm::eval(int64_t x, int64_t y) const {
    int64_t t = checked_mul(a1, checked_mul(x, x));
    t = checked_add(t, checked_mul(b1, checked_mul(x, y)));
    return checked_add(t, checked_mul(c1, checked_mul(y, y)));
}

BinaryQuadraticForm make_form(int64_t a1, int64_t b1, int64_t c1) {
    int64_t Delta = checked_sub(checked_mul(4, checked_mul(a1, c1)), checked_mul(b1, b1));
    if (a1 <= 0 || Delta <= 0)
        throw NotPositiveDefinite("make_form: requires a1 > 0 and 4 a1 c1 - b1^2 > 0");
    BinaryQuadraticForm f;
    f.a1 = a1; f.b1 = b1; f.c1 = c1;
    f.A = Mat2{{{{2 * a1, b1}, {b1, 2 * c1}}}};
    f.Delta = Delta;
    return f;
}

AdjointData adjoint(const BinaryQuadraticForm& form) {
    // Classical adjugate of [[2a,b],[b,2c]]; the witness identity is checked.
    AdjointData d;
    d.Adag = Mat2{{{{2 * form.c1, -form.b1}, {-form.b1, 2 * form.a1}}}};
    d.Delta = form.Delta;
    Mat2 prod = mat_mul(d.Adag, form.A);
    if (prod != Mat2::diag(form.Delta, form.Delta))
        throw Error("adjoint: witness identity failed");
    return d;
}

namespace {

void swap_rows(Mat2& a, Mat2& u) {
    std::swap(a.m[0], a.m[1]);
    std::swap(u.m[0], u.m[1]);
}
void swap_cols(Mat2& a, Mat2& v) {
    std::swap(a(0, 0), a(0, 1)); std::swap(a(1, 0), a(1, 1));
    std::swap(v(0, 0), v(0, 1)); std::swap(v(1, 0), v(1, 1));
}
// row i -= q * row j (tracked in U); col i -= q * col j (tracked in V)
void row_op(Mat2& a, Mat2& u, int i, int j, int64_t q) {
    for (int c = 0; c < 2; ++c) {
        a(i, c) = checked_sub(a(i, c), checked_mul(q, a(j, c)));
        u(i, c) = checked_sub(u(i, c), checked_mul(q, u(j, c)));
    }
}
void col_op(Mat2& a, Mat2& v, int i, int j, int64_t q) {
    for (int r = 0; r < 2; ++r) {
        a(r, i) = checked_sub(a(r, i), checked_mul(q, a(r, j)));
        v(r, i) = checked_sub(v(r, i), checked_mul(q, v(r, j)));
    }
}
void negate_row(Mat2& a, Mat2& u, int i) {
    for (int c = 0; c < 2; ++c) { a(i, c) = -a(i, c); u(i, c) = -u(i, c); }
}

}  // namespace

SmithData smith_normal_form(const Mat2& Adag) {
    if (mat_det(Adag) == 0) throw Error("smith_normal_form: singular matrix");
    Mat2 a = Adag;
    Mat2 u = Mat2::identity();
    Mat2 v = Mat2::identity();

    // Move the smallest nonzero |entry| to (0,0), then clear row 0 / col 0.
    for (;;) {
        int bi = -1, bj = -1;
        int64_t best = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                int64_t av = std::abs(a(i, j));
                if (av != 0 && (bi < 0 || av < best)) { best = av; bi = i; bj = j; }
            }
        if (bi == 1) swap_rows(a, u);
        if (bj == 1) swap_cols(a, v);
        if (a(1, 0) % a(0, 0) == 0 && a(0, 1) % a(0, 0) == 0) {
            row_op(a, u, 1, 0, a(1, 0) / a(0, 0));
            col_op(a, v, 1, 0, a(0, 1) / a(0, 0));
            break;
        }
        if (a(1, 0) % a(0, 0) != 0) row_op(a, u, 1, 0, a(1, 0) / a(0, 0));
        else                        col_op(a, v, 1, 0, a(0, 1) / a(0, 0));
    }
    // Divisibility fix-up: fold col 1 into col 0 and reduce once more.
    if (a(1, 1) % a(0, 0) != 0) {
        col_op(a, v, 0, 1, -1);  // col0 += col1
        for (;;) {
            if (a(1, 0) == 0) break;
            int64_t q = a(1, 0) / a(0, 0);
            row_op(a, u, 1, 0, q);
            if (a(1, 0) == 0) break;
            swap_rows(a, u);
        }
        col_op(a, v, 1, 0, a(0, 1) / a(0, 0));
    }
    // Sign normalization: s_i >= 0 via row flips in U.
    if (a(0, 0) < 0) negate_row(a, u, 0);
    if (a(1, 1) < 0) negate_row(a, u, 1);

    SmithData s;
    s.U = u; s.V = v;
    s.s1 = a(0, 0); s.s2 = a(1, 1);
    s.detU = mat_det(u); s.detV = mat_det(v);
    if (a(0, 1) != 0 || a(1, 0) != 0 || s.s1 <= 0 || s.s2 <= 0 || s.s2 % s.s1 != 0)
        throw Error("smith_normal_form: reduction invariant failed");
    if (std::abs(s.detU) != 1 || std::abs(s.detV) != 1)
        throw Error("smith_normal_form: transform not unimodular");
    if (mat_mul(mat_mul(u, Adag), v) != Mat2::diag(s.s1, s.s2))
        throw Error("smith_normal_form: reconstruction failed");
    return s;
}

DeltaSplit delta_split(int64_t Delta, int64_t k) {
    if (Delta <= 0 || k <= 0) throw Error("delta_split: Delta and k must be positive");
    DeltaSplit d;
    d.k = k;
    for (auto [p, eD] : arith::factorize(static_cast<std::uint64_t>(Delta)).factors) {
        int64_t pp = static_cast<int64_t>(p);
        int ek = 0;
        int64_t kk = k;
        while (kk % pp == 0) { kk /= pp; ++ek; }
        if (eD <= ek) {
            for (int i = 0; i < eD; ++i) d.delta0 = checked_mul(d.delta0, pp);
        } else {
            for (int i = 0; i < ek; ++i) d.delta1 = checked_mul(d.delta1, pp);
        }
    }
    d.Delta0 = Delta / d.delta0;
    d.k1 = k / d.delta1;
    d.g = (d.delta1 == 1) ? 1 : arith::mod_inverse(d.k1, d.delta1);
    if (d.g == 0) d.g = 1;  // mod_inverse(x,1) returns 0; normalize to 1
    return d;
}

int64_t StarForm::eval(int64_t x, int64_t y) const {
    // (1/2) x^T Astar x; Astar has even diagonal so this is integral.
    int64_t t = checked_mul(Astar(0, 0) / 2, checked_mul(x, x));
    t = checked_add(t, checked_mul(Astar(0, 1), checked_mul(x, y)));
    return checked_add(t, checked_mul(Astar(1, 1) / 2, checked_mul(y, y)));
}

StarForm star_form(const BinaryQuadraticForm& form, int64_t k) {
    if (k <= 0) throw Error("star_form: k must be positive");
    auto adj = adjoint(form);
    auto snf = smith_normal_form(adj.Adag);
    auto split = delta_split(form.Delta, k);

    StarForm sf;
    sf.split = split;
    sf.b1 = split.delta0 / arith::gcd_i64(split.delta0, snf.s1);
    sf.b2 = split.delta0 / arith::gcd_i64(split.delta0, snf.s2);
    Mat2 B = Mat2::diag(sf.b1, sf.b2);
    Mat2 core = mat_mul(mat_mul(mat_transpose(snf.V), adj.Adag), snf.V);
    Mat2 scaled = mat_mul(mat_mul(B, core), B);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (scaled(i, j) % split.delta0 != 0)
                throw NonIntegralStar("star_form: delta0 does not divide B V^T Adag V B");
            sf.Astar(i, j) = scaled(i, j) / split.delta0;
        }
    if (sf.Astar(0, 1) != sf.Astar(1, 0) || sf.Astar(0, 0) % 2 != 0 || sf.Astar(1, 1) % 2 != 0)
        throw NonIntegralStar("star_form: Astar not an even symmetric matrix");
    return sf;
}

int64_t count_kernel(const BinaryQuadraticForm& form, int64_t k) {
    if (k <= 0) throw Error("count_kernel: k must be positive");
    if (k > 10000) throw LimitExceeded("count_kernel: k exceeds 1e4 guard");
    int64_t count = 0;
    for (int64_t x = 0; x < k; ++x)
        for (int64_t y = 0; y < k; ++y) {
            int64_t r0 = mod_floor(form.A(0, 0) * x + form.A(0, 1) * y, k);
            int64_t r1 = mod_floor(form.A(1, 0) * x + form.A(1, 1) * y, k);
            if (r0 == 0 && r1 == 0) ++count;
        }
    return count;
}

}  // namespace twosq::quadforms
