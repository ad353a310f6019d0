#include "twosq/expsums.hpp"

#include <cmath>
#include <map>

#include "twosq/arith.hpp"

namespace twosq::expsums {

namespace {

// Accumulate k^2 unit-modulus terms; compensated beyond 512 per the
// worst-case-cancellation rationale.
cplx sum_over_residues(int64_t k, const std::function<cplx(int64_t, int64_t)>& term) {
    if (k > 512) {
        KahanSum acc;
        for (int64_t x = 0; x < k; ++x)
            for (int64_t y = 0; y < k; ++y) acc.add(term(x, y));
        return acc.value();
    }
    cplx acc{0.0, 0.0};
    for (int64_t x = 0; x < k; ++x)
        for (int64_t y = 0; y < k; ++y) acc += term(x, y);
    return acc;
}

int64_t isqrt64(int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

cplx gauss_sum(const BinaryQuadraticForm& form, int64_t k, int64_t h) {
    if (k <= 0) throw Error("gauss_sum: k must be positive");
    if (k > 10000) throw LimitExceeded("gauss_sum: k exceeds 1e4 guard");
    if (arith::gcd_i64(h, k) != 1) throw NotCoprime("gauss_sum: gcd(h,k) != 1");
    if (k == 1) return {1.0, 0.0};
    auto roots = root_table(k);
    int64_t hm = mod_floor(h, k);
    return sum_over_residues(k, [&](int64_t x, int64_t y) {
        int64_t q = mod_floor(form.eval(x, y), k);
        return roots[static_cast<std::size_t>(mod_floor(hm * q, k))];
    });
}

cplx gauss_sum_shifted(const BinaryQuadraticForm& form, int64_t k, int64_t h,
                       int64_t a0, int64_t a1) {
    if (k <= 0) throw Error("gauss_sum_shifted: k must be positive");
    if (k > 10000) throw LimitExceeded("gauss_sum_shifted: k exceeds 1e4 guard");
    if (arith::gcd_i64(h, k) != 1) throw NotCoprime("gauss_sum_shifted: gcd(h,k) != 1");
    auto roots = root_table(k);
    int64_t hm = mod_floor(h, k);
    int64_t a0m = mod_floor(a0, k), a1m = mod_floor(a1, k);
    return sum_over_residues(k, [&](int64_t x, int64_t y) {
        int64_t q = mod_floor(form.eval(x, y), k);
        int64_t ex = mod_floor(hm * q + a0m * x + a1m * y, k);
        return roots[static_cast<std::size_t>(ex)];
    });
}

double verify_shifted_identity(const BinaryQuadraticForm& form, int64_t k, int64_t h,
                               int64_t a0, int64_t a1) {
    auto split = quadforms::delta_split(form.Delta, k);
    // Dbar: inverse of Delta mod k1 with delta1 | Dbar, by CRT.  Possible iff
    // (Delta, k1) = 1; the lemma asserts existence implicitly.
    if (arith::gcd_i64(form.Delta, split.k1) != 1)
        throw NoValidInverse("verify_shifted_identity: Delta not invertible mod k1");
    int64_t t = (split.k1 == 1)
                    ? 0
                    : arith::mod_inverse(mod_floor(split.delta1 * form.Delta, split.k1), split.k1);
    int64_t Dbar_over_d1 = t;  // Dbar = delta1 * t, so Dbar/delta1 = t

    cplx lhs = gauss_sum_shifted(form, k, h, a0, a1);

    // prefactor E_{delta0}(Adag a)
    auto adj = quadforms::adjoint(form);
    int64_t v0 = adj.Adag(0, 0) * a0 + adj.Adag(0, 1) * a1;
    int64_t v1 = adj.Adag(1, 0) * a0 + adj.Adag(1, 1) * a1;
    bool nonzero = (mod_floor(v0, split.delta0) == 0 && mod_floor(v1, split.delta0) == 0);

    cplx rhs{0.0, 0.0};
    if (nonzero) {
        // Qdag(a) for Adag = [[2c,-b],[-b,2a]]
        int64_t qdag = form.c1 * a0 * a0 - form.b1 * a0 * a1 + form.a1 * a1 * a1;
        int64_t hbar = (split.k1 == 1) ? 0 : arith::mod_inverse(h, split.k1);
        int64_t expo = (split.k1 == 1)
                           ? 0
                           : mod_floor(-mod_floor(hbar * Dbar_over_d1, split.k1) * mod_floor(qdag, split.k1),
                                       split.k1);
        cplx pref = e_of(static_cast<double>(expo) / static_cast<double>(split.k1));

        // twisted sum: e_k(h Q(x)) e_{delta1}(x . g a) combined over modulus k*delta1
        int64_t M = k * split.delta1;
        auto roots = root_table(M);
        int64_t hm = mod_floor(h, k);
        int64_t w0 = mod_floor(split.g * a0, split.delta1);
        int64_t w1 = mod_floor(split.g * a1, split.delta1);
        cplx tw = sum_over_residues(k, [&](int64_t x, int64_t y) {
            int64_t ex = mod_floor(mod_floor(hm * mod_floor(form.eval(x, y), k), k) * split.delta1 +
                                       mod_floor(w0 * x + w1 * y, split.delta1) * k,
                                   M);
            return roots[static_cast<std::size_t>(ex)];
        });
        rhs = pref * tw;
    }
    return std::abs(lhs - rhs);
}

int kronecker_symbol(int64_t a, int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    int twos = 0;
    while (n % 2 == 0) { n /= 2; ++twos; }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        // (a|2) = chi_8(a), applied twos times
        int64_t am = mod_floor(a, 8);
        int chi8 = (am == 1 || am == 7) ? 1 : -1;
        if (twos % 2 == 1 && chi8 == -1) sign = -sign;
    }
    // Jacobi symbol (a|n) for odd n > 0
    a = mod_floor(a, n);
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int64_t nm = n % 8;
            if (nm == 3 || nm == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a = mod_floor(a, n);
    }
    if (n != 1) return 0;
    return sign * result;
}

cplx gauss_sum_kronecker(const BinaryQuadraticForm& form, int64_t k, int64_t h) {
    if (k % 2 == 0) throw EvenModulus("gauss_sum_kronecker: k must be odd");
    if (arith::gcd_i64(h, k) != 1) throw NotCoprime("gauss_sum_kronecker: gcd(h,k) != 1");
    int64_t N = quadforms::count_kernel(form, k);
    int sym = kronecker_symbol(h, N);
    return static_cast<double>(sym) * gauss_sum(form, k, 1);
}

double gauss_multiplicativity_check(const BinaryQuadraticForm& form, int64_t k1, int64_t k2) {
    if (k1 % 2 == 0 || k2 % 2 == 0) throw EvenModulus("gauss_multiplicativity_check: moduli must be odd");
    if (arith::gcd_i64(k1, k2) != 1) throw NotCoprime("gauss_multiplicativity_check: (k1,k2) != 1");
    cplx lhs = gauss_sum(form, k1 * k2, 1);
    cplx rhs = gauss_sum(form, k1, 1) * gauss_sum(form, k2, 1);
    return std::abs(lhs - rhs);
}

cplx kloosterman(int64_t m, int64_t n, int64_t k) {
    if (k <= 0) throw Error("kloosterman: k must be positive");
    if (k > 1000000) throw LimitExceeded("kloosterman: k exceeds 1e6 guard");
    if (k == 1) return {1.0, 0.0};  // empty-modulus convention
    auto roots = root_table(k);
    int64_t mm = mod_floor(m, k), nm = mod_floor(n, k);
    KahanSum acc;
    for (int64_t x = 1; x < k; ++x) {
        if (arith::gcd_i64(x, k) != 1) continue;
        int64_t xb = arith::mod_inverse(x, k);
        acc.add(roots[static_cast<std::size_t>(mod_floor(mm * x + nm * xb, k))]);
    }
    return acc.value();
}

double kloosterman_twist_identity_check(int64_t d, int64_t r, int64_t x, int64_t k) {
    if (k <= 0) throw Error("kloosterman_twist_identity_check: k must be positive");
    auto roots = root_table(k);
    cplx lhs{0.0, 0.0};
    for (int64_t c = 1; c <= k; ++c) {
        cplx tw = roots[static_cast<std::size_t>(mod_floor(r * c, k))];
        lhs += tw * kloosterman(mod_floor(c * d, k), x, k);
    }
    cplx rhs{0.0, 0.0};
    if (k == 1) {
        rhs = {1.0, 0.0};  // single unit u=1 satisfies the congruence trivially
    } else {
        for (int64_t u = 1; u <= k; ++u) {
            if (arith::gcd_i64(u, k) != 1) continue;
            if (mod_floor(d * u - r, k) != 0) continue;
            int64_t ub = arith::mod_inverse(u, k);
            rhs += roots[static_cast<std::size_t>(mod_floor(-x * ub, k))];
        }
        rhs *= static_cast<double>(k);
    }
    return std::abs(lhs - rhs);
}

std::vector<std::pair<int64_t, int64_t>> representations(const quadforms::StarForm& sf, int64_t n) {
    // Q*(x,y) = a x^2 + b xy + c y^2 with a = Astar(0,0)/2 etc.
    int64_t a = sf.Astar(0, 0) / 2, b = sf.Astar(0, 1), c = sf.Astar(1, 1) / 2;
    std::vector<std::pair<int64_t, int64_t>> out;
    if (n < 0) return out;
    int64_t disc = 4 * a * c - b * b;  // positive for definite forms
    if (n == 0) { out.emplace_back(0, 0); return out; }
    // |x| <= sqrt(4 c n / disc); y solves c y^2 + b x y + (a x^2 - n) = 0
    int64_t xmax = isqrt64((4 * c * n) / disc);
    while ((xmax + 1) * (xmax + 1) * disc <= 4 * c * n) ++xmax;
    for (int64_t x = -xmax; x <= xmax; ++x) {
        int64_t D = 4 * c * n - disc * x * x;  // discriminant of the y-quadratic
        if (D < 0) continue;
        int64_t s = isqrt64(D);
        if (s * s != D) continue;
        for (int64_t sign = 0; sign < 2; ++sign) {
            int64_t num = -b * x + (sign == 0 ? s : -s);
            if (num % (2 * c) != 0) continue;
            int64_t y = num / (2 * c);
            if (a * x * x + b * x * y + c * y * y == n) out.emplace_back(x, y);
            if (s == 0) break;
        }
    }
    return out;
}

std::vector<std::pair<int64_t, int64_t>> representations(const BinaryQuadraticForm& form, int64_t n) {
    quadforms::StarForm sf;
    sf.Astar = form.A;
    return representations(sf, n);
}

cplx r_tilde(const BinaryQuadraticForm& form, int64_t n, int64_t k, int64_t h) {
    if (n <= 0) throw Error("r_tilde: n must be positive");
    if (k <= 0) throw Error("r_tilde: k must be positive");
    if (arith::gcd_i64(h, k) != 1) throw NotCoprime("r_tilde: gcd(h,k) != 1");
    if (static_cast<double>(n) * static_cast<double>(k) * static_cast<double>(k) > 1e12)
        throw LimitExceeded("r_tilde: n k^2 exceeds guard");

    auto sf = star_form(form, k);
    const auto& split = sf.split;
    auto snf = quadforms::smith_normal_form(quadforms::adjoint(form).Adag);
    quadforms::Mat2 VB = quadforms::mat_mul(snf.V, quadforms::Mat2::diag(sf.b1, sf.b2));

    auto reps = representations(sf, n);
    if (reps.empty()) return {0.0, 0.0};

    // Inner sum depends on x only through g V B x mod delta1; cache classes.
    int64_t M = k * split.delta1;
    auto roots = root_table(M);
    int64_t hm = mod_floor(h, k);
    std::map<std::pair<int64_t, int64_t>, cplx> cache;
    cplx total{0.0, 0.0};
    for (auto [x0, x1] : reps) {
        int64_t w0 = mod_floor(split.g * (VB(0, 0) * x0 + VB(0, 1) * x1), split.delta1);
        int64_t w1 = mod_floor(split.g * (VB(1, 0) * x0 + VB(1, 1) * x1), split.delta1);
        auto key = std::make_pair(w0, w1);
        auto it = cache.find(key);
        if (it == cache.end()) {
            cplx inner{0.0, 0.0};
            KahanSum acc;
            for (int64_t y0 = 0; y0 < k; ++y0)
                for (int64_t y1 = 0; y1 < k; ++y1) {
                    int64_t ex = mod_floor(mod_floor(hm * mod_floor(form.eval(y0, y1), k), k) * split.delta1 +
                                               mod_floor(w0 * y0 + w1 * y1, split.delta1) * k,
                                           M);
                    acc.add(roots[static_cast<std::size_t>(ex)]);
                }
            inner = acc.value();
            it = cache.emplace(key, inner).first;
        }
        total += it->second;
    }
    return total / static_cast<double>(k);
}

}  // namespace twosq::expsums
