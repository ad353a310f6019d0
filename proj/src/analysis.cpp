#include "twosq/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "twosq/errors.hpp"

namespace twosq::analysis {

namespace {

// ---------------------------------------------------------------------------
// Taylor-mode arithmetic up to order 14: enough for the j<=12 bound sweep.
// ---------------------------------------------------------------------------

constexpr int kMaxOrd = 14;

struct Taylor {
    std::array<double, kMaxOrd + 1> c{};
};

Taylor t_add(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int i = 0; i <= kMaxOrd; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

Taylor t_div(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int m = 0; m <= kMaxOrd; ++m) {
        double s = a.c[m];
        for (int j = 1; j <= m; ++j) s -= b.c[j] * r.c[m - j];
        r.c[m] = s / b.c[0];
    }
    return r;
}

Taylor t_exp(const Taylor& u) {
    Taylor r;
    r.c[0] = std::exp(u.c[0]);
    for (int m = 1; m <= kMaxOrd; ++m) {
        double s = 0.0;
        for (int j = 1; j <= m; ++j) s += j * u.c[j] * r.c[m - j];
        r.c[m] = s / m;
    }
    return r;
}

// sigma(t) = exp(-1/t) as a series at t0 > 0: -1/t has coefficients
// (-1)^(m+1) / t0^(m+1).
Taylor t_sigma_at(double t0) {
    Taylor u;
    double p = 1.0 / t0;
    double sgn = -1.0;
    for (int m = 0; m <= kMaxOrd; ++m) {
        u.c[m] = sgn * p;
        p /= t0;
        sgn = -sgn;
    }
    return t_exp(u);
}

// Flip the series variable t -> -t (for sigma(1-t) built at 1-t0).
Taylor t_flip(const Taylor& a) {
    Taylor r;
    for (int i = 0; i <= kMaxOrd; ++i) r.c[i] = (i % 2 == 0) ? a.c[i] : -a.c[i];
    return r;
}

// smoothstep s(t) = sigma(t) / (sigma(t) + sigma(1-t)) for t0 in (0,1).
Taylor t_smoothstep_at(double t0) {
    Taylor a = t_sigma_at(t0);
    Taylor b = t_flip(t_sigma_at(1.0 - t0));
    return t_div(a, t_add(a, b));
}

// bump phi(t) = e * exp(-1/(1-t^2)) for |t0| < 1.
Taylor t_bump_at(double t0) {
    // series of -1/(1-t^2) at t0: build 1-t^2 exactly, then reciprocal
    Taylor q;
    q.c[0] = 1.0 - t0 * t0;
    q.c[1] = -2.0 * t0;
    q.c[2] = -1.0;
    Taylor one;
    one.c[0] = -1.0;
    Taylor u = t_div(one, q);
    Taylor r = t_exp(u);
    for (auto& v : r.c) v *= M_E;
    return r;
}

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

// Standardized profile P with w(x) = P(x / X).
// plateau_w: P on [1,2], ramps of width 1/4.  partition_u: same shape.
double profile_eval(WindowKind kind, double u) {
    switch (kind) {
        case WindowKind::plateau_w:
        case WindowKind::partition_u: {
            if (u <= 1.0 || u >= 2.0) return 0.0;
            if (u < 1.25) return smoothstep((u - 1.0) * 4.0);
            if (u <= 1.75) return 1.0;
            return smoothstep((2.0 - u) * 4.0);
        }
        case WindowKind::bump_phi: {
            if (u <= -1.0 || u >= 1.0) return 0.0;
            return M_E * std::exp(-1.0 / (1.0 - u * u));
        }
    }
    return 0.0;
}

// P^(0..order)(u) by Taylor evaluation; zero vectors off the ramps.
std::vector<double> profile_derivatives(WindowKind kind, double u, int order) {
    std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
    // t.c[j] * j! is d^j/dv^j at the inner variable; chain rule contributes
    // one power of the (constant) inner slope per derivative order.
    auto fill = [&](const Taylor& t, double scale) {
        double fact = 1.0;
        double pw = 1.0;
        for (int j = 0; j <= order; ++j) {
            out[static_cast<std::size_t>(j)] = t.c[j] * fact * pw;
            fact *= (j + 1);
            pw *= scale;
        }
    };
    switch (kind) {
        case WindowKind::plateau_w:
        case WindowKind::partition_u: {
            if (u <= 1.0 || u >= 2.0) return out;
            if (u < 1.25) {
                fill(t_smoothstep_at((u - 1.0) * 4.0), 4.0);
            } else if (u <= 1.75) {
                out[0] = 1.0;
            } else {
                fill(t_smoothstep_at((2.0 - u) * 4.0), -4.0);
            }
            return out;
        }
        case WindowKind::bump_phi: {
            if (u <= -1.0 || u >= 1.0) return out;
            fill(t_bump_at(u), 1.0);
            return out;
        }
    }
    return out;
}

}  // namespace

double SmoothWindow::support_lo() const {
    switch (kind) {
        case WindowKind::plateau_w:   return X;
        case WindowKind::bump_phi:    return -1.0;
        case WindowKind::partition_u: return 1.0;
    }
    return 0.0;
}

double SmoothWindow::support_hi() const {
    switch (kind) {
        case WindowKind::plateau_w:   return 2.0 * X;
        case WindowKind::bump_phi:    return 1.0;
        case WindowKind::partition_u: return 2.0;
    }
    return 0.0;
}

SmoothWindow make_plateau(double X) {
    if (!(X > 0.0)) throw Error("make_plateau: X must be positive");
    return SmoothWindow{WindowKind::plateau_w, X};
}
SmoothWindow make_bump() { return SmoothWindow{WindowKind::bump_phi, 1.0}; }
SmoothWindow make_partition_u() { return SmoothWindow{WindowKind::partition_u, 1.0}; }

double window_eval(const SmoothWindow& win, double x) {
    double scale = (win.kind == WindowKind::plateau_w) ? win.X : 1.0;
    return profile_eval(win.kind, x / scale);
}

std::vector<double> window_derivatives(const SmoothWindow& win, double x, int order) {
    if (order < 0 || order > 12) throw Error("window_derivatives: order must be in 0..12");
    double scale = (win.kind == WindowKind::plateau_w) ? win.X : 1.0;
    auto d = profile_derivatives(win.kind, x / scale, order);
    double pw = 1.0;
    for (int j = 0; j <= order; ++j) {
        d[static_cast<std::size_t>(j)] /= pw;
        pw *= scale;
    }
    return d;
}

double window_derivative_bound_check(const SmoothWindow& win, int j) {
    if (j < 1 || j > 6) throw Error("window_derivative_bound_check: j must be in 1..6");
    // Central finite differences of order j (second-order accurate) with a
    // step proportional to the window scale, over a 1e4-point grid.
    static constexpr double h_rel[7] = {0, 1e-3, 1e-3, 7e-4, 7e-4, 5e-4, 5e-4};
    double scale = (win.kind == WindowKind::plateau_w) ? win.X : 1.0;
    double lo = win.support_lo(), hi = win.support_hi();
    double margin = 0.05 * (hi - lo);
    double h = h_rel[j] * scale;

    // FD coefficients: j-fold application of the central first difference.
    // (f(x+h)-f(x-h))/(2h) iterated -> stencil over x + m h, |m| <= j.
    std::vector<double> coef{1.0};
    for (int it = 0; it < j; ++it) {
        std::vector<double> next(coef.size() + 2, 0.0);
        for (std::size_t i = 0; i < coef.size(); ++i) {
            next[i + 2] += coef[i];
            next[i] -= coef[i];
        }
        coef = next;
    }
    double best = 0.0;
    const int grid = 10000;
    for (int i = 0; i <= grid; ++i) {
        double x = lo - margin + (hi - lo + 2 * margin) * i / grid;
        double acc = 0.0;
        for (std::size_t m = 0; m < coef.size(); ++m) {
            if (coef[m] == 0.0) continue;
            double off = (static_cast<double>(m) - j) * h;  // stencil at x + off
            acc += coef[m] * window_eval(win, x + off);
        }
        double der = acc / std::pow(2.0 * h, j);
        best = std::max(best, std::abs(der) * std::pow(scale, j));
    }
    return best;
}

double profile_derivative_sup(WindowKind kind, int j) {
    if (j < 0 || j > 12) throw Error("profile_derivative_sup: j must be in 0..12");
    struct Table {
        std::array<double, 13> sup{};
        Table(WindowKind k) {
            // graded scan: derivative sups migrate toward the ramp edges as
            // j grows, so refine near the support boundary
            std::vector<double> us;
            const int n = 3000;
            double lo = (k == WindowKind::bump_phi) ? -1.0 : 1.0;
            double hi = (k == WindowKind::bump_phi) ? 1.0 : 2.0;
            for (int i = 1; i < n; ++i) us.push_back(lo + (hi - lo) * i / n);
            for (int i = 1; i <= 400; ++i) {
                double t = std::pow(10.0, -7.0 + 5.0 * i / 400.0);  // 1e-7 .. 1e-2
                if (k == WindowKind::bump_phi) {
                    us.push_back(-1.0 + t);
                    us.push_back(1.0 - t);
                } else {
                    us.push_back(1.0 + 0.25 * t);
                    us.push_back(1.25 - 0.25 * t);
                    us.push_back(1.75 + 0.25 * t);
                    us.push_back(2.0 - 0.25 * t);
                }
            }
            for (double u : us) {
                auto d = profile_derivatives(k, u, 12);
                for (int jj = 0; jj <= 12; ++jj)
                    sup[static_cast<std::size_t>(jj)] =
                        std::max(sup[static_cast<std::size_t>(jj)], std::abs(d[static_cast<std::size_t>(jj)]));
            }
            // grid-sup underestimates the true sup; pad once for certificates
            for (auto& v : sup) v *= 2.0;
        }
    };
    switch (kind) {
        case WindowKind::plateau_w:
        case WindowKind::partition_u: {
            static const Table t(WindowKind::plateau_w);
            return t.sup[static_cast<std::size_t>(j)];
        }
        case WindowKind::bump_phi: {
            static const Table t(WindowKind::bump_phi);
            return t.sup[static_cast<std::size_t>(j)];
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Bessel J
// ---------------------------------------------------------------------------

namespace {

double bessel_series(int nu, double x) {
    // sum_m (-1)^m (x/2)^(nu+2m) / (m! (m+nu)!)
    double half = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= nu; ++i) term *= half / i;  // (x/2)^nu / nu!
    double sum = term;
    double m = 1.0;
    double x2 = -half * half;
    while (true) {
        term *= x2 / (m * (m + nu));
        sum += term;
        if (std::abs(term) < 1e-22 * (1.0 + std::abs(sum)) && m > 4) break;
        m += 1.0;
        if (m > 400) break;
    }
    return sum;
}

// Hankel asymptotic for nu = 0 or 1, x >= 12: 8 correction terms.
double bessel_asympt(int nu, double x) {
    double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 8; ++k) {
        double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * x);
        term *= f;
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
    }
    double chi = x - (0.5 * nu + 0.25) * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int order, double x) {
    if (order < 0 || order > 8) throw Error("bessel_j: order must be in 0..8");
    if (!(x >= 0.0)) throw Error("bessel_j: x must be nonnegative");
    if (x < 12.0) return bessel_series(order, x);
    double j0 = bessel_asympt(0, x);
    if (order == 0) return j0;
    double j1 = bessel_asympt(1, x);
    if (order == 1) return j1;
    // upward recurrence, stable since order <= 8 < 12 <= x
    double jm = j0, jc = j1;
    for (int nu = 1; nu < order; ++nu) {
        double jn = (2.0 * nu / x) * jc - jm;
        jm = jc;
        jc = jn;
    }
    return jc;
}

// ---------------------------------------------------------------------------
// Quadrature: 16-point Gauss-Legendre panels, adaptive bisection.
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<double, 8> kGLNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGLWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

template <typename F>
cplx gl16(const F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx s{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        s += kGLWeights[static_cast<std::size_t>(i)] *
             (f(c + h * kGLNodes[static_cast<std::size_t>(i)]) + f(c - h * kGLNodes[static_cast<std::size_t>(i)]));
    }
    return h * s;
}

struct Panel {
    double a, b;
    int depth;
};

struct PanelW {
    double a, b;
    cplx   whole;
    int    depth;
};

template <typename F>
QuadratureResult integrate_adaptive(const F& f, const std::vector<double>& breaks,
                                    double rel_tol, double abs_floor, int max_panels) {
    QuadratureResult res;
    double span = breaks.back() - breaks.front();

    // coarse pass: panel values give both the scale and the roundoff floor
    std::vector<PanelW> stack;
    stack.reserve(breaks.size());
    cplx coarse{0.0, 0.0};
    double absscale = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        cplx v = gl16(f, breaks[i], breaks[i + 1]);
        coarse += v;
        absscale += std::abs(v);
        stack.push_back({breaks[i], breaks[i + 1], v, 0});
    }
    double scale = std::abs(coarse);
    double noise_floor = 3.6e-15 * absscale;  // GL-sum roundoff scale
    double tol = std::max({abs_floor, rel_tol * scale, noise_floor});

    KahanSum total;
    double err = 0.0;
    int used = static_cast<int>(stack.size());
    while (!stack.empty()) {
        PanelW p = stack.back();
        stack.pop_back();
        double mid = 0.5 * (p.a + p.b);
        cplx left = gl16(f, p.a, mid);
        cplx right = gl16(f, mid, p.b);
        double e = std::abs(p.whole - left - right);
        double budget = tol * (p.b - p.a) / span;
        if (e > budget && p.depth < 40) {
            used += 2;
            if (used > max_panels) throw ToleranceNotMet("integrate_adaptive: refinement cap reached");
            stack.push_back({p.a, mid, left, p.depth + 1});
            stack.push_back({mid, p.b, right, p.depth + 1});
        } else {
            total.add(left);
            total.add(right);
            err += e;
        }
    }
    res.value = total.value();
    res.abs_error_estimate = err;
    res.panels_used = used;
    return res;
}

std::vector<double> uniform_breaks(double a, double b, int n) {
    std::vector<double> br(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) br[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
    return br;
}

}  // namespace

QuadratureResult fourier_transform(const SmoothWindow& win, double xi, double rel_tol) {
    double a = win.support_lo(), b = win.support_hi();
    // quarter period of e(-xi y) is 1/(4|xi|)
    int n = 8;
    if (xi != 0.0) {
        double quarter = 0.25 / std::abs(xi);
        n = std::max(n, static_cast<int>(std::ceil((b - a) / quarter)));
    }
    if (n > 2000000) throw ToleranceNotMet("fourier_transform: oscillation too fast");
    auto f = [&](double y) { return window_eval(win, y) * e_of(-xi * y); };
    return integrate_adaptive(f, uniform_breaks(a, b, n), rel_tol, 1e-300, 4000000);
}

QuadratureResult window_integral(const SmoothWindow& win, double rel_tol) {
    auto f = [&](double y) { return cplx{window_eval(win, y), 0.0}; };
    return integrate_adaptive(f, uniform_breaks(win.support_lo(), win.support_hi(), 16), rel_tol,
                              1e-300, 1000000);
}

QuadratureResult bessel_weighted_integral(const SmoothWindow& win, double beta,
                                          double rel_tol, double abs_floor) {
    if (win.kind == WindowKind::bump_phi)
        throw Error("bessel_weighted_integral: window must have positive support");
    double a = win.support_lo(), b = win.support_hi();
    // phase beta sqrt(x): quarter wavelength at the panel's left end is
    // pi sqrt(x) / beta; the breaks grow accordingly.
    std::vector<double> breaks{a};
    double x = a;
    double max_h = (b - a) / 8.0;
    int guard = 0;
    while (x < b) {
        double h = (beta > 0.0) ? std::min(M_PI * std::sqrt(x) / beta, max_h) : max_h;
        x = std::min(b, x + h);
        breaks.push_back(x);
        if (++guard > 4000000) throw ToleranceNotMet("bessel_weighted_integral: too many base panels");
    }
    auto f = [&](double t) { return cplx{bessel_j(0, beta * std::sqrt(t)) * window_eval(win, t), 0.0}; };
    return integrate_adaptive(f, breaks, rel_tol, abs_floor, 8000000);
}

QuadratureResult w_tilde(int64_t k, int64_t n, const SmoothWindow& win,
                         double rel_tol, double abs_floor) {
    if (k <= 0 || n <= 0) throw Error("w_tilde: k and n must be positive");
    double beta = kTwoPi * std::sqrt(static_cast<double>(n)) / static_cast<double>(k);
    auto r = bessel_weighted_integral(win, beta, rel_tol, abs_floor * static_cast<double>(k));
    r.value /= static_cast<double>(k);
    r.abs_error_estimate /= static_cast<double>(k);
    return r;
}

double osc_integral_term_bound(const SmoothWindow& win, double beta) {
    if (win.kind == WindowKind::bump_phi)
        throw Error("osc_integral_term_bound: window must have positive support");
    double X = win.support_lo();  // support is [X, 2X] in profile units
    double base = 2.0 * std::sqrt(2.0) / (beta * std::sqrt(X));
    double best = X;  // j = 0: |J0| <= 1 and 0 <= f <= 1 on a length-X support
    double geom = 1.0;
    for (int j = 1; j <= 12; ++j) {
        geom *= base;
        best = std::min(best, profile_derivative_sup(win.kind, j) * X * geom);
    }
    return best;
}

void BesselTransformCache::ensure(int64_t n_hi) {
    auto cur = static_cast<int64_t>(vals_.size());
    if (n_hi <= cur) return;
    vals_.resize(static_cast<std::size_t>(n_hi));
    errs_.resize(static_cast<std::size_t>(n_hi));
    parallel_for(n_hi - cur, [&](int64_t i) {
        int64_t n = cur + 1 + i;
        auto r = bessel_weighted_integral(win_, beta(n), 1e-10);
        vals_[static_cast<std::size_t>(n - 1)] = r.value;
        errs_[static_cast<std::size_t>(n - 1)] = r.abs_error_estimate;
    });
}

}  // namespace twosq::analysis
