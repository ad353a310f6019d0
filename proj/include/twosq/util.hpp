// Small shared utilities: checked 64-bit arithmetic, compensated complex
// accumulation, unit-circle tables, and deterministic chunked parallelism.
#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "twosq/errors.hpp"

namespace twosq {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// ---------------------------------------------------------------------------
// Checked 64-bit arithmetic.  Desk-scale parameters fit in int64; anything
// that would wrap must fail loudly instead.
// ---------------------------------------------------------------------------

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 add overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 mul overflow");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 sub overflow");
    return r;
}

// Euclidean mod: result in [0, m).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

// ---------------------------------------------------------------------------
// e(x) = exp(2 pi i x) and tables of k-th roots of unity.
// ---------------------------------------------------------------------------

inline cplx e_of(double x) {
    double y = kTwoPi * x;
    return {std::cos(y), std::sin(y)};
}

// roots[r] = e(r/k) for r in [0,k).  Exponents are reduced mod k by callers.
inline std::vector<cplx> root_table(std::int64_t k) {
    std::vector<cplx> t(static_cast<std::size_t>(k));
    for (std::int64_t r = 0; r < k; ++r)
        t[static_cast<std::size_t>(r)] = e_of(static_cast<double>(r) / static_cast<double>(k));
    return t;
}

// Kahan-compensated accumulator for complex sums with heavy cancellation.
struct KahanSum {
    cplx s{0.0, 0.0};
    cplx c{0.0, 0.0};
    void add(cplx x) {
        cplx y = x - c;
        cplx t = s + y;
        c = (t - s) - y;
        s = t;
    }
    cplx value() const { return s; }
};

// ---------------------------------------------------------------------------
// Thread control.  A fixed chunk grid keeps every reduction order identical
// for any thread count, so reports are bit-stable across {1..N} threads.
// ---------------------------------------------------------------------------

int  thread_count();
void set_thread_count(int n);

// Evaluates chunk_fn(chunk_index) for chunk_index in [0, n_chunks) on the
// configured number of threads and returns the per-chunk results in index
// order.  chunk_fn must not touch shared mutable state.
std::vector<cplx> run_chunks(int n_chunks, const std::function<cplx(int)>& chunk_fn);

// Chunked sum over [0, n): items are split into a fixed number of chunks
// (independent of thread count); per-item values are accumulated left to
// right inside each chunk and chunk totals are added in chunk order.
cplx parallel_sum(std::int64_t n, const std::function<cplx(std::int64_t)>& item);

// Runs body(i) for i in [0, n) across threads with the same fixed chunk
// grid; bodies must write only to disjoint slots.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace twosq
