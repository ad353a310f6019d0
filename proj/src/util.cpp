#include "twosq/util.hpp"

#include <algorithm>
#include <thread>

namespace twosq {

namespace {
std::atomic<int> g_threads{1};
}

int thread_count() { return g_threads.load(); }

void set_thread_count(int n) {
    if (n < 1) n = 1;
    if (n > 256) n = 256;
    g_threads.store(n);
}

std::vector<cplx> run_chunks(int n_chunks, const std::function<cplx(int)>& chunk_fn) {
    std::vector<cplx> out(static_cast<std::size_t>(n_chunks));
    int nt = std::min(thread_count(), n_chunks);
    if (nt <= 1) {
        for (int i = 0; i < n_chunks; ++i) out[static_cast<std::size_t>(i)] = chunk_fn(i);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n_chunks) break;
                out[static_cast<std::size_t>(i)] = chunk_fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

cplx parallel_sum(std::int64_t n, const std::function<cplx(std::int64_t)>& item) {
    if (n <= 0) return {0.0, 0.0};
    // Chunk count is fixed by the problem size only, never by thread count.
    int n_chunks = static_cast<int>(std::min<std::int64_t>(256, n));
    std::int64_t per = (n + n_chunks - 1) / n_chunks;
    auto chunk_fn = [&](int c) -> cplx {
        std::int64_t lo = static_cast<std::int64_t>(c) * per;
        std::int64_t hi = std::min<std::int64_t>(n, lo + per);
        KahanSum acc;
        for (std::int64_t i = lo; i < hi; ++i) acc.add(item(i));
        return acc.value();
    };
    auto parts = run_chunks(n_chunks, chunk_fn);
    KahanSum total;
    for (const auto& p : parts) total.add(p);
    return total.value();
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
    if (n <= 0) return;
    int n_chunks = static_cast<int>(std::min<std::int64_t>(256, n));
    std::int64_t per = (n + n_chunks - 1) / n_chunks;
    run_chunks(n_chunks, [&](int c) -> cplx {
        std::int64_t lo = static_cast<std::int64_t>(c) * per;
        std::int64_t hi = std::min<std::int64_t>(n, lo + per);
        for (std::int64_t i = lo; i < hi; ++i) body(i);
        return {0.0, 0.0};
    });
}

}  // namespace twosq
