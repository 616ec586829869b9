#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace tricolor {
namespace detail {

inline constexpr std::uint64_t kNoIndex = ~std::uint64_t{0};

struct ChunkResult {
    std::uint64_t count = 0;
    std::uint64_t first_index = kNoIndex;
    std::vector<int> first_payload;
};

/// Runs worker(begin, end, local_result) over a partition of [0, total)
/// and merges: counts add, the smallest first_index wins. The merge is a
/// pure function of the per-index results, so the outcome does not depend
/// on the number of threads.
template <class Worker>
ChunkResult run_chunked(std::uint64_t total, int threads, Worker worker) {
    if (threads < 1) threads = 1;
    std::uint64_t want = total / 4096 + 1;
    int chunk_count = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), want));
    if (chunk_count <= 1) {
        ChunkResult r;
        worker(0, total, r);
        return r;
    }
    std::vector<ChunkResult> locals(static_cast<std::size_t>(chunk_count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(chunk_count));
    for (int t = 0; t < chunk_count; ++t) {
        std::uint64_t begin = total * static_cast<std::uint64_t>(t) / static_cast<std::uint64_t>(chunk_count);
        std::uint64_t end = total * static_cast<std::uint64_t>(t + 1) / static_cast<std::uint64_t>(chunk_count);
        pool.emplace_back([&, t, begin, end] { worker(begin, end, locals[static_cast<std::size_t>(t)]); });
    }
    for (auto& th : pool) th.join();
    ChunkResult merged;
    for (const auto& l : locals) {
        merged.count += l.count;
        if (l.first_index < merged.first_index) {
            merged.first_index = l.first_index;
            merged.first_payload = l.first_payload;
        }
    }
    return merged;
}

/// Smallest index i in [0, total) for which probe(i) returns a payload,
/// together with that payload. probe must be a pure function of i, which
/// makes the result independent of scheduling; later indices are only used
/// to cut work short, never to change the answer.
template <class T, class Probe>
std::optional<std::pair<std::uint64_t, T>> find_first_index(std::uint64_t total, int threads, Probe probe) {
    if (threads < 1) threads = 1;
    std::uint64_t want = total / 64 + 1;
    int chunk_count = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), want));
    if (chunk_count <= 1) {
        for (std::uint64_t i = 0; i < total; ++i) {
            std::optional<T> hit = probe(i);
            if (hit) return std::make_pair(i, std::move(*hit));
        }
        return std::nullopt;
    }
    std::atomic<std::uint64_t> best{kNoIndex};
    std::vector<std::optional<std::pair<std::uint64_t, T>>> found(static_cast<std::size_t>(chunk_count));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(chunk_count));
    for (int t = 0; t < chunk_count; ++t) {
        std::uint64_t begin = total * static_cast<std::uint64_t>(t) / static_cast<std::uint64_t>(chunk_count);
        std::uint64_t end = total * static_cast<std::uint64_t>(t + 1) / static_cast<std::uint64_t>(chunk_count);
        pool.emplace_back([&, t, begin, end] {
            for (std::uint64_t i = begin; i < end; ++i) {
                if (best.load(std::memory_order_relaxed) <= i) break;
                std::optional<T> hit = probe(i);
                if (hit) {
                    found[static_cast<std::size_t>(t)] = std::make_pair(i, std::move(*hit));
                    std::uint64_t cur = best.load(std::memory_order_relaxed);
                    while (i < cur && !best.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
                    }
                    break;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    std::optional<std::pair<std::uint64_t, T>> result;
    for (auto& f : found)
        if (f && (!result || f->first < result->first)) result = std::move(f);
    return result;
}

}  // namespace detail
}  // namespace tricolor
