// parallel.hpp
//
// Deterministic block-parallel execution. Work is cut into fixed-size
// blocks, workers claim blocks through an atomic counter, and the caller
// folds the per-block partials in block-index order. The partition and the
// fold order never depend on the worker count, so results are bit-identical
// for 1 worker and for many.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace tailbound {

inline constexpr std::uint64_t kReplicationBlock = 8192;

struct BlockRange {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
};

// Invokes fn(block_index, range) for every block of [0, total) and returns
// the partials indexed by block. fn must be pure in its arguments.
template <class Partial, class BlockFn>
std::vector<Partial> run_blocks(std::uint64_t total, unsigned workers,
                                BlockFn&& fn) {
    const std::uint64_t nblocks =
        total == 0 ? 0 : (total + kReplicationBlock - 1) / kReplicationBlock;
    std::vector<Partial> partials(nblocks);
    if (nblocks == 0) return partials;

    auto body = [&](std::uint64_t b) {
        const BlockRange range{b * kReplicationBlock,
                               std::min(total, (b + 1) * kReplicationBlock)};
        partials[b] = fn(b, range);
    };

    if (workers <= 1 || nblocks == 1) {
        for (std::uint64_t b = 0; b < nblocks; ++b) body(b);
        return partials;
    }

    std::atomic<std::uint64_t> next{0};
    const unsigned count =
        static_cast<unsigned>(std::min<std::uint64_t>(workers, nblocks));
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= nblocks) break;
                body(b);
            }
        });
    }
    for (auto& t : pool) t.join();
    return partials;
}

} // namespace tailbound
