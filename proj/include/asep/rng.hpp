#pragma once

#include <cstdint>

namespace asep {

/// Counter-based uniform stream (Philox4x32-10).
///
/// Every draw is a pure function of (master_seed, trial_index, counter), so
/// trials keyed by distinct (seed, trial) pairs are independent streams and a
/// trial can be replayed bit-identically regardless of how the trial farm is
/// scheduled. One Philox block yields four 32-bit lanes; the block for draw c
/// is c/4 and the lane is c%4.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t trial_index)
        : seed_(master_seed), trial_(trial_index) {}

    /// Next variate in [0, 1); advances the counter by one.
    double next_uniform() {
        const std::uint64_t block = counter_ >> 2;
        const unsigned lane = static_cast<unsigned>(counter_ & 3u);
        ++counter_;
        if (block != cached_block_) fill_block(block);
        return static_cast<double>(words_[lane]) * 0x1.0p-32;
    }

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t trial_index() const { return trial_; }
    std::uint64_t counter() const { return counter_; }

private:
    void fill_block(std::uint64_t block) {
        std::uint32_t c0 = static_cast<std::uint32_t>(block);
        std::uint32_t c1 = static_cast<std::uint32_t>(block >> 32);
        std::uint32_t c2 = static_cast<std::uint32_t>(trial_);
        std::uint32_t c3 = static_cast<std::uint32_t>(trial_ >> 32);
        std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
        std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ull * c0;
            const std::uint64_t p1 = 0xCD9E8D57ull * c2;
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            c0 = hi1 ^ c1 ^ k0;
            c1 = lo1;
            c2 = hi0 ^ c3 ^ k1;
            c3 = lo0;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        words_[0] = c0;
        words_[1] = c1;
        words_[2] = c2;
        words_[3] = c3;
        cached_block_ = block;
    }

    std::uint64_t seed_;
    std::uint64_t trial_;
    std::uint64_t counter_ = 0;
    std::uint64_t cached_block_ = ~0ull;
    std::uint32_t words_[4] = {0, 0, 0, 0};
};

}  // namespace asep
