/**
 * @file rng.hpp
 * @brief Philox4x32-10 counter-based generator and per-path random streams.
 *
 * Every simulated path owns the stream keyed by the run seed with the path
 * index in the upper counter words, so results do not depend on how paths are
 * grouped into work units or which thread evaluates them.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace cdois {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter apply(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Uniform and exponential variates for one path. Each Philox block yields
/// two 53-bit uniforms.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path_index) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path_index)),
          path_hi_(static_cast<std::uint32_t>(path_index >> 32)) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        if (next_ == 2) refill();
        return buffer_[next_++];
    }

    /// Exponential variate with the given rate.
    double exponential(double rate) noexcept { return -std::log(uniform()) / rate; }

    std::uint64_t blocks_used() const noexcept { return block_; }

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
        const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    void refill() noexcept {
        const auto out = Philox4x32::apply(
            {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), path_lo_,
             path_hi_},
            key_);
        ++block_;
        buffer_[0] = to_unit(out[0], out[1]);
        buffer_[1] = to_unit(out[2], out[3]);
        next_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    std::uint64_t block_ = 0;
    std::array<double, 2> buffer_{};
    int next_ = 2;
};

}  // namespace cdois
