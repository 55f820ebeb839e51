#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace lumpsum {

/// Philox4x32-10 counter-based generator. Each (seed, stream) pair owns an
/// independent sequence, so path i draws the same numbers whether paths run
/// serially or on any number of threads.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

    /// Next 32 random bits.
    std::uint32_t next_u32() noexcept {
        if (used_ == 4) refill();
        return block_[used_++];
    }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        const std::uint64_t hi = next_u32() >> 5;  // 27 bits
        const std::uint64_t lo = next_u32() >> 6;  // 26 bits
        return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal by the Box-Muller transform; values come in pairs.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85;

    void refill() noexcept {
        std::array<std::uint32_t, 4> x = ctr_;
        std::array<std::uint32_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * x[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * x[2];
            x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k[0], static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k[1], static_cast<std::uint32_t>(p0)};
            k[0] += kWeylA;
            k[1] += kWeylB;
        }
        block_ = x;
        used_ = 0;
        if (++ctr_[0] == 0) ++ctr_[1];
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> block_{};
    int used_ = 4;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lumpsum
