#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace telegraph {

/// Philox4x32-10 block function (Salmon et al., Random123). Counter-based:
/// output depends only on (counter, key), so any path can be regenerated
/// without touching the others.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept {
        for (int r = 0; r < 10; ++r) {
            if (r > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            ctr = round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static Counter round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = std::uint64_t{kM0} * c[0];
        const std::uint64_t p1 = std::uint64_t{kM1} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Sub-stream tags. Each path owns one stream per tag.
enum class StreamTag : std::uint32_t { Dynamics = 0, InitialAtom = 1 };

/// Deterministic random stream for one path: keyed by the run seed, addressed
/// by (tag, path index), advanced by an internal block counter.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t path, StreamTag tag = StreamTag::Dynamics) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{0u, static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(path),
               static_cast<std::uint32_t>(path >> 32)} {}

    std::uint32_t next_u32() noexcept {
        if (pos_ == 4) {
            block_ = Philox4x32::generate(ctr_, key_);
            ++ctr_[0];
            pos_ = 0;
        }
        return block_[pos_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        const std::uint64_t hi = next_u32() >> 5;  // 27 bits
        const std::uint64_t lo = next_u32() >> 6;  // 26 bits
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

    /// Exponential holding time; infinite when the rate is zero.
    double exponential(double rate) noexcept {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log1p(-uniform()) / rate;
    }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int pos_ = 4;
};

}  // namespace telegraph
