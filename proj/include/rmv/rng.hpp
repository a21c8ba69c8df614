#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace rmv {

// Counter-based generator (Philox4x32-10). Each (seed, stream) pair yields an
// independent substream, so path i can be generated in isolation: simulating
// paths [a, b) produces bit-identical draws regardless of which other paths
// are simulated, which thread runs them, or how work is blocked.
class PathRng {
  public:
    PathRng(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    // Raw 64-bit output; consumes half a 4x32 block per call.
    std::uint64_t next_u64() {
        if (half_) {
            half_ = false;
            return (static_cast<std::uint64_t>(block_[3]) << 32) | block_[2];
        }
        block_ = philox(block_index_++);
        half_ = true;
        return (static_cast<std::uint64_t>(block_[1]) << 32) | block_[0];
    }

    // Uniform on (0, 1]; never returns 0, so log(u) is always finite.
    double uniform() {
        const std::uint64_t x = next_u64();
        return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the paired draw is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static void round_once(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    }

    std::array<std::uint32_t, 4> philox(std::uint64_t counter) const {
        std::array<std::uint32_t, 4> c{
            static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int r = 0; r < 10; ++r) {
            round_once(c, k0, k1);
            k0 += kW0;
            k1 += kW1;
        }
        return c;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_ = 0;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> block_{};
    bool half_ = false;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rmv
