#pragma once
// Philox4x32-10 counter-based generator (Salmon et al. 2011 construction).
// A stream is (key = 64-bit seed, stream id); the counter is the draw index,
// so any member of an ensemble can be regenerated independently.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace nlslab {

class Philox {
public:
    using block = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static block philox4x32_10(block ctr, key_type key) {
        constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int r = 0; r < 10; ++r) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }

    Philox(std::uint64_t seed, std::uint64_t stream = 0)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, stream_(stream) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // uniform on (0, 1), 53 random bits, never 0
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 2.0 * 3.14159265358979323846 * uniform();
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    // standard complex Gaussian, E|z|^2 = 1
    std::complex<double> complex_normal() {
        const double a = normal(), b = normal();
        return {a * 0.70710678118654752440, b * 0.70710678118654752440};
    }

    std::uint64_t draws() const { return counter_; }

private:
    void refill() {
        const block ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buf_ = philox4x32_10(ctr, key_);
        ++counter_;
        pos_ = 0;
    }

    key_type key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    block buf_{};
    int pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace nlslab
