#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace rounderr::rng {

// Philox4x32-10 counter-based generator (the Random123 parameterization).
// Stream layout, fixed as version "philox4x32-10/v1" of this project:
//   block for draw d of replication r under seed s:
//     counter = (lo32(d>>1), hi32(d>>1), lo32(r), hi32(r)), key = (lo32(s), hi32(s))
//   each block yields two 64-bit draws: words (out0 | out1<<32) and
//   (out2 | out3<<32) for even/odd d.
// Results therefore depend only on (seed, replication, draw index), never on
// thread or lane assignment.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    static constexpr int kRounds = 10;

    static constexpr std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> x,
                                                        std::uint32_t k0, std::uint32_t k1) {
        for (int round = 0; round < kRounds; ++round) {
            if (round != 0) {
                k0 += kWeyl0;
                k1 += kWeyl1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x[2];
            x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k0,
                 static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k1,
                 static_cast<std::uint32_t>(p0)};
        }
        return x;
    }
};

// Both 64-bit words of the block shared by draws 2b and 2b+1.
inline std::array<std::uint64_t, 2> draw_pair(std::uint64_t seed, std::uint64_t rep,
                                              std::uint64_t block_index) {
    const auto out = Philox4x32::block({static_cast<std::uint32_t>(block_index),
                                        static_cast<std::uint32_t>(block_index >> 32),
                                        static_cast<std::uint32_t>(rep),
                                        static_cast<std::uint32_t>(rep >> 32)},
                                       static_cast<std::uint32_t>(seed),
                                       static_cast<std::uint32_t>(seed >> 32));
    return {out[0] | (static_cast<std::uint64_t>(out[1]) << 32),
            out[2] | (static_cast<std::uint64_t>(out[3]) << 32)};
}

inline std::uint64_t raw_draw(std::uint64_t seed, std::uint64_t rep, std::uint64_t draw_index) {
    return draw_pair(seed, rep, draw_index >> 1)[draw_index & 1];
}

// 53 random bits -> the open interval (-1, 1): bit 0 is the sign, bits 1..52
// form the magnitude (m + 1/2) * 2^-52. Every operation is exact, so any
// correct implementation (scalar or vector) produces identical bits. The
// result is never 0 and never +-1, and the distribution is symmetric by
// construction.
inline double signed_unit(std::uint64_t word) {
    const std::uint64_t mantissa = (word >> 1) & ((std::uint64_t{1} << 52) - 1);
    double t = std::bit_cast<double>(std::uint64_t{0x3FF0000000000000} | mantissa) - 1.0;
    t += 0x1p-53;
    return (word & 1) ? -t : t;
}

// 52 random bits -> [lo, hi), used for simulated input data.
inline double unit_range(std::uint64_t word, double lo, double hi) {
    const double f = static_cast<double>(word >> 12) * 0x1p-52;
    return lo + (hi - lo) * f;
}

inline double uniform_pm1(std::uint64_t seed, std::uint64_t rep, std::uint64_t draw_index) {
    return signed_unit(raw_draw(seed, rep, draw_index));
}

}  // namespace rounderr::rng
