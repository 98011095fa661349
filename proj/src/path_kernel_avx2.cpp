// AVX2 path kernel: 8 replications in flight. The Philox state is kept in
// struct-of-arrays form (one __m256i per counter word, 8 lanes of 32 bits);
// accumulators split into two 4-lane vectors. Per-lane arithmetic is the
// same IEEE sequence as the scalar kernel, so counts and sums match it bit
// for bit. Compiled with -mavx2 only (no FMA) and -ffp-contract=off.

#include "rounderr/path_kernel.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include "rounderr/philox.hpp"

namespace rounderr::sim {

namespace {

// 8-lane 32x32->64 multiply, split into high/low words in place.
inline void mul_hi_lo(__m256i v, __m256i mul, __m256i& hi, __m256i& lo) {
    const __m256i lo_mask = _mm256_set1_epi64x(0x00000000FFFFFFFFll);
    const __m256i prod_even = _mm256_mul_epu32(v, mul);
    const __m256i prod_odd = _mm256_mul_epu32(_mm256_srli_epi64(v, 32), mul);
    hi = _mm256_or_si256(_mm256_srli_epi64(prod_even, 32),
                         _mm256_andnot_si256(lo_mask, prod_odd));
    lo = _mm256_or_si256(_mm256_and_si256(prod_even, lo_mask),
                         _mm256_slli_epi64(prod_odd, 32));
}

// Philox4x32-10 on 8 blocks; counter words x0/x1 are lane-uniform (block
// index), x2/x3 carry the per-lane replication index.
inline void philox_block8(std::uint64_t block_index, __m256i rep_lo, __m256i rep_hi,
                          std::uint64_t seed, __m256i out[4]) {
    using rounderr::rng::Philox4x32;
    __m256i x0 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(block_index)));
    __m256i x1 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(block_index >> 32)));
    __m256i x2 = rep_lo;
    __m256i x3 = rep_hi;
    __m256i k0 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed)));
    __m256i k1 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(seed >> 32)));
    const __m256i mul0 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kMul0));
    const __m256i mul1 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kMul1));
    const __m256i weyl0 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kWeyl0));
    const __m256i weyl1 = _mm256_set1_epi32(static_cast<int>(Philox4x32::kWeyl1));
    for (int round = 0; round < Philox4x32::kRounds; ++round) {
        if (round != 0) {
            k0 = _mm256_add_epi32(k0, weyl0);
            k1 = _mm256_add_epi32(k1, weyl1);
        }
        __m256i hi0, lo0, hi1, lo1;
        mul_hi_lo(x0, mul0, hi0, lo0);
        mul_hi_lo(x2, mul1, hi1, lo1);
        x0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), k0);
        x1 = lo1;
        x2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), k1);
        x3 = lo0;
    }
    out[0] = x0;
    out[1] = x1;
    out[2] = x2;
    out[3] = x3;
}

// Interleave two 32-bit word vectors into 64-bit draws, split by lane half:
// `a` gets replications 0..3, `b` gets 4..7 (in order).
inline void combine_words(__m256i w_low, __m256i w_high, __m256i& a, __m256i& b) {
    const __m256i t_lo = _mm256_unpacklo_epi32(w_low, w_high);   // reps 0,1,4,5
    const __m256i t_hi = _mm256_unpackhi_epi32(w_low, w_high);   // reps 2,3,6,7
    a = _mm256_permute2x128_si256(t_lo, t_hi, 0x20);
    b = _mm256_permute2x128_si256(t_lo, t_hi, 0x31);
}

// Same mapping as rng::signed_unit, 4 lanes at a time. Every step is exact,
// so the scalar and vector results are identical bit patterns.
inline __m256d signed_unit4(__m256i w) {
    const __m256i m52 = _mm256_set1_epi64x((1ll << 52) - 1);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000ll);
    const __m256i mant = _mm256_and_si256(_mm256_srli_epi64(w, 1), m52);
    __m256d t = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(mant, one_bits)),
                              _mm256_set1_pd(1.0));
    t = _mm256_add_pd(t, _mm256_set1_pd(0x1p-53));
    const __m256i sign = _mm256_slli_epi64(_mm256_and_si256(w, _mm256_set1_epi64x(1)), 63);
    return _mm256_xor_pd(t, _mm256_castsi256_pd(sign));
}

}  // namespace

void run_paths_avx2(const PathLayout& layout, std::uint64_t seed, std::uint64_t rep_begin,
                    std::uint64_t rep_end, std::span<const double> grid, ChunkAccum& accum) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
    std::uint64_t rep = rep_begin;
    for (; rep + 8 <= rep_end; rep += 8) {
        __m256i rep_lo = _mm256_setr_epi32(
            static_cast<int>(static_cast<std::uint32_t>(rep + 0)),
            static_cast<int>(static_cast<std::uint32_t>(rep + 1)),
            static_cast<int>(static_cast<std::uint32_t>(rep + 2)),
            static_cast<int>(static_cast<std::uint32_t>(rep + 3)),
            static_cast<int>(static_cast<std::uint32_t>(rep + 4)),
            static_cast<int>(static_cast<std::uint32_t>(rep + 5)),
            static_cast<int>(static_cast<std::uint32_t>(rep + 6)),
            static_cast<int>(static_cast<std::uint32_t>(rep + 7)));
        __m256i rep_hi = _mm256_setr_epi32(
            static_cast<int>(static_cast<std::uint32_t>((rep + 0) >> 32)),
            static_cast<int>(static_cast<std::uint32_t>((rep + 1) >> 32)),
            static_cast<int>(static_cast<std::uint32_t>((rep + 2) >> 32)),
            static_cast<int>(static_cast<std::uint32_t>((rep + 3) >> 32)),
            static_cast<int>(static_cast<std::uint32_t>((rep + 4) >> 32)),
            static_cast<int>(static_cast<std::uint32_t>((rep + 5) >> 32)),
            static_cast<int>(static_cast<std::uint32_t>((rep + 6) >> 32)),
            static_cast<int>(static_cast<std::uint32_t>((rep + 7) >> 32)));

        __m256d sum_a = _mm256_setzero_pd();
        __m256d sum_b = _mm256_setzero_pd();
        __m256d peak_a = _mm256_setzero_pd();
        __m256d peak_b = _mm256_setzero_pd();
        __m256d next_a = _mm256_setzero_pd();
        __m256d next_b = _mm256_setzero_pd();
        std::uint64_t draw = 0;

        for (const auto& seg : layout.segments) {
            const __m256d scale = _mm256_set1_pd(seg.scale);
            for (std::uint64_t i = 0; i < seg.count; ++i) {
                __m256d x_a, x_b;
                if ((draw & 1) == 0) {
                    __m256i out[4];
                    philox_block8(draw >> 1, rep_lo, rep_hi, seed, out);
                    __m256i even_a, even_b, odd_a, odd_b;
                    combine_words(out[0], out[1], even_a, even_b);
                    combine_words(out[2], out[3], odd_a, odd_b);
                    x_a = signed_unit4(even_a);
                    x_b = signed_unit4(even_b);
                    next_a = signed_unit4(odd_a);
                    next_b = signed_unit4(odd_b);
                } else {
                    x_a = next_a;
                    x_b = next_b;
                }
                ++draw;
                sum_a = _mm256_add_pd(sum_a, _mm256_mul_pd(scale, x_a));
                sum_b = _mm256_add_pd(sum_b, _mm256_mul_pd(scale, x_b));
                peak_a = _mm256_max_pd(peak_a, _mm256_and_pd(sum_a, abs_mask));
                peak_b = _mm256_max_pd(peak_b, _mm256_and_pd(sum_b, abs_mask));
            }
        }

        alignas(32) double sums[8], peaks[8];
        _mm256_storeu_pd(sums, sum_a);
        _mm256_storeu_pd(sums + 4, sum_b);
        _mm256_storeu_pd(peaks, peak_a);
        _mm256_storeu_pd(peaks + 4, peak_b);
        for (int lane = 0; lane < 8; ++lane) accum.update(grid, peaks[lane], sums[lane]);
    }
    if (rep < rep_end) run_paths_scalar(layout, seed, rep, rep_end, grid, accum);
}

}  // namespace rounderr::sim

#else  // !__AVX2__

#include <stdexcept>

namespace rounderr::sim {

void run_paths_avx2(const PathLayout&, std::uint64_t, std::uint64_t, std::uint64_t,
                    std::span<const double>, ChunkAccum&) {
    throw std::runtime_error("AVX2 kernel not compiled for this target");
}

}  // namespace rounderr::sim

#endif
