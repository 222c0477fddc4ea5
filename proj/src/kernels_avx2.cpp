// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 variants. Functions carry a target attribute instead of compiling the
// file with -mavx2, so nothing here leaks AVX2 code into shared inline
// functions; dispatch happens only after a CPUID check.

#include "stereotrace/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define STEREOTRACE_HAVE_AVX2 1
#include <immintrin.h>

#include <cstring>
#endif

namespace stereotrace::simd {

#if STEREOTRACE_HAVE_AVX2

namespace {

#define ST_AVX2 __attribute__((target("avx2")))

// ((a.x * b.x + a.y * b.y) + a.z * b.z), same association as dot().
ST_AVX2 inline __m256d dot3(__m256d ax, __m256d ay, __m256d az, __m256d bx, __m256d by, __m256d bz) {
  return _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ax, bx), _mm256_mul_pd(ay, by)), _mm256_mul_pd(az, bz));
}

ST_AVX2 void intersect_range_avx2(const TriangleArrays& tris, std::size_t begin, std::size_t end, const Ray& ray,
                                  double t_min, NearestCandidate& candidate) {
  const __m256d dx = _mm256_set1_pd(ray.direction.x);
  const __m256d dy = _mm256_set1_pd(ray.direction.y);
  const __m256d dz = _mm256_set1_pd(ray.direction.z);
  const __m256d ox = _mm256_set1_pd(ray.origin.x);
  const __m256d oy = _mm256_set1_pd(ray.origin.y);
  const __m256d oz = _mm256_set1_pd(ray.origin.z);
  const __m256d eps = _mm256_set1_pd(kParallelEpsilon);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d tmin = _mm256_set1_pd(t_min);
  const __m256d sign = _mm256_set1_pd(-0.0);

  std::size_t i = begin;
  for (; i + 4 <= end; i += 4) {
    const __m256d v0x = _mm256_loadu_pd(&tris.x0[i]);
    const __m256d v0y = _mm256_loadu_pd(&tris.y0[i]);
    const __m256d v0z = _mm256_loadu_pd(&tris.z0[i]);
    const __m256d e1x = _mm256_sub_pd(_mm256_loadu_pd(&tris.x1[i]), v0x);
    const __m256d e1y = _mm256_sub_pd(_mm256_loadu_pd(&tris.y1[i]), v0y);
    const __m256d e1z = _mm256_sub_pd(_mm256_loadu_pd(&tris.z1[i]), v0z);
    const __m256d e2x = _mm256_sub_pd(_mm256_loadu_pd(&tris.x2[i]), v0x);
    const __m256d e2y = _mm256_sub_pd(_mm256_loadu_pd(&tris.y2[i]), v0y);
    const __m256d e2z = _mm256_sub_pd(_mm256_loadu_pd(&tris.z2[i]), v0z);

    // p = cross(d, e2)
    const __m256d px = _mm256_sub_pd(_mm256_mul_pd(dy, e2z), _mm256_mul_pd(dz, e2y));
    const __m256d py = _mm256_sub_pd(_mm256_mul_pd(dz, e2x), _mm256_mul_pd(dx, e2z));
    const __m256d pz = _mm256_sub_pd(_mm256_mul_pd(dx, e2y), _mm256_mul_pd(dy, e2x));
    const __m256d det = dot3(e1x, e1y, e1z, px, py, pz);
    __m256d ok = _mm256_cmp_pd(_mm256_andnot_pd(sign, det), eps, _CMP_NLT_UQ);

    const __m256d inv = _mm256_div_pd(one, det);
    const __m256d sx = _mm256_sub_pd(ox, v0x);
    const __m256d sy = _mm256_sub_pd(oy, v0y);
    const __m256d sz = _mm256_sub_pd(oz, v0z);
    const __m256d u = _mm256_mul_pd(dot3(sx, sy, sz, px, py, pz), inv);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(u, zero, _CMP_NLT_UQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(u, one, _CMP_NGT_UQ));

    // q = cross(s, e1)
    const __m256d qx = _mm256_sub_pd(_mm256_mul_pd(sy, e1z), _mm256_mul_pd(sz, e1y));
    const __m256d qy = _mm256_sub_pd(_mm256_mul_pd(sz, e1x), _mm256_mul_pd(sx, e1z));
    const __m256d qz = _mm256_sub_pd(_mm256_mul_pd(sx, e1y), _mm256_mul_pd(sy, e1x));
    const __m256d v = _mm256_mul_pd(dot3(dx, dy, dz, qx, qy, qz), inv);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(v, zero, _CMP_NLT_UQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(_mm256_add_pd(u, v), one, _CMP_NGT_UQ));

    const __m256d t = _mm256_mul_pd(dot3(e2x, e2y, e2z, qx, qy, qz), inv);
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(t, tmin, _CMP_GT_OQ));
    ok = _mm256_and_pd(ok, _mm256_cmp_pd(t, _mm256_set1_pd(candidate.t), _CMP_LE_OQ));

    int mask = _mm256_movemask_pd(ok);
    if (mask == 0) continue;
    alignas(32) double ts[4];
    _mm256_store_pd(ts, t);
    while (mask != 0) {
      const int lane = __builtin_ctz(static_cast<unsigned>(mask));
      candidate.offer(ts[lane], static_cast<std::uint32_t>(i + lane));
      mask &= mask - 1;
    }
  }
  intersect_range_scalar(tris, i, end, ray, t_min, candidate);
}

ST_AVX2 void quantize_avx2(std::span<const double> in, std::span<std::uint8_t> out) {
  const __m256d scale = _mm256_set1_pd(255.0);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lo = _mm256_setzero_pd();
  const __m256d hi = _mm256_set1_pd(255.0);

  std::size_t i = 0;
  for (; i + 4 <= in.size(); i += 4) {
    const __m256d x = _mm256_mul_pd(_mm256_loadu_pd(&in[i]), scale);
    // Round half away from zero for x >= 0: trunc(x) + (frac(x) >= 0.5).
    const __m256d whole = _mm256_round_pd(x, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
    const __m256d frac = _mm256_sub_pd(x, whole);
    __m256d r = _mm256_add_pd(whole, _mm256_and_pd(_mm256_cmp_pd(frac, half, _CMP_GE_OQ), one));
    r = _mm256_min_pd(_mm256_max_pd(r, lo), hi);
    const __m128i ints = _mm256_cvttpd_epi32(r);
    const __m128i words = _mm_packus_epi32(ints, ints);
    const __m128i bytes = _mm_packus_epi16(words, words);
    const int packed = _mm_cvtsi128_si32(bytes);
    std::memcpy(&out[i], &packed, 4);
  }
  quantize_scalar(in.subspan(i), out.subspan(i));
}

// Byte k of a 96-byte block comes from the left image iff k % 3 == 0.
struct AnaglyphMasks {
  alignas(32) std::uint8_t bytes[96];
  AnaglyphMasks() {
    for (int k = 0; k < 96; ++k) bytes[k] = (k % 3 == 0) ? 0x80 : 0x00;
  }
};

ST_AVX2 inline void blend_block(const std::uint8_t* left, const std::uint8_t* right, std::uint8_t* out, __m256i mask) {
  const __m256i l = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(left));
  const __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(right));
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out), _mm256_blendv_epi8(r, l, mask));
}

ST_AVX2 void anaglyph_avx2(std::span<const std::uint8_t> left, std::span<const std::uint8_t> right,
                           std::span<std::uint8_t> out) {
  static const AnaglyphMasks masks;
  const __m256i m0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(masks.bytes));
  const __m256i m1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(masks.bytes + 32));
  const __m256i m2 = _mm256_load_si256(reinterpret_cast<const __m256i*>(masks.bytes + 64));

  std::size_t i = 0;
  for (; i + 96 <= left.size(); i += 96) {
    blend_block(left.data() + i, right.data() + i, out.data() + i, m0);
    blend_block(left.data() + i + 32, right.data() + i + 32, out.data() + i + 32, m1);
    blend_block(left.data() + i + 64, right.data() + i + 64, out.data() + i + 64, m2);
  }
  anaglyph_scalar(left.subspan(i), right.subspan(i), out.subspan(i));
}

ST_AVX2 inline __m128i avg_with_next_pixel(const std::uint8_t* at) {
  const __m128i a = _mm_loadu_si128(reinterpret_cast<const __m128i*>(at));
  const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(at + 3));
  return _mm_avg_epu8(a, b);
}

// 16 input pixels (48 bytes) -> 8 output pixels (24 bytes). avgN holds
// avg(in[k], in[k + 3]) for k in [16N, 16N + 16); output byte 3j + c is
// avg(in[6j + c], in[6j + 3 + c]).
ST_AVX2 void squeeze_row_avx2(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) {
  constexpr char Z = -1;
  const __m128i t0 = _mm_setr_epi8(0, 1, 2, 6, 7, 8, 12, 13, 14, Z, Z, Z, Z, Z, Z, Z);
  const __m128i t1 = _mm_setr_epi8(Z, Z, Z, Z, Z, Z, Z, Z, Z, 2, 3, 4, 8, 9, 10, 14);
  const __m128i t2 = _mm_setr_epi8(15, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z);
  const __m128i t3 = _mm_setr_epi8(Z, 0, 4, 5, 6, 10, 11, 12, Z, Z, Z, Z, Z, Z, Z, Z);

  const std::size_t out_pixels = in.size() / 6;
  std::size_t p = 0;  // input byte offset
  std::size_t o = 0;  // output byte offset
  for (; p + 51 <= in.size() && o + 24 <= out_pixels * 3; p += 48, o += 24) {
    const __m128i avg0 = avg_with_next_pixel(in.data() + p);
    const __m128i avg1 = avg_with_next_pixel(in.data() + p + 16);
    const __m128i avg2 = avg_with_next_pixel(in.data() + p + 32);
    const __m128i first = _mm_or_si128(_mm_shuffle_epi8(avg0, t0), _mm_shuffle_epi8(avg1, t1));
    const __m128i second = _mm_or_si128(_mm_shuffle_epi8(avg1, t2), _mm_shuffle_epi8(avg2, t3));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(&out[o]), first);
    _mm_storel_epi64(reinterpret_cast<__m128i*>(&out[o + 16]), second);
  }
  squeeze_row_scalar(in.subspan(p), out.subspan(o));
}

#undef ST_AVX2

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::Avx2, intersect_range_avx2, quantize_avx2, anaglyph_avx2, squeeze_row_avx2};
  return &table;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace stereotrace::simd
