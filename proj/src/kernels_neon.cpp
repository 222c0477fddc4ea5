// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

// AArch64 NEON variants. NEON is mandatory on AArch64, so no run-time
// feature check is needed beyond the compile-time guard.

#include "stereotrace/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace stereotrace::simd {

#if defined(__aarch64__)

namespace {

inline float64x2_t dot3(float64x2_t ax, float64x2_t ay, float64x2_t az, float64x2_t bx, float64x2_t by,
                        float64x2_t bz) {
  return vaddq_f64(vaddq_f64(vmulq_f64(ax, bx), vmulq_f64(ay, by)), vmulq_f64(az, bz));
}

// Lane mask helpers mirroring the scalar short-circuit tests, NaN included.
inline uint64x2_t not_less(float64x2_t a, float64x2_t b) {
  return vreinterpretq_u64_u32(vmvnq_u32(vreinterpretq_u32_u64(vcltq_f64(a, b))));
}
inline uint64x2_t not_greater(float64x2_t a, float64x2_t b) {
  return vreinterpretq_u64_u32(vmvnq_u32(vreinterpretq_u32_u64(vcgtq_f64(a, b))));
}

void intersect_range_neon(const TriangleArrays& tris, std::size_t begin, std::size_t end, const Ray& ray,
                          double t_min, NearestCandidate& candidate) {
  const float64x2_t dx = vdupq_n_f64(ray.direction.x);
  const float64x2_t dy = vdupq_n_f64(ray.direction.y);
  const float64x2_t dz = vdupq_n_f64(ray.direction.z);
  const float64x2_t ox = vdupq_n_f64(ray.origin.x);
  const float64x2_t oy = vdupq_n_f64(ray.origin.y);
  const float64x2_t oz = vdupq_n_f64(ray.origin.z);
  const float64x2_t eps = vdupq_n_f64(kParallelEpsilon);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t tmin = vdupq_n_f64(t_min);

  std::size_t i = begin;
  for (; i + 2 <= end; i += 2) {
    const float64x2_t v0x = vld1q_f64(&tris.x0[i]);
    const float64x2_t v0y = vld1q_f64(&tris.y0[i]);
    const float64x2_t v0z = vld1q_f64(&tris.z0[i]);
    const float64x2_t e1x = vsubq_f64(vld1q_f64(&tris.x1[i]), v0x);
    const float64x2_t e1y = vsubq_f64(vld1q_f64(&tris.y1[i]), v0y);
    const float64x2_t e1z = vsubq_f64(vld1q_f64(&tris.z1[i]), v0z);
    const float64x2_t e2x = vsubq_f64(vld1q_f64(&tris.x2[i]), v0x);
    const float64x2_t e2y = vsubq_f64(vld1q_f64(&tris.y2[i]), v0y);
    const float64x2_t e2z = vsubq_f64(vld1q_f64(&tris.z2[i]), v0z);

    const float64x2_t px = vsubq_f64(vmulq_f64(dy, e2z), vmulq_f64(dz, e2y));
    const float64x2_t py = vsubq_f64(vmulq_f64(dz, e2x), vmulq_f64(dx, e2z));
    const float64x2_t pz = vsubq_f64(vmulq_f64(dx, e2y), vmulq_f64(dy, e2x));
    const float64x2_t det = dot3(e1x, e1y, e1z, px, py, pz);
    uint64x2_t ok = not_less(vabsq_f64(det), eps);

    const float64x2_t inv = vdivq_f64(one, det);
    const float64x2_t sx = vsubq_f64(ox, v0x);
    const float64x2_t sy = vsubq_f64(oy, v0y);
    const float64x2_t sz = vsubq_f64(oz, v0z);
    const float64x2_t u = vmulq_f64(dot3(sx, sy, sz, px, py, pz), inv);
    ok = vandq_u64(ok, vandq_u64(not_less(u, zero), not_greater(u, one)));

    const float64x2_t qx = vsubq_f64(vmulq_f64(sy, e1z), vmulq_f64(sz, e1y));
    const float64x2_t qy = vsubq_f64(vmulq_f64(sz, e1x), vmulq_f64(sx, e1z));
    const float64x2_t qz = vsubq_f64(vmulq_f64(sx, e1y), vmulq_f64(sy, e1x));
    const float64x2_t v = vmulq_f64(dot3(dx, dy, dz, qx, qy, qz), inv);
    ok = vandq_u64(ok, vandq_u64(not_less(v, zero), not_greater(vaddq_f64(u, v), one)));

    const float64x2_t t = vmulq_f64(dot3(e2x, e2y, e2z, qx, qy, qz), inv);
    ok = vandq_u64(ok, vcgtq_f64(t, tmin));
    ok = vandq_u64(ok, vcleq_f64(t, vdupq_n_f64(candidate.t)));

    if (vgetq_lane_u64(ok, 0)) candidate.offer(vgetq_lane_f64(t, 0), static_cast<std::uint32_t>(i));
    if (vgetq_lane_u64(ok, 1)) candidate.offer(vgetq_lane_f64(t, 1), static_cast<std::uint32_t>(i + 1));
  }
  intersect_range_scalar(tris, i, end, ray, t_min, candidate);
}

void quantize_neon(std::span<const double> in, std::span<std::uint8_t> out) {
  const float64x2_t scale = vdupq_n_f64(255.0);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t lo = vdupq_n_f64(0.0);
  const float64x2_t hi = vdupq_n_f64(255.0);

  std::size_t i = 0;
  for (; i + 2 <= in.size(); i += 2) {
    const float64x2_t x = vmulq_f64(vld1q_f64(&in[i]), scale);
    const float64x2_t whole = vrndq_f64(x);
    const float64x2_t frac = vsubq_f64(x, whole);
    const uint64x2_t up = vcgeq_f64(frac, half);
    float64x2_t r = vaddq_f64(whole, vreinterpretq_f64_u64(vandq_u64(up, vreinterpretq_u64_f64(one))));
    r = vminq_f64(vmaxq_f64(r, lo), hi);
    const uint64x2_t ints = vcvtq_u64_f64(r);
    out[i] = static_cast<std::uint8_t>(vgetq_lane_u64(ints, 0));
    out[i + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(ints, 1));
  }
  quantize_scalar(in.subspan(i), out.subspan(i));
}

void anaglyph_neon(std::span<const std::uint8_t> left, std::span<const std::uint8_t> right,
                   std::span<std::uint8_t> out) {
  std::size_t i = 0;
  for (; i + 48 <= left.size(); i += 48) {
    const uint8x16x3_t l = vld3q_u8(&left[i]);
    uint8x16x3_t r = vld3q_u8(&right[i]);
    r.val[0] = l.val[0];
    vst3q_u8(&out[i], r);
  }
  anaglyph_scalar(left.subspan(i), right.subspan(i), out.subspan(i));
}

// 32 input pixels -> 16 output pixels per iteration; vrhaddq_u8 is (a + b + 1) >> 1.
void squeeze_row_neon(std::span<const std::uint8_t> in, std::span<std::uint8_t> out) {
  const std::size_t out_pixels = in.size() / 6;
  std::size_t p = 0;
  std::size_t o = 0;
  for (; p + 96 <= in.size() && o + 48 <= out_pixels * 3; p += 96, o += 48) {
    const uint8x16x3_t a = vld3q_u8(&in[p]);
    const uint8x16x3_t b = vld3q_u8(&in[p + 48]);
    uint8x16x3_t res;
    for (int c = 0; c < 3; ++c) {
      const uint8x16_t even = vuzp1q_u8(a.val[c], b.val[c]);
      const uint8x16_t odd = vuzp2q_u8(a.val[c], b.val[c]);
      res.val[c] = vrhaddq_u8(even, odd);
    }
    vst3q_u8(&out[o], res);
  }
  squeeze_row_scalar(in.subspan(p), out.subspan(o));
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{Isa::Neon, intersect_range_neon, quantize_neon, anaglyph_neon, squeeze_row_neon};
  return &table;
}

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace stereotrace::simd
