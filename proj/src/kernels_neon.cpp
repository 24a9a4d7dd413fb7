// NEON variants (aarch64). Same element-wise operation order as the scalar
// reference; fused multiply-add is deliberately not used.

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cstddef>
#include <span>

namespace degenfuse::kernels::detail {

void doppler_residuals_neon(std::span<const double> dx,
                            std::span<const double> dy,
                            std::span<const double> dz,
                            std::span<const double> doppler, const double v[3],
                            std::span<double> out) {
  const std::size_t n = dx.size();
  const float64x2_t vx = vdupq_n_f64(v[0]);
  const float64x2_t vy = vdupq_n_f64(v[1]);
  const float64x2_t vz = vdupq_n_f64(v[2]);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vld1q_f64(doppler.data() + i);
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(dx.data() + i), vx));
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(dy.data() + i), vy));
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(dz.data() + i), vz));
    vst1q_f64(out.data() + i, acc);
  }
  for (; i < n; ++i) {
    out[i] = ((doppler[i] + dx[i] * v[0]) + dy[i] * v[1]) + dz[i] * v[2];
  }
}

void transform_points_neon(const double rot[9], const double trans[3],
                           std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, std::span<double> ox,
                           std::span<double> oy, std::span<double> oz) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t px = vld1q_f64(x.data() + i);
    const float64x2_t py = vld1q_f64(y.data() + i);
    const float64x2_t pz = vld1q_f64(z.data() + i);
    float64x2_t a = vaddq_f64(vmulq_f64(vdupq_n_f64(rot[0]), px),
                              vmulq_f64(vdupq_n_f64(rot[1]), py));
    a = vaddq_f64(vaddq_f64(a, vmulq_f64(vdupq_n_f64(rot[2]), pz)),
                  vdupq_n_f64(trans[0]));
    float64x2_t b = vaddq_f64(vmulq_f64(vdupq_n_f64(rot[3]), px),
                              vmulq_f64(vdupq_n_f64(rot[4]), py));
    b = vaddq_f64(vaddq_f64(b, vmulq_f64(vdupq_n_f64(rot[5]), pz)),
                  vdupq_n_f64(trans[1]));
    float64x2_t c = vaddq_f64(vmulq_f64(vdupq_n_f64(rot[6]), px),
                              vmulq_f64(vdupq_n_f64(rot[7]), py));
    c = vaddq_f64(vaddq_f64(c, vmulq_f64(vdupq_n_f64(rot[8]), pz)),
                  vdupq_n_f64(trans[2]));
    vst1q_f64(ox.data() + i, a);
    vst1q_f64(oy.data() + i, b);
    vst1q_f64(oz.data() + i, c);
  }
  for (; i < n; ++i) {
    ox[i] = ((rot[0] * x[i] + rot[1] * y[i]) + rot[2] * z[i]) + trans[0];
    oy[i] = ((rot[3] * x[i] + rot[4] * y[i]) + rot[5] * z[i]) + trans[1];
    oz[i] = ((rot[6] * x[i] + rot[7] * y[i]) + rot[8] * z[i]) + trans[2];
  }
}

}  // namespace degenfuse::kernels::detail

#endif  // aarch64 NEON
