// AVX2 variants. Compiled with -mavx2 only; callers reach these through the
// runtime dispatch table. No FMA: each element uses the same mul/add sequence
// as the scalar reference so results are bit-identical.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>
#include <span>

namespace degenfuse::kernels::detail {

void doppler_residuals_avx2(std::span<const double> dx,
                            std::span<const double> dy,
                            std::span<const double> dz,
                            std::span<const double> doppler, const double v[3],
                            std::span<double> out) {
  const std::size_t n = dx.size();
  const __m256d vx = _mm256_set1_pd(v[0]);
  const __m256d vy = _mm256_set1_pd(v[1]);
  const __m256d vz = _mm256_set1_pd(v[2]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_loadu_pd(doppler.data() + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(dx.data() + i), vx));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(dy.data() + i), vy));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(dz.data() + i), vz));
    _mm256_storeu_pd(out.data() + i, acc);
  }
  for (; i < n; ++i) {
    out[i] = ((doppler[i] + dx[i] * v[0]) + dy[i] * v[1]) + dz[i] * v[2];
  }
}

void transform_points_avx2(const double rot[9], const double trans[3],
                           std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, std::span<double> ox,
                           std::span<double> oy, std::span<double> oz) {
  const std::size_t n = x.size();
  const __m256d r0 = _mm256_set1_pd(rot[0]), r1 = _mm256_set1_pd(rot[1]),
                r2 = _mm256_set1_pd(rot[2]), r3 = _mm256_set1_pd(rot[3]),
                r4 = _mm256_set1_pd(rot[4]), r5 = _mm256_set1_pd(rot[5]),
                r6 = _mm256_set1_pd(rot[6]), r7 = _mm256_set1_pd(rot[7]),
                r8 = _mm256_set1_pd(rot[8]);
  const __m256d t0 = _mm256_set1_pd(trans[0]), t1 = _mm256_set1_pd(trans[1]),
                t2 = _mm256_set1_pd(trans[2]);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d px = _mm256_loadu_pd(x.data() + i);
    const __m256d py = _mm256_loadu_pd(y.data() + i);
    const __m256d pz = _mm256_loadu_pd(z.data() + i);
    __m256d a = _mm256_add_pd(_mm256_mul_pd(r0, px), _mm256_mul_pd(r1, py));
    a = _mm256_add_pd(_mm256_add_pd(a, _mm256_mul_pd(r2, pz)), t0);
    __m256d b = _mm256_add_pd(_mm256_mul_pd(r3, px), _mm256_mul_pd(r4, py));
    b = _mm256_add_pd(_mm256_add_pd(b, _mm256_mul_pd(r5, pz)), t1);
    __m256d c = _mm256_add_pd(_mm256_mul_pd(r6, px), _mm256_mul_pd(r7, py));
    c = _mm256_add_pd(_mm256_add_pd(c, _mm256_mul_pd(r8, pz)), t2);
    _mm256_storeu_pd(ox.data() + i, a);
    _mm256_storeu_pd(oy.data() + i, b);
    _mm256_storeu_pd(oz.data() + i, c);
  }
  for (; i < n; ++i) {
    ox[i] = ((rot[0] * x[i] + rot[1] * y[i]) + rot[2] * z[i]) + trans[0];
    oy[i] = ((rot[3] * x[i] + rot[4] * y[i]) + rot[5] * z[i]) + trans[1];
    oz[i] = ((rot[6] * x[i] + rot[7] * y[i]) + rot[8] * z[i]) + trans[2];
  }
}

}  // namespace degenfuse::kernels::detail

#endif  // x86-64
