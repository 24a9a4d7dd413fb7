#include "degenfuse/kernels.hpp"

#include "degenfuse/types.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace degenfuse;

namespace {

struct Block {
  std::vector<double> x, y, z, w;
};

Block random_block(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Block b;
  for (std::size_t i = 0; i < n; ++i) {
    b.x.push_back(u(rng));
    b.y.push_back(u(rng));
    b.z.push_back(u(rng));
    b.w.push_back(u(rng));
  }
  return b;
}

}  // namespace

TEST_CASE("doppler residual kernel, scalar reference") {
  const auto previous = kernels::active_backend();
  kernels::force_backend(kernels::Backend::Scalar);
  std::vector<double> dx{1.0}, dy{0.0}, dz{0.0}, doppler{-2.0}, out(1);
  const double v[3] = {2.0, 5.0, -1.0};
  kernels::doppler_residuals(dx, dy, dz, doppler, v, out);
  CHECK(out[0] == doctest::Approx(0.0));  // -2 + 1*2
  kernels::force_backend(previous);
}

TEST_CASE("simd backends bit-identical to scalar") {
  const auto detected = kernels::active_backend();
  if (detected == kernels::Backend::Scalar) {
    MESSAGE("no SIMD backend on this CPU, equivalence check skipped");
    return;
  }

  // odd length exercises the scalar tail
  for (std::size_t n : {1u, 4u, 7u, 257u}) {
    const Block b = random_block(n, static_cast<unsigned>(n));
    const double v[3] = {1.25, -0.5, 3.0};
    const double rot[9] = {0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    const double trans[3] = {0.5, -2.0, 0.25};

    std::vector<double> res_scalar(n), res_simd(n);
    std::vector<double> tx_s(n), ty_s(n), tz_s(n), tx_v(n), ty_v(n), tz_v(n);

    kernels::force_backend(kernels::Backend::Scalar);
    kernels::doppler_residuals(b.x, b.y, b.z, b.w, v, res_scalar);
    kernels::transform_points(rot, trans, b.x, b.y, b.z, tx_s, ty_s, tz_s);

    kernels::force_backend(detected);
    kernels::doppler_residuals(b.x, b.y, b.z, b.w, v, res_simd);
    kernels::transform_points(rot, trans, b.x, b.y, b.z, tx_v, ty_v, tz_v);

    for (std::size_t i = 0; i < n; ++i) {
      CHECK(res_scalar[i] == res_simd[i]);
      CHECK(tx_s[i] == tx_v[i]);
      CHECK(ty_s[i] == ty_v[i]);
      CHECK(tz_s[i] == tz_v[i]);
    }
  }
}

TEST_CASE("forcing an unsupported backend throws") {
#if defined(__x86_64__)
  CHECK_THROWS_AS(kernels::force_backend(kernels::Backend::Neon), degenfuse::Error);
#else
  CHECK_THROWS_AS(kernels::force_backend(kernels::Backend::Avx2), degenfuse::Error);
#endif
}
