#include "degenfuse/kernels.hpp"

#include "degenfuse/types.hpp"

#include <cassert>

namespace degenfuse::kernels {

namespace detail {

void doppler_residuals_scalar(std::span<const double> dx,
                              std::span<const double> dy,
                              std::span<const double> dz,
                              std::span<const double> doppler, const double v[3],
                              std::span<double> out) {
  const std::size_t n = dx.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Grouping must match the vector paths: ((d + x*vx) + y*vy) + z*vz
    out[i] = ((doppler[i] + dx[i] * v[0]) + dy[i] * v[1]) + dz[i] * v[2];
  }
}

void transform_points_scalar(const double rot[9], const double trans[3],
                             std::span<const double> x,
                             std::span<const double> y,
                             std::span<const double> z, std::span<double> ox,
                             std::span<double> oy, std::span<double> oz) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    ox[i] = ((rot[0] * x[i] + rot[1] * y[i]) + rot[2] * z[i]) + trans[0];
    oy[i] = ((rot[3] * x[i] + rot[4] * y[i]) + rot[5] * z[i]) + trans[1];
    oz[i] = ((rot[6] * x[i] + rot[7] * y[i]) + rot[8] * z[i]) + trans[2];
  }
}

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

// defined in kernels_avx2.cpp, compiled with -mavx2
void doppler_residuals_avx2(std::span<const double> dx,
                            std::span<const double> dy,
                            std::span<const double> dz,
                            std::span<const double> doppler, const double v[3],
                            std::span<double> out);
void transform_points_avx2(const double rot[9], const double trans[3],
                           std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, std::span<double> ox,
                           std::span<double> oy, std::span<double> oz);
#else
bool cpu_has_avx2() { return false; }
#endif

#if defined(__aarch64__) && defined(__ARM_NEON)
bool cpu_has_neon() { return true; }
void doppler_residuals_neon(std::span<const double> dx,
                            std::span<const double> dy,
                            std::span<const double> dz,
                            std::span<const double> doppler, const double v[3],
                            std::span<double> out);
void transform_points_neon(const double rot[9], const double trans[3],
                           std::span<const double> x, std::span<const double> y,
                           std::span<const double> z, std::span<double> ox,
                           std::span<double> oy, std::span<double> oz);
#else
bool cpu_has_neon() { return false; }
#endif

struct Dispatch {
  Backend backend;
  decltype(&doppler_residuals_scalar) doppler_residuals;
  decltype(&transform_points_scalar) transform_points;
};

Dispatch make_dispatch(Backend b) {
  switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
      return {Backend::Avx2, &doppler_residuals_avx2, &transform_points_avx2};
#endif
#if defined(__aarch64__) && defined(__ARM_NEON)
    case Backend::Neon:
      return {Backend::Neon, &doppler_residuals_neon, &transform_points_neon};
#endif
    default:
      return {Backend::Scalar, &doppler_residuals_scalar,
              &transform_points_scalar};
  }
}

Backend detect_backend() {
  if (cpu_has_avx2()) return Backend::Avx2;
  if (cpu_has_neon()) return Backend::Neon;
  return Backend::Scalar;
}

Dispatch& dispatch() {
  static Dispatch d = make_dispatch(detect_backend());
  return d;
}

}  // namespace detail

Backend active_backend() { return detail::dispatch().backend; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
    default:
      return "scalar";
  }
}

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !detail::cpu_has_avx2())
    throw Error("kernels: avx2 not supported on this CPU");
  if (b == Backend::Neon && !detail::cpu_has_neon())
    throw Error("kernels: neon not supported on this CPU");
  detail::dispatch() = detail::make_dispatch(b);
}

void doppler_residuals(std::span<const double> dx, std::span<const double> dy,
                       std::span<const double> dz,
                       std::span<const double> doppler, const double v[3],
                       std::span<double> out) {
  assert(dx.size() == dy.size() && dx.size() == dz.size());
  assert(dx.size() == doppler.size() && dx.size() == out.size());
  detail::dispatch().doppler_residuals(dx, dy, dz, doppler, v, out);
}

void transform_points(const double rot[9], const double trans[3],
                      std::span<const double> x, std::span<const double> y,
                      std::span<const double> z, std::span<double> ox,
                      std::span<double> oy, std::span<double> oz) {
  assert(x.size() == y.size() && x.size() == z.size());
  assert(x.size() == ox.size() && x.size() == oy.size() && x.size() == oz.size());
  detail::dispatch().transform_points(rot, trans, x, y, z, ox, oy, oz);
}

}  // namespace degenfuse::kernels
