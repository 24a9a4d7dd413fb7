#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner loops used by the RANSAC scorer and the ICP frame
// transform. Scalar reference implementations always exist; wider variants
// (AVX2 on x86-64, NEON on aarch64) are selected once at startup and must be
// element-wise bit-identical to the scalar path (no FMA, same operation
// order per element).

namespace degenfuse::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Backend picked by runtime CPU detection (or forced via force_backend).
Backend active_backend();
const char* backend_name(Backend b);

// Force a specific backend, mainly for equivalence tests.
// Throws Error if the CPU does not support it.
void force_backend(Backend b);

// Per-point Doppler residual against a candidate ego velocity:
//   out[i] = doppler[i] + dx[i]*vx + dy[i]*vy + dz[i]*vz
// (dx,dy,dz) are unit direction components, SoA layout. All spans must have
// equal length.
void doppler_residuals(std::span<const double> dx, std::span<const double> dy,
                       std::span<const double> dz,
                       std::span<const double> doppler, const double v[3],
                       std::span<double> out);

// Rigid transform of an SoA point block: out = R*p + t, R row-major 3x3.
void transform_points(const double rot[9], const double trans[3],
                      std::span<const double> x, std::span<const double> y,
                      std::span<const double> z, std::span<double> ox,
                      std::span<double> oy, std::span<double> oz);

}  // namespace degenfuse::kernels
