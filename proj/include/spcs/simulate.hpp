#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spcs/spline.hpp"
#include "spcs/srm.hpp"

namespace spcs {

/// What the single-pixel camera looks at.
///
/// A pixel image is read as box-integral samples c[k,l]; a synthetic scene is
/// an exact spline expansion a0 of order p on the (K+Omega-1) x (L+Omega-1) grid.
struct Scene {
  enum class Kind { PixelImage, SplineSynthetic };
  Kind kind = Kind::PixelImage;
  Grid pixels;
  Grid a0;
  SplineOrder order{0};

  static Scene pixel_image(Grid pixels);
  static Scene spline_synthetic(Grid a0, SplineOrder p);

  /// c[k,l] seen through the K x L mask grid.
  Grid box_samples() const;
};

/// Replay information stored next to the readings.
struct Manifest {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;  // mask rows
  std::size_t l = 0;  // mask cols
  std::uint64_t seed = 0;
  int p = 0;
  double noise_sigma = 0.0;
  bool keep_dc = false;

  SrmConfig srm() const { return SrmConfig::make(n, m, seed, keep_dc); }
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct MeasurementSet {
  std::vector<double> y;
  Manifest manifest;
};

/// Seed of the additive noise stream for a given acquisition seed.
std::uint64_t noise_seed(std::uint64_t seed) noexcept;

/// y = S c (+ sigma * N(0,1) when noise_sigma > 0, seeded from the SRM seed).
MeasurementSet acquire(const Scene& scene, const SrmConfig& srm, double noise_sigma = 0.0);

/// Numerically integrates the double integral of f(u,v) z(u,v) over the mask
/// support, where f = sum a0[i,j] b^p(u-i+h) b^p(v-j+h) and z is the box-kernel
/// pattern with coefficients `mask` (K x L). Cells are split at every spline
/// breakpoint and integrated with `gauss_points`-point Gauss-Legendre rules.
/// Small grids only.
double quadrature_measurement_oracle(const Grid& a0, SplineOrder p, const Grid& mask,
                                     int gauss_points = 4);

/// Measurement file: text line `m= n= k= l= seed= p= noise_sigma= dc=` then
/// little-endian float64 readings. A missing `dc=` reads as 0.
void write_measurements(std::ostream& os, const MeasurementSet& ms);
MeasurementSet read_measurements(std::istream& is);

}  // namespace spcs
