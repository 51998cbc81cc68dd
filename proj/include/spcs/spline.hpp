#pragma once

#include <span>
#include <vector>

#include "spcs/grid.hpp"

namespace spcs {

/// Degree of the centered polynomial B-spline generator. Supported range 0..5.
class SplineOrder {
 public:
  static constexpr int kMax = 5;

  explicit SplineOrder(int p) : p_(p) {
    if (p < 0 || p > kMax) throw Error("SplineOrder: order " + std::to_string(p) + " not in 0..5");
  }
  int value() const noexcept { return p_; }
  friend bool operator==(SplineOrder, SplineOrder) = default;

 private:
  int p_;
};

/// Centered B-spline of degree `degree` (any degree >= 0) at `t`.
///
/// Support is |t| <= (degree+1)/2. Degree 0 is the unit box on (-1/2, 1/2)
/// with value 1/2 on the two jump points.
double bspline_value(int degree, double t);

/// b^p(t) for the supported generator orders.
double bspline_eval(SplineOrder p, double t);

/// Integer samples b^p(j) for |j| <= floor((p+1)/2), center at index half.
/// Zero end taps (odd p) are dropped so the list is always odd and nonzero.
std::vector<double> bspline_integer_taps(SplineOrder p);

/// Sampled cross-correlation r[k] = <b^p(t), b^0(t-k)> = b^{p+1}(k).
struct CrossCorrSeq {
  SplineOrder order{0};
  std::vector<double> taps;  // odd length, taps[half()] is r[0]

  std::size_t omega() const noexcept { return taps.size(); }
  std::size_t half() const noexcept { return taps.size() / 2; }
  double at(int k) const noexcept {
    const int h = static_cast<int>(half());
    return (k < -h || k > h) ? 0.0 : taps[static_cast<std::size_t>(k + h)];
  }
};

CrossCorrSeq crosscorr_seq(SplineOrder p);

/// Separable 2D convolution of `g` with the same symmetric odd `taps` along both axes.
///
/// valid: output (R - n + 1) x (C - n + 1); throws if the grid is smaller than the taps.
/// full:  output (R + n - 1) x (C + n - 1), input treated as zero outside.
/// same:  output R x C, centered, zero outside.
Grid convolve_valid(const Grid& g, std::span<const double> taps);
Grid convolve_full(const Grid& g, std::span<const double> taps);
Grid convolve_same(const Grid& g, std::span<const double> taps);

/// Inverse of same-size symmetric-boundary filtering with r[k]: returns a0 of
/// the input's shape whose whole-sample-symmetric convolution with r equals
/// `samples`. Throws if |R(e^jw)| vanishes on the DCT-I grid.
Grid correction_filter_apply(const Grid& samples, SplineOrder p);

/// Coefficients on the (K+Omega-1) x (L+Omega-1) grid whose valid box
/// rendering reproduces `samples` (K x L) exactly. Used to synthesize scenes.
Grid coefficients_for_samples(const Grid& samples, SplineOrder p);

/// Pointwise values f(k,l) = sum a0[m,n] b^p(k-m) b^p(l-n) on the coefficient grid.
Grid render_pointwise(const Grid& a0, SplineOrder p);

/// Box-integral samples c = (a0 ** r_k) ** r_l restricted to the valid region.
Grid render_box_samples(const Grid& a0, SplineOrder p);

}  // namespace spcs
