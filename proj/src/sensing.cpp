#include "spcs/sensing.hpp"

#include <algorithm>
#include <string>

namespace spcs {

SensingOp::SensingOp(SrmConfig srm, SplineOrder p, FilterBank bank, int levels,
                     std::size_t mask_rows, std::size_t mask_cols)
    : srm_(std::move(srm)),
      order_(p),
      bank_(std::move(bank)),
      r_(crosscorr_seq(p)),
      r_flipped_(r_.taps.rbegin(), r_.taps.rend()),
      mask_rows_(mask_rows),
      mask_cols_(mask_cols) {
  if (mask_rows * mask_cols != srm_.n)
    throw DimensionError("SensingOp: mask " + std::to_string(mask_rows) + "x" +
                         std::to_string(mask_cols) + " does not match SRM length n=" +
                         std::to_string(srm_.n));
  const std::size_t pad = r_.omega() - 1;
  layout_ = WaveletLayout(mask_rows + pad, mask_cols + pad, levels, bank_);
}

Grid SensingOp::coefficients(std::span<const double> x) const {
  if (x.size() != cols())
    throw DimensionError("theta_forward[idwt2]: x has " + std::to_string(x.size()) +
                         " entries, expected " + std::to_string(cols()));
  Grid a0;
  synthesize(x, layout_, bank_, a0);
  return a0;
}

Grid SensingOp::box_samples(std::span<const double> x) const {
  return convolve_valid(coefficients(x), r_.taps);
}

void SensingOp::apply(std::span<const double> x, std::span<double> y) const {
  if (y.size() != rows())
    throw DimensionError("theta_forward[srm]: y has " + std::to_string(y.size()) +
                         " entries, expected " + std::to_string(rows()));
  const Grid c = box_samples(x);
  std::vector<double> work(srm_.n);
  srm_forward(srm_, c.values(), y, work);
}

void SensingOp::adjoint(std::span<const double> y, std::span<double> x) const {
  if (y.size() != rows())
    throw DimensionError("theta_adjoint[srm]: y has " + std::to_string(y.size()) +
                         " entries, expected " + std::to_string(rows()));
  if (x.size() != cols())
    throw DimensionError("theta_adjoint[idwt2^T]: x has " + std::to_string(x.size()) +
                         " entries, expected " + std::to_string(cols()));
  std::vector<double> c(srm_.n);
  srm_adjoint(srm_, y, c);
  const Grid samples(mask_rows_, mask_cols_, std::move(c));
  // R^T of a valid convolution is the full convolution with the reversed taps.
  const Grid a0 = convolve_full(samples, r_flipped_);
  synthesize_adjoint(a0, layout_, bank_, x);
}

std::vector<double> densify(const LinearOperator& op, std::size_t max_entries) {
  const std::size_t m = op.rows(), n = op.cols();
  if (m * n > max_entries)
    throw DimensionError("densify: " + std::to_string(m) + "x" + std::to_string(n) +
                         " exceeds the dense size limit");
  std::vector<double> dense(m * n);
  std::vector<double> e(n, 0.0), col(m);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < m; ++i) dense[i * n + j] = col[i];
  }
  return dense;
}

}  // namespace spcs
