#pragma once

#include <span>
#include <vector>

#include "spcs/spline.hpp"
#include "spcs/srm.hpp"
#include "spcs/wavelet.hpp"

namespace spcs {

/// Real linear map R^cols -> R^rows with its transpose.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
  virtual void adjoint(std::span<const double> y, std::span<double> x) const = 0;

  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> y(rows());
    apply(x, y);
    return y;
  }
  std::vector<double> adjoint(std::span<const double> y) const {
    std::vector<double> x(cols());
    adjoint(y, x);
    return x;
  }
};

/// Theta = D F P R Psi: wavelet synthesis, valid box-kernel convolution with
/// r[k], row-major flattening, structurally random matrix.
///
/// Immutable after construction; apply/adjoint are reentrant.
class SensingOp final : public LinearOperator {
 public:
  SensingOp(SrmConfig srm, SplineOrder p, FilterBank bank, int levels, std::size_t mask_rows,
            std::size_t mask_cols);

  std::size_t rows() const override { return srm_.m; }
  std::size_t cols() const override { return layout_.size(); }
  using LinearOperator::adjoint;
  using LinearOperator::apply;
  void apply(std::span<const double> x, std::span<double> y) const override;
  void adjoint(std::span<const double> y, std::span<double> x) const override;

  /// Psi x reshaped to the (K+Omega-1) x (L+Omega-1) coefficient grid.
  Grid coefficients(std::span<const double> x) const;
  /// Box samples R Psi x on the K x L mask grid.
  Grid box_samples(std::span<const double> x) const;

  const SrmConfig& srm() const noexcept { return srm_; }
  SplineOrder order() const noexcept { return order_; }
  const FilterBank& bank() const noexcept { return bank_; }
  const CrossCorrSeq& crosscorr() const noexcept { return r_; }
  const WaveletLayout& layout() const noexcept { return layout_; }
  int levels() const noexcept { return layout_.levels(); }
  std::size_t mask_rows() const noexcept { return mask_rows_; }
  std::size_t mask_cols() const noexcept { return mask_cols_; }

 private:
  SrmConfig srm_;
  SplineOrder order_;
  FilterBank bank_;
  CrossCorrSeq r_;
  std::vector<double> r_flipped_;
  std::size_t mask_rows_;
  std::size_t mask_cols_;
  WaveletLayout layout_;
};

/// Dense row-major rows() x cols() matrix of `op`, built column by column.
/// Refuses anything above `max_entries` entries.
std::vector<double> densify(const LinearOperator& op, std::size_t max_entries = 1u << 24);

}  // namespace spcs
