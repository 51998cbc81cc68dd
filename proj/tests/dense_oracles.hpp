#pragma once

// Explicit dense matrices for small instances. Each one is built straight from
// the defining formula, sharing no code with the fast operators.

#include <Eigen/Dense>

#include <cstdlib>
#include <span>
#include <vector>

#include "spcs/sensing.hpp"

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Whole-sample symmetric reflection into [0, n).
inline int reflect(int m, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  m %= period;
  if (m < 0) m += period;
  return m < n ? m : period - m;
}

// One analysis level on a line of n samples: lowpass at even m, highpass at
// odd m, outputs ordered [lows | highs].
inline MatrixXd analysis_1d(const spcs::FilterBank& bank, int n) {
  MatrixXd a = MatrixXd::Zero(n, n);
  const int n_low = (n + 1) / 2;
  for (int m = 0; m < n; ++m) {
    const spcs::FilterTaps& f = (m % 2 == 0) ? bank.analysis_low : bank.analysis_high;
    const int row = (m % 2 == 0) ? m / 2 : n_low + m / 2;
    for (int k = f.first; k <= f.last(); ++k) a(row, reflect(m + k, n)) += f.at(k);
  }
  return a;
}

inline std::vector<int> ladder(int n, int levels) {
  std::vector<int> out{n};
  for (int j = 0; j < levels; ++j) out.push_back((out.back() + 1) / 2);
  return out;
}

// Psi^{-1}: row-major R x C grid -> [a_I, d_u(I), d_v(I), d_uv(I), ..., d_uv(1)].
inline MatrixXd analysis_2d(const spcs::FilterBank& bank, int rows, int cols, int levels) {
  const auto rl = ladder(rows, levels), cl = ladder(cols, levels);
  const int n = rows * cols;
  MatrixXd out(n, n);
  for (int e = 0; e < n; ++e) {
    MatrixXd buf = MatrixXd::Zero(rows, cols);
    buf(e / cols, e % cols) = 1.0;
    for (int j = 0; j < levels; ++j) {
      const int r = rl[static_cast<std::size_t>(j)], c = cl[static_cast<std::size_t>(j)];
      const MatrixXd block = buf.topLeftCorner(r, c);
      buf.topLeftCorner(r, c) = analysis_1d(bank, r) * block * analysis_1d(bank, c).transpose();
    }
    std::vector<double> flat;
    const auto take = [&](int r0, int c0, int nr, int nc) {
      for (int i = 0; i < nr; ++i)
        for (int k = 0; k < nc; ++k) flat.push_back(buf(r0 + i, c0 + k));
    };
    const int rI = rl.back(), cI = cl.back();
    take(0, 0, rI, cI);
    for (int level = levels; level >= 1; --level) {
      const int r = rl[static_cast<std::size_t>(level)], c = cl[static_cast<std::size_t>(level)];
      const int rp = rl[static_cast<std::size_t>(level - 1)], cp = cl[static_cast<std::size_t>(level - 1)];
      take(r, 0, rp - r, c);       // d_u: high along rows
      take(0, c, r, cp - c);       // d_v: high along columns
      take(r, c, rp - r, cp - c);  // d_uv
    }
    for (int i = 0; i < n; ++i) out(i, e) = flat[static_cast<std::size_t>(i)];
  }
  return out;
}

// Psi = (Psi^{-1})^{-1}.
inline MatrixXd synthesis_2d(const spcs::FilterBank& bank, int rows, int cols, int levels) {
  return analysis_2d(bank, rows, cols, levels).inverse();
}

// Sylvester Hadamard matrix (natural order), entries +-1.
inline MatrixXd hadamard(int n) {
  MatrixXd h = MatrixXd::Ones(1, 1);
  while (h.rows() < n) {
    const auto k = h.rows();
    MatrixXd next(2 * k, 2 * k);
    next << h, h, h, -h;
    h = next;
  }
  return h;
}

// D F P with F = H / sqrt(n).
inline MatrixXd srm(const spcs::SrmConfig& cfg) {
  const int n = static_cast<int>(cfg.n), m = static_cast<int>(cfg.m);
  MatrixXd p = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, static_cast<int>(cfg.permutation[static_cast<std::size_t>(i)])) = 1.0;
  MatrixXd d = MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i) d(i, static_cast<int>(cfg.row_select[static_cast<std::size_t>(i)])) = 1.0;
  return d * (hadamard(n) / std::sqrt(static_cast<double>(n))) * p;
}

// Valid 2D convolution of a (K+w-1) x (L+w-1) grid with separable symmetric taps.
inline MatrixXd valid_conv(int k, int l, std::span<const double> taps) {
  const int w = static_cast<int>(taps.size()), cols_in = l + w - 1;
  MatrixXd r = MatrixXd::Zero(k * l, (k + w - 1) * cols_in);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < l; ++j)
      for (int a = 0; a < w; ++a)
        for (int b = 0; b < w; ++b)
          r(i * l + j, (i + a) * cols_in + (j + b)) += taps[static_cast<std::size_t>(a)] * taps[static_cast<std::size_t>(b)];
  return r;
}

inline VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline MatrixXd densified(const spcs::LinearOperator& op) {
  const auto flat = spcs::densify(op);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      flat.data(), static_cast<Eigen::Index>(op.rows()), static_cast<Eigen::Index>(op.cols()));
}

// LinearOperator backed by an explicit matrix.
class DenseOperator final : public spcs::LinearOperator {
 public:
  explicit DenseOperator(MatrixXd a) : a_(std::move(a)) {}
  std::size_t rows() const override { return static_cast<std::size_t>(a_.rows()); }
  std::size_t cols() const override { return static_cast<std::size_t>(a_.cols()); }
  using LinearOperator::adjoint;
  using LinearOperator::apply;
  void apply(std::span<const double> x, std::span<double> y) const override {
    Eigen::Map<VectorXd>(y.data(), a_.rows()) = a_ * to_eigen(x);
  }
  void adjoint(std::span<const double> y, std::span<double> x) const override {
    Eigen::Map<VectorXd>(x.data(), a_.cols()) = a_.transpose() * to_eigen(y);
  }
  const MatrixXd& matrix() const { return a_; }

 private:
  MatrixXd a_;
};

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  spcs::SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace oracle
