#include <gtest/gtest.h>

#include <Eigen/SVD>

#include "dense_oracles.hpp"
#include "spcs/sensing.hpp"
#include "spcs/solver.hpp"

using namespace spcs;

namespace {

SensingOp make_op(int p, std::size_t k, std::size_t m, const char* bank = "bior2.2", int levels = 2,
                  std::uint64_t seed = 17) {
  return SensingOp(SrmConfig::make(k * k, m, seed), SplineOrder{p}, filter_bank(bank), levels, k, k);
}

Eigen::MatrixXd explicit_theta(const SensingOp& op) {
  const int k = static_cast<int>(op.mask_rows()), l = static_cast<int>(op.mask_cols());
  const int w = static_cast<int>(op.crosscorr().omega());
  return oracle::srm(op.srm()) * oracle::valid_conv(k, l, op.crosscorr().taps) *
         oracle::synthesis_2d(op.bank(), k + w - 1, l + w - 1, op.levels());
}

}  // namespace

TEST(SensingOp, Dimensions) {
  const SensingOp op = make_op(3, 8, 20);
  EXPECT_EQ(op.rows(), 20u);
  EXPECT_EQ(op.cols(), 12u * 12u);
  EXPECT_EQ(op.layout().rows(), 12u);
  EXPECT_THROW(SensingOp(SrmConfig::make(64, 8, 1), SplineOrder{1}, filter_bank("bior2.2"), 2, 8, 4),
               DimensionError);
}

TEST(SensingOp, StageNamedErrors) {
  const SensingOp op = make_op(1, 8, 20);
  try {
    op.apply(std::vector<double>(5));
    FAIL();
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("idwt2"), std::string::npos);
  }
  try {
    op.adjoint(std::vector<double>(5));
    FAIL();
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("srm"), std::string::npos);
  }
}

TEST(SensingOp, EqualsExplicitProduct) {
  for (int p = 0; p <= 3; ++p) {
    const SensingOp op = make_op(p, 8, 40);
    const Eigen::MatrixXd theta = oracle::densified(op);
    const Eigen::MatrixXd expect = explicit_theta(op);
    EXPECT_LT((theta - expect).cwiseAbs().maxCoeff(), 1e-10) << "p=" << p;
  }
}

TEST(SensingOp, OrderZeroSkipsR) {
  const SensingOp op = make_op(0, 8, 30);
  const auto x = oracle::random_vector(op.cols(), 3);
  const Grid a0 = idwt2(WaveletVec{op.layout(), x}, op.bank());
  EXPECT_EQ(op.apply(x), srm_forward(op.srm(), a0.values()));
  const auto y = oracle::random_vector(op.rows(), 4);
  const Grid back(8, 8, srm_adjoint(op.srm(), y));
  EXPECT_EQ(op.adjoint(y), idwt2_adjoint(back, op.bank(), op.levels()).data);
}

TEST(SensingOp, ZeroInZeroOut) {
  const SensingOp op = make_op(2, 8, 30);
  for (double v : op.apply(std::vector<double>(op.cols(), 0.0))) EXPECT_EQ(v, 0.0);
  for (double v : op.adjoint(std::vector<double>(op.rows(), 0.0))) EXPECT_EQ(v, 0.0);
}

TEST(SensingOp, AdjointIdentity) {
  for (int p = 0; p <= 5; ++p) {
    for (const char* bank : {"bior2.2", "bior4.4"}) {
      const SensingOp op = make_op(p, 16, 100, bank, 2, 5 + static_cast<std::uint64_t>(p));
      for (std::uint64_t t = 0; t < 5; ++t) {
        const auto x = oracle::random_vector(op.cols(), 10 * t + 1);
        const auto y = oracle::random_vector(op.rows(), 10 * t + 2);
        const double lhs = oracle::dot(op.apply(x), y);
        const double rhs = oracle::dot(x, op.adjoint(y));
        EXPECT_NEAR(lhs, rhs, 1e-8 * std::abs(lhs)) << "p=" << p << " " << bank;
      }
    }
  }
}

TEST(SensingOp, AdjointEqualsDenseTranspose) {
  const SensingOp op = make_op(3, 8, 25);
  const Eigen::MatrixXd theta = explicit_theta(op);
  const auto y = oracle::random_vector(op.rows(), 9);
  const auto aty = op.adjoint(y);
  const Eigen::VectorXd expect = theta.transpose() * oracle::to_eigen(y);
  for (std::size_t i = 0; i < aty.size(); ++i) EXPECT_NEAR(aty[i], expect(static_cast<Eigen::Index>(i)), 1e-10);
}

TEST(SensingOp, FrameBoundsAtFullRate) {
  for (int p = 0; p <= 3; ++p) {
    const SensingOp op = make_op(p, 8, 64);
    const Eigen::MatrixXd theta = oracle::densified(op);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(theta);
    const auto& s = svd.singularValues();
    // Theta is wide for p > 0 (N < N-tilde); the bounds hold on its row space.
    const double smin = s(std::min(theta.rows(), theta.cols()) - 1);
    EXPECT_GT(smin, 1e-3) << "p=" << p;
    EXPECT_LT(s(0), 10.0) << "p=" << p;
    EXPECT_NEAR(estimate_lipschitz(op), s(0) * s(0), 0.01 * s(0) * s(0)) << "p=" << p;
  }
}

TEST(SensingOp, DenseRefusesLargeOperators) {
  const SensingOp op = make_op(1, 64, 2048);
  EXPECT_THROW(densify(op, 1000), DimensionError);
}
