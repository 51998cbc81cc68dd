#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dense_oracles.hpp"
#include "spcs/solver.hpp"

using namespace spcs;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, std::uint64_t seed) {
  const auto v = oracle::random_vector(static_cast<std::size_t>(rows * cols), seed);
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

class Scaled final : public LinearOperator {
 public:
  Scaled(const LinearOperator& inner, double s) : inner_(inner), s_(s) {}
  std::size_t rows() const override { return inner_.rows(); }
  std::size_t cols() const override { return inner_.cols(); }
  using LinearOperator::adjoint;
  using LinearOperator::apply;
  void apply(std::span<const double> x, std::span<double> y) const override {
    inner_.apply(x, y);
    for (auto& v : y) v *= s_;
  }
  void adjoint(std::span<const double> y, std::span<double> x) const override {
    inner_.adjoint(y, x);
    for (auto& v : x) v *= s_;
  }

 private:
  const LinearOperator& inner_;
  double s_;
};

}  // namespace

TEST(SoftThreshold, ScalarCases) {
  EXPECT_EQ(soft_threshold(3.0, 1.0), 2.0);
  EXPECT_EQ(soft_threshold(-3.0, 1.0), -2.0);
  EXPECT_EQ(soft_threshold(0.5, 1.0), 0.0);
  EXPECT_EQ(soft_threshold(-1.0, 1.0), 0.0);
  EXPECT_EQ(soft_threshold(2.0, 0.0), 2.0);
}

TEST(Lipschitz, OrthonormalPipelineIsOne) {
  const SensingOp op(SrmConfig::make(64, 64, 3), SplineOrder{0}, filter_bank("haar"), 2, 8, 8);
  EXPECT_NEAR(estimate_lipschitz(op), 1.0, 1e-6);
}

TEST(Lipschitz, MatchesDenseSpectralNorm) {
  const SensingOp op(SrmConfig::make(64, 30, 3), SplineOrder{1}, filter_bank("bior2.2"), 2, 8, 8);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(oracle::densified(op));
  const double s = svd.singularValues()(0);
  EXPECT_NEAR(estimate_lipschitz(op), s * s, 0.01 * s * s);
}

TEST(Lipschitz, ScalesQuadratically) {
  const SensingOp op(SrmConfig::make(64, 40, 3), SplineOrder{1}, filter_bank("bior2.2"), 2, 8, 8);
  const Scaled doubled(op, 2.0);
  EXPECT_NEAR(estimate_lipschitz(doubled), 4.0 * estimate_lipschitz(op), 1e-9);
}

TEST(SolveL1, LeastSquaresWhenLambdaIsZero) {
  const Eigen::MatrixXd a = random_matrix(64, 64, 5) / 8.0;
  const oracle::DenseOperator op(a);
  const auto y = oracle::random_vector(64, 6);
  SolverConfig cfg;
  cfg.lambda = 0.0;
  cfg.max_iters = 200000;
  cfg.rel_tol = 1e-13;
  const SolveResult r = solve_l1(op, y, cfg);
  const Eigen::VectorXd expect = a.colPivHouseholderQr().solve(oracle::to_eigen(y));
  const Eigen::VectorXd got = oracle::to_eigen(r.x);
  EXPECT_LE((got - expect).norm() / expect.norm(), 1e-6);
}

TEST(SolveL1, ZeroMeasurementsGiveZero) {
  const SensingOp op(SrmConfig::make(64, 30, 3), SplineOrder{1}, filter_bank("bior2.2"), 2, 8, 8);
  SolverConfig cfg;
  cfg.lambda = 0.1;
  const WaveletSolveResult r = solve_l1(op, std::vector<double>(30, 0.0), cfg);
  for (double v : r.x.data) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.report.sparsity, 0u);
}

TEST(SolveL1, ObjectiveNeverIncreasesAndRunsRepeat) {
  const SensingOp op(SrmConfig::make(256, 100, 9), SplineOrder{3}, filter_bank("bior4.4"), 1, 16, 16);
  const auto y = oracle::random_vector(100, 7);
  SolverConfig cfg;
  cfg.lambda = 0.05;
  cfg.max_iters = 300;
  const WaveletSolveResult a = solve_l1(op, y, cfg);
  ASSERT_FALSE(a.report.history.empty());
  for (std::size_t i = 1; i < a.report.history.size(); ++i)
    EXPECT_LE(a.report.history[i].objective,
              a.report.history[i - 1].objective * (1.0 + 1e-12) + 1e-12);
  const WaveletSolveResult b = solve_l1(op, y, cfg);
  EXPECT_EQ(a.x.data, b.x.data);
  EXPECT_LE(a.report.sparsity, op.cols());
}

TEST(SolveL1, KktConditionsAtSolution) {
  const oracle::DenseOperator op(random_matrix(30, 60, 8));
  const auto y = oracle::random_vector(30, 9);
  SolverConfig cfg;
  cfg.lambda = 2.0;
  cfg.max_iters = 20000;
  cfg.rel_tol = 1e-12;
  const SolveResult r = solve_l1(op, y, cfg);
  // 2 A^T (y - A x) lies in lambda * subdifferential of ||x||_1.
  auto res = op.apply(r.x);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] = 2.0 * (y[i] - res[i]);
  const auto g = op.adjoint(res);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (r.x[i] != 0.0)
      EXPECT_NEAR(g[i], cfg.lambda * (r.x[i] > 0 ? 1.0 : -1.0), 1e-6);
    else
      EXPECT_LE(std::abs(g[i]), cfg.lambda + 1e-6);
  }
}

TEST(SolveL1, ProgressCallbackSeesEveryAcceptedIterate) {
  const oracle::DenseOperator op(random_matrix(20, 40, 10));
  const auto y = oracle::random_vector(20, 11);
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.max_iters = 50;
  int calls = 0;
  cfg.progress = [&calls](const IterationLog&) { ++calls; };
  const SolveResult r = solve_l1(op, y, cfg);
  EXPECT_EQ(static_cast<std::size_t>(calls), r.report.history.size());
}

TEST(SolveL1, InputErrors) {
  const oracle::DenseOperator op(random_matrix(10, 20, 12));
  SolverConfig cfg;
  cfg.lambda = 1.0;
  std::vector<double> y(10, 1.0);
  y[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve_l1(op, y, cfg), Error);
  EXPECT_THROW(solve_l1(op, std::vector<double>(9, 1.0), cfg), DimensionError);
  const oracle::DenseOperator zero(Eigen::MatrixXd::Zero(10, 20));
  EXPECT_THROW(solve_l1(zero, std::vector<double>(10, 1.0), cfg), Error);
  cfg.lambda = -1.0;
  EXPECT_THROW(solve_l1(op, std::vector<double>(10, 1.0), cfg), Error);
}
