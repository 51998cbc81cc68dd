// Links the counting build of the library (SPCS_COUNT_OPS).
#include <gtest/gtest.h>

#include <cmath>

#include "dense_oracles.hpp"
#include "spcs/op_count.hpp"
#include "spcs/sensing.hpp"

using namespace spcs;

TEST(Cost, ForwardAndAdjointScaleAsNLogN) {
  std::vector<double> ratios;
  for (std::size_t k : {16u, 32u, 64u, 128u, 256u}) {
    const SensingOp op(SrmConfig::make(k * k, k * k / 4, 1), SplineOrder{3}, filter_bank("bior4.4"), 4, k, k);
    const auto x = oracle::random_vector(op.cols(), 2);
    const auto y = oracle::random_vector(op.rows(), 3);
    const double n = static_cast<double>(op.cols());
    opcount::reset();
    op.apply(x);
    const double fwd = static_cast<double>(opcount::value());
    opcount::reset();
    op.adjoint(y);
    const double adj = static_cast<double>(opcount::value());
    ASSERT_GT(fwd, 0.0);
    ratios.push_back(fwd / (n * std::log2(n)));
    EXPECT_LT(adj / (n * std::log2(n)), 20.0) << "K=" << k;
    EXPECT_LT(ratios.back(), 20.0) << "K=" << k;
  }
  // Cost per N-tilde log N-tilde must not grow with size.
  EXPECT_LE(ratios.back(), ratios.front());
}
