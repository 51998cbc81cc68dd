#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spcs/sensing.hpp"

namespace spcs {

/// One accepted iterate, for progress logs.
struct IterationLog {
  int iteration = 0;
  double lambda = 0.0;
  double objective = 0.0;
  double residual = 0.0;  // ||y - Theta x||_2
};

struct SolverConfig {
  double lambda = 0.0;
  int max_iters = 2000;
  double rel_tol = 1e-6;
  /// Geometric lambda schedule from lambda_max = ||2 Theta^T y||_inf down to
  /// `lambda`, warm-starting every stage.
  bool continuation = false;
  double continuation_factor = 0.5;
  int stage_max_iters = 300;
  /// ||Theta||^2; estimated by power iteration when <= 0.
  double lipschitz = 0.0;
  std::function<void(const IterationLog&)> progress;
};

struct SolveReport {
  int iterations = 0;  // gradient steps over all stages
  double objective = 0.0;
  double residual_norm = 0.0;
  std::size_t sparsity = 0;  // entries with |x_i| > 1e-8
  double wall_seconds = 0.0;
  double lipschitz = 0.0;
  int restarts = 0;
  bool converged = false;
  std::vector<IterationLog> history;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

/// sign(v) * max(|v| - t, 0)
inline double soft_threshold(double v, double t) noexcept {
  return v > t ? v - t : (v < -t ? v + t : 0.0);
}

/// Power-iteration estimate of ||op||_2^2 (stops at relative change < tol or
/// max_iters). Deterministic start vector.
double estimate_lipschitz(const LinearOperator& op, int max_iters = 100, double tol = 1e-6);

/// Minimizes ||y - Theta x||_2^2 + lambda ||x||_1 by accelerated proximal
/// gradient with restart-on-increase.
SolveResult solve_l1(const LinearOperator& op, std::span<const double> y, const SolverConfig& cfg);

struct WaveletSolveResult {
  WaveletVec x;
  SolveReport report;
};
WaveletSolveResult solve_l1(const SensingOp& op, std::span<const double> y,
                            const SolverConfig& cfg);

}  // namespace spcs
