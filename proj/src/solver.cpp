#include "spcs/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace spcs {
namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double residual_sq(std::span<const double> ax, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = ax[i] - y[i];
    s += d * d;
  }
  return s;
}

class Fista {
 public:
  Fista(const LinearOperator& op, std::span<const double> y, double lipschitz, SolveReport& report,
        const std::function<void(const IterationLog&)>& progress)
      : op_(op), y_(y), report_(report), progress_(progress),
        step_(1.0 / (2.0 * lipschitz * 1.01)),
        x_(op.cols(), 0.0), ax_(op.rows(), 0.0), z_(op.cols(), 0.0), az_(op.rows(), 0.0),
        grad_(op.cols()), r_(op.rows()), x_new_(op.cols()), ax_new_(op.rows()) {}

  // Runs one lambda stage from the current iterate; returns true on convergence.
  bool run(double lambda, int max_iters, double rel_tol) {
    z_ = x_;
    az_ = ax_;
    double t = 1.0;
    double f = residual_sq(ax_, y_) + lambda * norm1(x_);
    for (int it = 0; it < max_iters; ++it) {
      for (std::size_t i = 0; i < r_.size(); ++i) r_[i] = 2.0 * (az_[i] - y_[i]);
      op_.adjoint(r_, grad_);
      const double thr = step_ * lambda;
      for (std::size_t i = 0; i < x_new_.size(); ++i)
        x_new_[i] = soft_threshold(z_[i] - step_ * grad_[i], thr);
      op_.apply(x_new_, ax_new_);
      ++report_.iterations;
      const double f_new = residual_sq(ax_new_, y_) + lambda * norm1(x_new_);

      if (f_new > f + 1e-12 * std::abs(f)) {
        ++report_.restarts;
        if (t > 1.0) {
          // Drop momentum and retry from the last accepted iterate.
          z_ = x_;
          az_ = ax_;
          t = 1.0;
        } else {
          step_ *= 0.5;
        }
        continue;
      }

      double diff = 0.0;
      for (std::size_t i = 0; i < x_.size(); ++i) {
        const double d = x_new_[i] - x_[i];
        diff += d * d;
      }
      const double scale = std::max(norm2(x_new_), 1e-300);
      const double rel = std::sqrt(diff) / scale;

      const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_new;
      for (std::size_t i = 0; i < x_.size(); ++i) z_[i] = x_new_[i] + beta * (x_new_[i] - x_[i]);
      for (std::size_t i = 0; i < ax_.size(); ++i)
        az_[i] = ax_new_[i] + beta * (ax_new_[i] - ax_[i]);
      std::swap(x_, x_new_);
      std::swap(ax_, ax_new_);
      f = f_new;
      t = t_new;

      const IterationLog log{report_.iterations, lambda, f, std::sqrt(residual_sq(ax_, y_))};
      report_.history.push_back(log);
      if (progress_) progress_(log);
      if (rel < rel_tol) return true;
    }
    return false;
  }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& ax() const { return ax_; }

 private:
  const LinearOperator& op_;
  std::span<const double> y_;
  SolveReport& report_;
  const std::function<void(const IterationLog&)>& progress_;
  double step_;
  std::vector<double> x_, ax_, z_, az_, grad_, r_, x_new_, ax_new_;
};

}  // namespace

double estimate_lipschitz(const LinearOperator& op, int max_iters, double tol) {
  SplitMix64 rng(0x5EED5EED5EED5EEDULL);
  std::vector<double> v(op.cols());
  for (auto& x : v) x = rng.uniform() - 0.5;
  std::vector<double> av(op.rows()), w(op.cols());
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const double nv = norm2(v);
    if (nv == 0.0) return 0.0;
    for (auto& x : v) x /= nv;
    op.apply(v, av);
    const double nav = norm2(av);
    const double next = nav * nav;
    op.adjoint(av, w);
    std::swap(v, w);
    const bool done = it > 0 && std::abs(next - estimate) <= tol * next;
    estimate = next;
    if (done) break;
  }
  return estimate;
}

SolveResult solve_l1(const LinearOperator& op, std::span<const double> y, const SolverConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (y.size() != op.rows())
    throw DimensionError("solve_l1: y has " + std::to_string(y.size()) + " entries, operator has " +
                         std::to_string(op.rows()) + " rows");
  if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); }))
    throw Error("solve_l1: measurements contain non-finite values");
  if (cfg.lambda < 0.0) throw Error("solve_l1: lambda must be >= 0");
  if (cfg.rel_tol <= 0.0) throw Error("solve_l1: rel_tol must be > 0");

  SolveResult out;
  SolveReport& report = out.report;
  report.lipschitz = cfg.lipschitz > 0.0 ? cfg.lipschitz : estimate_lipschitz(op);
  if (!(report.lipschitz > 0.0)) throw Error("solve_l1: operator is zero (Lipschitz constant 0)");

  Fista fista(op, y, report.lipschitz, report, cfg.progress);
  if (cfg.continuation && cfg.continuation_factor > 0.0 && cfg.continuation_factor < 1.0) {
    std::vector<double> r(y.begin(), y.end());
    for (auto& v : r) v *= 2.0;
    const auto g = op.adjoint(r);
    double lambda_max = 0.0;
    for (double v : g) lambda_max = std::max(lambda_max, std::abs(v));
    const double stage_tol = std::max(10.0 * cfg.rel_tol, 1e-4);
    const double floor = std::max(cfg.lambda, lambda_max * 1e-7);
    for (double lam = lambda_max * cfg.continuation_factor; lam > floor;
         lam *= cfg.continuation_factor)
      fista.run(lam, cfg.stage_max_iters, stage_tol);
  }
  report.converged = fista.run(cfg.lambda, cfg.max_iters, cfg.rel_tol);

  out.x = fista.x();
  report.residual_norm = std::sqrt(residual_sq(fista.ax(), y));
  report.objective = report.residual_norm * report.residual_norm + cfg.lambda * norm1(out.x);
  report.sparsity = static_cast<std::size_t>(
      std::count_if(out.x.begin(), out.x.end(), [](double v) { return std::abs(v) > 1e-8; }));
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

WaveletSolveResult solve_l1(const SensingOp& op, std::span<const double> y,
                            const SolverConfig& cfg) {
  SolveResult r = solve_l1(static_cast<const LinearOperator&>(op), y, cfg);
  return {WaveletVec{op.layout(), std::move(r.x)}, std::move(r.report)};
}

}  // namespace spcs
