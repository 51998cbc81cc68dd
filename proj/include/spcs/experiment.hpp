#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "spcs/simulate.hpp"
#include "spcs/solver.hpp"

namespace spcs {

/// Settings shared by the acquire / reconstruct / sweep commands.
///
/// Config files hold one `key = value` per line, `#` starts a comment, lists
/// are comma separated. `lambda` values are relative to
/// lambda_max = ||2 Theta^T y||_inf of each problem.
struct ExperimentConfig {
  std::filesystem::path image;
  std::size_t rows = 0;  // K; 0 keeps the image height
  std::size_t cols = 0;  // L
  std::vector<double> ratios{0.25};
  std::vector<int> orders{0, 1, 3};
  std::string bank = "bior2.2";
  int levels = 4;
  std::vector<double> lambdas{1e-3};
  std::uint64_t seed = 1;
  double noise_sigma = 0.0;
  int max_iters = 2000;
  double rel_tol = 1e-6;
  bool continuation = true;
  /// Always measure with the all-ones Hadamard row (see SrmConfig::make).
  bool keep_dc = true;
  std::filesystem::path output_dir = "out";

  /// Rejects ratios outside (0,1], empty lists, non power-of-two K*L, unknown banks.
  void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
/// Applies one `key=value` assignment; throws on unknown keys.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// SPCS_OUTPUT_DIR, when set and non-empty, replaces output_dir.
void apply_env_overrides(ExperimentConfig& cfg);

/// The K x L ground-truth samples: the image, center-cropped when rows/cols are set.
Grid load_scene_samples(const ExperimentConfig& cfg);

/// M = round(m_r N), at least 1.
std::size_t measurement_count(double ratio, std::size_t n);

/// ||2 Theta^T y||_inf; every lambda at or above it returns x = 0.
double lambda_max(const LinearOperator& op, std::span<const double> y);

struct Reconstruction {
  WaveletVec x;
  Grid a0;       // Psi x on the (K+Omega-1) x (L+Omega-1) grid
  Grid samples;  // c-hat = R a0, K x L
  SolveReport report;
  double lambda = 0.0;
};

/// Solves for x-hat from a measurement set, renders a0 and the box samples.
/// `lambda_rel` scales lambda_max.
Reconstruction reconstruct(const MeasurementSet& ms, SplineOrder p, const FilterBank& bank,
                           int levels, double lambda_rel, SolverConfig solver = {});

/// Pointwise spline values at the K x L mask centers.
Grid render_pointwise_interior(const Grid& a0, SplineOrder p);

struct SweepRow {
  double ratio = 0.0;
  int p = 0;
  std::size_t m = 0;
  double lambda_rel = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  int iterations = 0;
};

/// Runs every (ratio, order) entry, keeping the lambda with the best PSNR.
/// Finished entries are cached under output_dir/entries and reused on rerun.
/// The SRM seed of ratio index i is derive_seed(seed, i), shared by all orders.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg,
                                const std::function<void(const std::string&)>& log = {});

/// Fixed-precision text table, one row per entry.
std::string format_sweep_table(const std::vector<SweepRow>& rows);

}  // namespace spcs
