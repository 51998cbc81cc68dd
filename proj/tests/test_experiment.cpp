#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "dense_oracles.hpp"
#include "spcs/experiment.hpp"
#include "spcs/image_io.hpp"
#include "spcs/metrics.hpp"

using namespace spcs;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spcs_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Grid smooth_image(std::size_t n) {
  Grid g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g(i, j) = 0.5 + 0.3 * std::sin(0.2 * static_cast<double>(i)) * std::cos(0.15 * static_cast<double>(j)) +
                (i > n / 2 && j < n / 3 ? 0.15 : 0.0);
  return g;
}

}  // namespace

TEST(Pgm, EightBitRoundTrip) {
  const fs::path dir = scratch("pgm8");
  Grid g(3, 5);
  for (std::size_t i = 0; i < g.size(); ++i) g.values()[i] = static_cast<double>(i * 17) / 255.0;
  write_pgm(dir / "a.pgm", g, 255);
  const Image img = read_pgm(dir / "a.pgm");
  EXPECT_EQ(img.max_value, 255);
  ASSERT_EQ(img.pixels.rows(), 3u);
  ASSERT_EQ(img.pixels.cols(), 5u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(img.pixels.values()[i], g.values()[i]);
}

TEST(Pgm, SixteenBitRoundTripAndComments) {
  const fs::path dir = scratch("pgm16");
  const Grid g(4, 4, 0.123456);
  write_pgm(dir / "b.pgm", g, 65535);
  const Image img = read_pgm(dir / "b.pgm");
  EXPECT_EQ(img.max_value, 65535);
  EXPECT_NEAR(img.pixels(2, 2), 0.123456, 1.0 / 65535);

  std::ofstream(dir / "c.pgm", std::ios::binary) << "P5\n# comment\n2 1\n255\n\x10\xff";
  const Image c = read_pgm(dir / "c.pgm");
  EXPECT_DOUBLE_EQ(c.pixels(0, 1), 1.0);
}

TEST(Pgm, Errors) {
  const fs::path dir = scratch("pgmerr");
  EXPECT_THROW(read_pgm(dir / "missing.pgm"), Error);
  std::ofstream(dir / "p2.pgm") << "P2\n1 1\n255\n7\n";
  EXPECT_THROW(read_pgm(dir / "p2.pgm"), Error);
  std::ofstream(dir / "short.pgm", std::ios::binary) << "P5\n4 4\n255\nab";
  EXPECT_THROW(read_pgm(dir / "short.pgm"), Error);
}

TEST(Pgm, BundledCameraman) {
  const Image img = read_pgm(SPCS_DATA_DIR "/cameraman.pgm");
  EXPECT_EQ(img.pixels.rows(), 512u);
  EXPECT_EQ(img.pixels.cols(), 512u);
  EXPECT_EQ(center_crop(img.pixels, 256, 256)(0, 0), img.pixels(128, 128));
}

TEST(Config, ParsesKeyValueFile) {
  const fs::path dir = scratch("cfg");
  std::ofstream(dir / "e.cfg") << "# experiment\nimage = pic.pgm\nrows=64\ncols = 64\n"
                                  "ratios = 0.1, 0.25\norders=0,1,3\nbank=bior4.4\nlevels=3\n"
                                  "lambda = 1e-3,3e-4  # grid\nseed=9\nkeep_dc=0\n";
  const ExperimentConfig c = load_config(dir / "e.cfg");
  EXPECT_EQ(c.image, dir / "pic.pgm");
  EXPECT_EQ(c.rows, 64u);
  EXPECT_EQ(c.ratios, (std::vector<double>{0.1, 0.25}));
  EXPECT_EQ(c.orders, (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(c.bank, "bior4.4");
  EXPECT_EQ(c.lambdas, (std::vector<double>{1e-3, 3e-4}));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_FALSE(c.keep_dc);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, Validation) {
  ExperimentConfig c;
  EXPECT_THROW(set_config_value(c, "colour", "red"), Error);
  EXPECT_THROW(set_config_value(c, "levels", "four"), Error);
  c.ratios = {1.5};
  EXPECT_THROW(c.validate(), Error);
  c.ratios = {0.5};
  c.rows = 12;
  c.cols = 12;
  EXPECT_THROW(c.validate(), Error);
  c.rows = 16;
  c.cols = 16;
  c.bank = "nope";
  EXPECT_THROW(c.validate(), Error);
}

TEST(Config, EnvironmentOverridesOutputDir) {
  ExperimentConfig c;
  c.output_dir = "here";
  ::setenv("SPCS_OUTPUT_DIR", "/tmp/elsewhere", 1);
  apply_env_overrides(c);
  ::unsetenv("SPCS_OUTPUT_DIR");
  EXPECT_EQ(c.output_dir, fs::path("/tmp/elsewhere"));
}

TEST(Experiment, MeasurementCount) {
  EXPECT_EQ(measurement_count(0.25, 512 * 512), 65536u);
  EXPECT_EQ(measurement_count(1.0, 64), 64u);
  EXPECT_EQ(measurement_count(1e-9, 64), 1u);
  EXPECT_THROW(measurement_count(0.0, 64), Error);
}

TEST(Experiment, FullRateRoundTripIsNearExact) {
  const Grid img = smooth_image(32);
  const MeasurementSet ms = acquire(Scene::pixel_image(img), SrmConfig::make(1024, 1024, 3));
  SolverConfig sc;
  sc.rel_tol = 1e-12;
  sc.max_iters = 5000;
  const Reconstruction r = reconstruct(ms, SplineOrder{0}, filter_bank("bior2.2"), 3, 1e-9, sc);
  EXPECT_GE(psnr(img, r.samples), 100.0);
}

TEST(Experiment, ReconstructionShapesAndSparsity) {
  const Grid img = smooth_image(32);
  const MeasurementSet ms = acquire(Scene::pixel_image(img), SrmConfig::make(1024, 400, 5, true));
  const Reconstruction r = reconstruct(ms, SplineOrder{3}, filter_bank("bior2.2"), 3, 1e-3);
  EXPECT_EQ(r.a0.rows(), 36u);
  EXPECT_EQ(r.samples.rows(), 32u);
  EXPECT_EQ(render_pointwise_interior(r.a0, SplineOrder{3}).rows(), 32u);
  EXPECT_LE(r.report.sparsity, r.x.data.size());
  EXPECT_GT(psnr(img, r.samples), 20.0);
}

TEST(Experiment, ManifestMismatchThrows) {
  MeasurementSet ms = acquire(Scene::pixel_image(smooth_image(16)), SrmConfig::make(256, 50, 1));
  ms.y.pop_back();
  EXPECT_THROW(reconstruct(ms, SplineOrder{1}, filter_bank("bior2.2"), 2, 1e-3), DimensionError);
}

TEST(Sweep, DeterministicAndResumable) {
  const fs::path dir = scratch("sweep");
  write_pgm(dir / "img.pgm", smooth_image(32), 255);
  ExperimentConfig cfg;
  cfg.image = dir / "img.pgm";
  cfg.ratios = {0.3, 0.6};
  cfg.orders = {0, 1};
  cfg.levels = 2;
  cfg.lambdas = {1e-2, 1e-3};
  cfg.max_iters = 300;
  cfg.output_dir = dir / "a";
  const auto first = format_sweep_table(run_sweep(cfg));
  cfg.output_dir = dir / "b";
  const auto second = format_sweep_table(run_sweep(cfg));
  EXPECT_EQ(first, second);
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 5);

  std::vector<std::string> cached;
  const auto rerun = format_sweep_table(run_sweep(cfg, [&cached](const std::string& s) { cached.push_back(s); }));
  EXPECT_EQ(rerun, first);
  ASSERT_EQ(cached.size(), 4u);
  for (const auto& line : cached) EXPECT_EQ(line.rfind("cached", 0), 0u);

  // A changed setting invalidates the cache.
  cfg.lambdas = {1e-2};
  std::vector<std::string> fresh;
  run_sweep(cfg, [&fresh](const std::string& s) { fresh.push_back(s); });
  EXPECT_EQ(fresh.front().rfind("cached", 0), std::string::npos);
}
