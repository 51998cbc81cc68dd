// spcs: single-pixel camera acquisition, reconstruction and evaluation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spcs/experiment.hpp"
#include "spcs/image_io.hpp"
#include "spcs/metrics.hpp"

namespace fs = std::filesystem;
using namespace spcs;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot create " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

void write_grid(const fs::path& path, const Grid& g, std::string_view tag) {
  auto out = open_out(path);
  write_coefficients(out, g.values(), 0, g.rows(), g.cols(), tag);
}

// A PGM image, or a levels=0 dump written by `reconstruct`.
Grid read_image_like(const fs::path& path) {
  auto in = open_in(path);
  char magic[2] = {};
  in.read(magic, 2);
  in.close();
  if (magic[0] == 'P' && magic[1] == '5') return read_pgm(path).pixels;
  auto f = open_in(path);
  CoefficientDump d = read_coefficients(f);
  if (d.levels != 0) throw Error(path.string() + " holds wavelet coefficients, not an image");
  return Grid(d.rows, d.cols, std::move(d.data));
}

struct ConfigArgs {
  std::string config;
  std::vector<std::string> sets;
};

void add_config_flags(CLI::App* cmd, ConfigArgs& a) {
  cmd->add_option("-c,--config", a.config, "key=value experiment file");
  cmd->add_option("-s,--set", a.sets, "override one setting, e.g. --set ratios=0.25,0.5");
}

ExperimentConfig resolve_config(const ConfigArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + s + "'");
    set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  apply_env_overrides(cfg);
  return cfg;
}

int cmd_acquire(const ConfigArgs& a, const std::string& output, int order) {
  ExperimentConfig cfg = resolve_config(a);
  cfg.validate();
  const Grid truth = load_scene_samples(cfg);
  if (!is_power_of_two(truth.size()))
    throw Error("acquire: K*L = " + std::to_string(truth.size()) + " is not a power of two");
  const std::size_t m = measurement_count(cfg.ratios.front(), truth.size());
  const SrmConfig srm = SrmConfig::make(truth.size(), m, cfg.seed, cfg.keep_dc);
  const Scene scene = order > 0 ? Scene::spline_synthetic(coefficients_for_samples(truth, SplineOrder{order}),
                                                          SplineOrder{order})
                                : Scene::pixel_image(truth);
  const MeasurementSet ms = acquire(scene, srm, cfg.noise_sigma);
  const fs::path path = output.empty() ? cfg.output_dir / "measurements.bin" : fs::path(output);
  auto out = open_out(path);
  write_measurements(out, ms);
  std::printf("wrote %s m=%zu n=%zu k=%zu l=%zu seed=%llu\n", path.string().c_str(), ms.manifest.m,
              ms.manifest.n, ms.manifest.k, ms.manifest.l,
              static_cast<unsigned long long>(ms.manifest.seed));
  return 0;
}

struct ReconstructArgs {
  std::string measurements;
  std::string out_dir = "out";
  int order = 1;
  std::string bank = "bior2.2";
  int levels = 4;
  double lambda = 1e-3;
  int max_iters = 2000;
  double rel_tol = 1e-6;
  bool no_continuation = false;
  bool pointwise = false;
  bool progress = false;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  auto in = open_in(a.measurements);
  const MeasurementSet ms = read_measurements(in);
  SolverConfig sc;
  sc.max_iters = a.max_iters;
  sc.rel_tol = a.rel_tol;
  sc.continuation = !a.no_continuation;
  if (a.progress)
    sc.progress = [](const IterationLog& l) {
      std::printf("iter=%d lambda=%.17g objective=%.17g residual=%.17g\n", l.iteration, l.lambda,
                  l.objective, l.residual);
    };
  const SplineOrder p{a.order};
  const Reconstruction rec = reconstruct(ms, p, filter_bank(a.bank), a.levels, a.lambda, sc);

  fs::path dir = a.out_dir;
  if (const char* env = std::getenv("SPCS_OUTPUT_DIR"); env != nullptr && *env != '\0') dir = env;
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "x.coef");
    write_coefficients(out, rec.x.data, rec.x.layout.levels(), rec.x.layout.rows(),
                       rec.x.layout.cols(), a.bank);
  }
  write_grid(dir / "a0.grid", rec.a0, "spline");
  const Grid image = a.pointwise ? render_pointwise_interior(rec.a0, p) : rec.samples;
  write_grid(dir / "image.grid", image, a.pointwise ? "pointwise" : "box");
  write_pgm(dir / "image.pgm", image, 65535);
  {
    auto out = open_out(dir / "report.txt");
    const SolveReport& r = rec.report;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "iterations=%d\nobjective=%.17g\nresidual_norm=%.17g\nsparsity=%zu\nlambda=%.17g\n"
                  "lipschitz=%.17g\nrestarts=%d\nconverged=%d\n",
                  r.iterations, r.objective, r.residual_norm, r.sparsity, rec.lambda, r.lipschitz,
                  r.restarts, r.converged ? 1 : 0);
    out << buf;
  }
  std::printf("iterations=%d sparsity=%zu/%zu residual=%.6g wall=%.2fs -> %s\n",
              rec.report.iterations, rec.report.sparsity, rec.x.data.size(),
              rec.report.residual_norm, rec.report.wall_seconds, dir.string().c_str());
  return 0;
}

int cmd_evaluate(const std::string& ref_path, const std::string& test_path, double peak) {
  const Grid ref = read_image_like(ref_path);
  const Grid test = read_image_like(test_path);
  const double p = psnr(ref, test, peak);
  const double s = ssim(ref, test, peak);
  if (std::isinf(p))
    std::printf("psnr_db=inf\n");
  else
    std::printf("psnr_db=%.6f\n", p);
  std::printf("ssim=%.6f\n", s);
  return 0;
}

int cmd_sweep(const ConfigArgs& a, bool quiet) {
  const ExperimentConfig cfg = resolve_config(a);
  const auto rows = run_sweep(cfg, [quiet](const std::string& line) {
    if (!quiet) std::fprintf(stderr, "%s\n", line.c_str());
  });
  const std::string table = format_sweep_table(rows);
  auto out = open_out(cfg.output_dir / "sweep.tsv");
  out << table;
  std::fputs(table.c_str(), stdout);
  return 0;
}

void print_taps(const char* label, const FilterTaps& f) {
  std::printf("  %s (first=%d):", label, f.first);
  for (double t : f.taps) std::printf(" %.17g", t);
  std::printf("\n");
}

int cmd_filters(const std::string& bank, int order) {
  const std::vector<std::string> names =
      bank.empty() ? filter_bank_names() : std::vector<std::string>{bank};
  for (const auto& name : names) {
    const FilterBank fb = filter_bank(name);
    std::printf("%s\n", fb.name.c_str());
    print_taps("analysis_low", fb.analysis_low);
    print_taps("analysis_high", fb.analysis_high);
    print_taps("synthesis_low", fb.synthesis_low);
    print_taps("synthesis_high", fb.synthesis_high);
  }
  for (int p = 0; p <= SplineOrder::kMax; ++p) {
    if (order >= 0 && p != order) continue;
    const CrossCorrSeq r = crosscorr_seq(SplineOrder{p});
    std::printf("r[k] p=%d omega=%zu:", p, r.omega());
    for (double t : r.taps) std::printf(" %.17g", t);
    std::printf("\n");
  }
  return 0;
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

int cmd_selfcheck() {
  bool ok = true;
  const auto report = [&ok](const std::string& what, double err, double tol) {
    const bool pass = err <= tol;
    ok = ok && pass;
    std::printf("%s %-40s err=%.3e tol=%.0e\n", pass ? "PASS" : "FAIL", what.c_str(), err, tol);
  };
  SplitMix64 rng(20240611);
  const auto randvec = [&rng](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return v;
  };

  for (const auto& name : filter_bank_names()) {
    const FilterBank fb = filter_bank(name);
    Grid g(40, 40);
    for (auto& v : g.values()) v = rng.normal();
    const Grid back = idwt2(dwt2(g, fb, 3), fb);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      err = std::max(err, std::abs(back.values()[i] - g.values()[i]));
    report("perfect reconstruction " + name + " 40x40 I=3", err, 1e-10);
  }

  for (int p = 0; p <= 3; ++p) {
    const SensingOp op(SrmConfig::make(256, 96, 7), SplineOrder{p}, filter_bank("bior2.2"), 2, 16,
                       16);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const auto x = randvec(op.cols());
      const auto y = randvec(op.rows());
      const auto ax = op.apply(x);
      const auto aty = op.adjoint(y);
      double l = 0.0, r = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) l += ax[i] * y[i];
      for (std::size_t i = 0; i < x.size(); ++i) r += x[i] * aty[i];
      worst = std::max(worst, relative_gap(l, r));
    }
    report("adjoint identity p=" + std::to_string(p) + " 16x16", worst, 1e-8);

    const SensingOp small(SrmConfig::make(64, 40, 3), SplineOrder{p}, filter_bank("bior2.2"), 2, 8,
                          8);
    const auto dense = densify(small);
    const auto x = randvec(small.cols());
    const auto ax = small.apply(x);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < small.rows(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < small.cols(); ++j) acc += dense[i * small.cols() + j] * x[j];
      err = std::max(err, std::abs(acc - ax[i]));
      scale = std::max(scale, std::abs(ax[i]));
    }
    report("dense vs matrix-free p=" + std::to_string(p) + " 8x8", err / scale, 1e-12);
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-pixel camera compressive sensing with spline sampling models"};
  app.require_subcommand(1);

  ConfigArgs acq_cfg;
  std::string acq_out;
  int acq_order = 0;
  auto* acq = app.add_subcommand("acquire", "simulate single-pixel measurements of an image");
  add_config_flags(acq, acq_cfg);
  acq->add_option("-o,--output", acq_out, "measurement file (default OUTPUT_DIR/measurements.bin)");
  acq->add_option("--synthetic-order", acq_order,
                  "treat the image as a spline scene of this order instead of box samples")
      ->check(CLI::Range(0, SplineOrder::kMax));

  ReconstructArgs rec_args;
  auto* rec = app.add_subcommand("reconstruct", "solve for wavelet coefficients and render");
  rec->add_option("measurements", rec_args.measurements, "measurement file")->required();
  rec->add_option("-o,--out-dir", rec_args.out_dir, "output directory");
  rec->add_option("-p,--order", rec_args.order, "spline order 0..5");
  rec->add_option("-b,--bank", rec_args.bank, "wavelet bank");
  rec->add_option("-I,--levels", rec_args.levels, "decomposition levels");
  rec->add_option("-l,--lambda", rec_args.lambda, "lambda relative to ||2 Theta^T y||_inf");
  rec->add_option("--max-iters", rec_args.max_iters, "iterations of the final stage");
  rec->add_option("--rel-tol", rec_args.rel_tol, "relative-change stopping tolerance");
  rec->add_flag("--no-continuation", rec_args.no_continuation, "solve at lambda directly");
  rec->add_flag("--pointwise", rec_args.pointwise, "render pointwise values instead of box samples");
  rec->add_flag("--progress", rec_args.progress, "print one line per iteration");

  std::string eval_ref, eval_test;
  double eval_peak = 1.0;
  auto* ev = app.add_subcommand("evaluate", "PSNR and SSIM between two images");
  ev->add_option("reference", eval_ref, "reference image (PGM or .grid)")->required();
  ev->add_option("test", eval_test, "test image (PGM or .grid)")->required();
  ev->add_option("--peak", eval_peak, "dynamic range of the normalized intensities");

  ConfigArgs sweep_cfg;
  bool sweep_quiet = false;
  auto* sw = app.add_subcommand("sweep", "PSNR/SSIM table over ratios and spline orders");
  add_config_flags(sw, sweep_cfg);
  sw->add_flag("-q,--quiet", sweep_quiet, "no progress on stderr");

  std::string filt_bank;
  int filt_order = -1;
  auto* fl = app.add_subcommand("filters", "print filter taps and r[k]");
  fl->add_option("-b,--bank", filt_bank, "only this bank");
  fl->add_option("-p,--order", filt_order, "only this spline order");

  auto* sc = app.add_subcommand("selfcheck", "adjoint, dense-operator and reconstruction checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*acq) return cmd_acquire(acq_cfg, acq_out, acq_order);
    if (*rec) return cmd_reconstruct(rec_args);
    if (*ev) return cmd_evaluate(eval_ref, eval_test, eval_peak);
    if (*sw) return cmd_sweep(sweep_cfg, sweep_quiet);
    if (*fl) return cmd_filters(filt_bank, filt_order);
    if (*sc) return cmd_selfcheck();
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return kExitFailure;
}
