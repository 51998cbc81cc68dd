#include "spcs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "spcs/image_io.hpp"
#include "spcs/metrics.hpp"

namespace spcs {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || !std::isfinite(d)) throw Error("config: " + key + ": bad number '" + v + "'");
  return d;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size()) throw Error("config: " + key + ": bad integer '" + v + "'");
  return i;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Everything that changes an entry's result.
std::string fingerprint(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "image=" << cfg.image.string() << " rows=" << cfg.rows << " cols=" << cfg.cols
     << " bank=" << cfg.bank << " levels=" << cfg.levels << " seed=" << cfg.seed
     << " noise_sigma=" << g17(cfg.noise_sigma) << " max_iters=" << cfg.max_iters
     << " rel_tol=" << g17(cfg.rel_tol) << " continuation=" << cfg.continuation
     << " keep_dc=" << cfg.keep_dc << " lambdas=";
  for (std::size_t i = 0; i < cfg.lambdas.size(); ++i) os << (i ? "," : "") << g17(cfg.lambdas[i]);
  return os.str();
}

std::filesystem::path entry_path(const ExperimentConfig& cfg, double ratio, int p) {
  char name[64];
  std::snprintf(name, sizeof name, "r%.6f_p%d.txt", ratio, p);
  return cfg.output_dir / "entries" / name;
}

bool load_entry(const std::filesystem::path& path, const std::string& fp, SweepRow& row) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line) || line != fp) return false;
  if (!std::getline(in, line)) return false;
  std::istringstream ss(line);
  std::string lam, ps, ss_, it, m;
  if (!(ss >> m >> lam >> ps >> ss_ >> it)) return false;
  row.m = std::stoull(m);
  row.lambda_rel = std::stod(lam);
  row.psnr = std::stod(ps);
  row.ssim = std::stod(ss_);
  row.iterations = std::stoi(it);
  return true;
}

void store_entry(const std::filesystem::path& path, const std::string& fp, const SweepRow& row) {
  std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    out << fp << '\n'
        << row.m << ' ' << g17(row.lambda_rel) << ' ' << g17(row.psnr) << ' ' << g17(row.ssim)
        << ' ' << row.iterations << '\n';
    if (!out) throw Error("sweep: cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (ratios.empty()) throw Error("config: ratios is empty");
  for (double r : ratios)
    if (!(r > 0.0 && r <= 1.0)) throw Error("config: ratio " + g17(r) + " not in (0, 1]");
  if (orders.empty()) throw Error("config: orders is empty");
  for (int p : orders) SplineOrder{p};
  if (lambdas.empty()) throw Error("config: lambda is empty");
  for (double l : lambdas)
    if (!(l >= 0.0)) throw Error("config: lambda must be >= 0");
  filter_bank(bank);
  if (levels < 0) throw Error("config: levels must be >= 0");
  if (rows != 0 && cols != 0 && !is_power_of_two(rows * cols))
    throw Error("config: K*L = " + std::to_string(rows * cols) + " is not a power of two");
  if (max_iters <= 0 || !(rel_tol > 0.0)) throw Error("config: bad solver limits");
  if (noise_sigma < 0.0) throw Error("config: noise_sigma must be >= 0");
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "image") {
    cfg.image = v;
  } else if (key == "rows") {
    cfg.rows = static_cast<std::size_t>(parse_int(key, v));
  } else if (key == "cols") {
    cfg.cols = static_cast<std::size_t>(parse_int(key, v));
  } else if (key == "ratios") {
    cfg.ratios.clear();
    for (const auto& s : split_list(v)) cfg.ratios.push_back(parse_double(key, s));
  } else if (key == "orders") {
    cfg.orders.clear();
    for (const auto& s : split_list(v)) cfg.orders.push_back(static_cast<int>(parse_int(key, s)));
  } else if (key == "bank") {
    cfg.bank = v;
  } else if (key == "levels") {
    cfg.levels = static_cast<int>(parse_int(key, v));
  } else if (key == "lambda") {
    cfg.lambdas.clear();
    for (const auto& s : split_list(v)) cfg.lambdas.push_back(parse_double(key, s));
  } else if (key == "seed") {
    cfg.seed = std::stoull(v);
  } else if (key == "noise_sigma") {
    cfg.noise_sigma = parse_double(key, v);
  } else if (key == "max_iters") {
    cfg.max_iters = static_cast<int>(parse_int(key, v));
  } else if (key == "rel_tol") {
    cfg.rel_tol = parse_double(key, v);
  } else if (key == "continuation") {
    cfg.continuation = v == "1" || v == "true" || v == "yes";
  } else if (key == "keep_dc") {
    cfg.keep_dc = v == "1" || v == "true" || v == "yes";
  } else if (key == "output_dir") {
    cfg.output_dir = v;
  } else {
    throw Error("config: unknown key '" + key + "'");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open " + path.string());
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config: " + path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  // Relative image paths are resolved against the config file's directory.
  if (!cfg.image.empty() && cfg.image.is_relative()) cfg.image = path.parent_path() / cfg.image;
  return cfg;
}

void apply_env_overrides(ExperimentConfig& cfg) {
  if (const char* dir = std::getenv("SPCS_OUTPUT_DIR"); dir != nullptr && *dir != '\0')
    cfg.output_dir = dir;
}

Grid load_scene_samples(const ExperimentConfig& cfg) {
  Grid pixels = read_pgm(cfg.image).pixels;
  const std::size_t k = cfg.rows ? cfg.rows : pixels.rows();
  const std::size_t l = cfg.cols ? cfg.cols : pixels.cols();
  if (k == pixels.rows() && l == pixels.cols()) return pixels;
  return center_crop(pixels, k, l);
}

std::size_t measurement_count(double ratio, std::size_t n) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw Error("measurement ratio must be in (0, 1]");
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))), 1, n);
}

double lambda_max(const LinearOperator& op, std::span<const double> y) {
  std::vector<double> r(y.begin(), y.end());
  for (auto& v : r) v *= 2.0;
  double out = 0.0;
  for (double g : op.adjoint(r)) out = std::max(out, std::abs(g));
  return out;
}

Reconstruction reconstruct(const MeasurementSet& ms, SplineOrder p, const FilterBank& bank,
                           int levels, double lambda_rel, SolverConfig solver) {
  const Manifest& mf = ms.manifest;
  if (ms.y.size() != mf.m) throw DimensionError("reconstruct: y length does not match manifest m");
  if (mf.k * mf.l != mf.n) throw DimensionError("reconstruct: manifest k*l != n");
  const SensingOp op(mf.srm(), p, bank, levels, mf.k, mf.l);
  Reconstruction out;
  out.lambda = lambda_rel * lambda_max(op, ms.y);
  solver.lambda = out.lambda;
  auto result = solve_l1(op, ms.y, solver);
  out.a0 = op.coefficients(result.x.data);
  out.samples = convolve_valid(out.a0, op.crosscorr().taps);
  out.x = std::move(result.x);
  out.report = std::move(result.report);
  return out;
}

Grid render_pointwise_interior(const Grid& a0, SplineOrder p) {
  const std::size_t h = crosscorr_seq(p).half();
  return crop(render_pointwise(a0, p), h, h);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg,
                                const std::function<void(const std::string&)>& log) {
  cfg.validate();
  const Grid truth = load_scene_samples(cfg);
  const Scene scene = Scene::pixel_image(truth);
  const FilterBank bank = filter_bank(cfg.bank);
  const std::string fp = fingerprint(cfg);
  const std::size_t n = truth.size();
  if (!is_power_of_two(n)) throw Error("sweep: K*L = " + std::to_string(n) + " is not a power of two");

  std::vector<SweepRow> rows;
  for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
    const double ratio = cfg.ratios[ri];
    const std::size_t m = measurement_count(ratio, n);
    const SrmConfig srm = SrmConfig::make(n, m, derive_seed(cfg.seed, ri), cfg.keep_dc);
    MeasurementSet ms;
    bool acquired = false;
    for (int order : cfg.orders) {
      SweepRow row;
      row.ratio = ratio;
      row.p = order;
      const auto path = entry_path(cfg, ratio, order);
      if (load_entry(path, fp, row)) {
        if (log) log("cached " + path.filename().string());
        rows.push_back(row);
        continue;
      }
      if (!acquired) {
        ms = acquire(scene, srm, cfg.noise_sigma);
        acquired = true;
      }
      row.m = m;
      row.psnr = -std::numeric_limits<double>::infinity();
      for (double lam : cfg.lambdas) {
        SolverConfig sc;
        sc.max_iters = cfg.max_iters;
        sc.rel_tol = cfg.rel_tol;
        sc.continuation = cfg.continuation;
        const Reconstruction rec = reconstruct(ms, SplineOrder{order}, bank, cfg.levels, lam, sc);
        const double q = psnr(truth, rec.samples, 1.0);
        if (log) {
          char buf[160];
          std::snprintf(buf, sizeof buf, "ratio=%.4f p=%d lambda=%.3g psnr=%.4f iters=%d %.1fs",
                        ratio, order, lam, q, rec.report.iterations, rec.report.wall_seconds);
          log(buf);
        }
        if (q > row.psnr) {
          row.psnr = q;
          row.lambda_rel = lam;
          row.ssim = ssim(truth, rec.samples, 1.0);
          row.iterations = rec.report.iterations;
        }
      }
      store_entry(path, fp, row);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "ratio\tp\tm\tlambda_rel\tpsnr_db\tssim\titerations\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.4f\t%d\t%zu\t%.3e\t%.4f\t%.6f\t%d\n", r.ratio, r.p, r.m,
                  r.lambda_rel, r.psnr, r.ssim, r.iterations);
    os << buf;
  }
  return os.str();
}

}  // namespace spcs
