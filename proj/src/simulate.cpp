#include "spcs/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "binary_io.hpp"

namespace spcs {
namespace {

struct GaussRule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

// Newton iteration on Legendre polynomials.
GaussRule gauss_legendre(int n) {
  GaussRule g;
  g.nodes.resize(static_cast<std::size_t>(n));
  g.weights.resize(static_cast<std::size_t>(n));
  const double pi = std::acos(-1.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    g.nodes[static_cast<std::size_t>(i)] = x;
    g.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return g;
}

}  // namespace

Scene Scene::pixel_image(Grid pixels) {
  Scene s;
  s.kind = Kind::PixelImage;
  s.pixels = std::move(pixels);
  return s;
}

Scene Scene::spline_synthetic(Grid a0, SplineOrder p) {
  Scene s;
  s.kind = Kind::SplineSynthetic;
  s.a0 = std::move(a0);
  s.order = p;
  return s;
}

Grid Scene::box_samples() const {
  return kind == Kind::PixelImage ? pixels : render_box_samples(a0, order);
}

std::uint64_t noise_seed(std::uint64_t seed) noexcept { return seed ^ 0xA0761D6478BD642FULL; }

MeasurementSet acquire(const Scene& scene, const SrmConfig& srm, double noise_sigma) {
  const Grid c = scene.box_samples();
  if (c.size() != srm.n)
    throw DimensionError("acquire: scene has " + std::to_string(c.rows()) + "x" +
                         std::to_string(c.cols()) + " samples, SRM expects n=" +
                         std::to_string(srm.n));
  MeasurementSet ms;
  ms.y = srm_forward(srm, c.values());
  if (noise_sigma > 0.0) {
    SplitMix64 rng(noise_seed(srm.seed));
    for (auto& v : ms.y) v += noise_sigma * rng.normal();
  }
  ms.manifest = Manifest{srm.m, srm.n, c.rows(), c.cols(), srm.seed,
                         scene.kind == Scene::Kind::PixelImage ? 0 : scene.order.value(),
                         noise_sigma, srm.keep_dc};
  return ms;
}

double quadrature_measurement_oracle(const Grid& a0, SplineOrder p, const Grid& mask,
                                     int gauss_points) {
  const int h = static_cast<int>(crosscorr_seq(p).half());
  const GaussRule rule = gauss_legendre(gauss_points);
  const int K = static_cast<int>(mask.rows()), L = static_cast<int>(mask.cols());

  // f(u,v) evaluated directly from the double sum over every coefficient.
  const auto f = [&](double u, double v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a0.rows(); ++i) {
      const double bu = bspline_eval(p, u - (static_cast<double>(i) - h));
      if (bu == 0.0) continue;
      for (std::size_t j = 0; j < a0.cols(); ++j) {
        const double bv = bspline_eval(p, v - (static_cast<double>(j) - h));
        acc += a0(i, j) * bu * bv;
      }
    }
    return acc;
  };

  // Mask cell (k,l) covers [k-1/2, k+1/2] x [l-1/2, l+1/2]; each half-cell is
  // free of spline breakpoints for every order.
  double total = 0.0;
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      const double s = mask(static_cast<std::size_t>(k), static_cast<std::size_t>(l));
      if (s == 0.0) continue;
      double cell = 0.0;
      for (int hu = 0; hu < 2; ++hu) {
        const double u0 = k - 0.5 + 0.5 * hu;
        for (int hv = 0; hv < 2; ++hv) {
          const double v0 = l - 0.5 + 0.5 * hv;
          for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
            const double u = u0 + 0.25 * (rule.nodes[a] + 1.0);
            for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
              const double v = v0 + 0.25 * (rule.nodes[b] + 1.0);
              cell += rule.weights[a] * rule.weights[b] * 0.0625 * f(u, v);
            }
          }
        }
      }
      total += s * cell;
    }
  }
  return total;
}

void write_measurements(std::ostream& os, const MeasurementSet& ms) {
  const Manifest& m = ms.manifest;
  if (ms.y.size() != m.m) throw DimensionError("write_measurements: y length != m");
  char sigma[64];
  std::snprintf(sigma, sizeof sigma, "%.17g", m.noise_sigma);
  os << "m=" << m.m << " n=" << m.n << " k=" << m.k << " l=" << m.l << " seed=" << m.seed
     << " p=" << m.p << " noise_sigma=" << sigma << " dc=" << (m.keep_dc ? 1 : 0) << '\n';
  detail::write_f64_le(os, ms.y);
}

MeasurementSet read_measurements(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("measurement file: missing header");
  const auto kv = detail::parse_header(line);
  MeasurementSet ms;
  Manifest& m = ms.manifest;
  m.m = std::stoull(detail::require_key(kv, "m"));
  m.n = std::stoull(detail::require_key(kv, "n"));
  m.k = std::stoull(detail::require_key(kv, "k"));
  m.l = std::stoull(detail::require_key(kv, "l"));
  m.seed = std::stoull(detail::require_key(kv, "seed"));
  m.p = std::stoi(detail::require_key(kv, "p"));
  m.noise_sigma = std::stod(detail::require_key(kv, "noise_sigma"));
  if (const auto it = kv.find("dc"); it != kv.end()) m.keep_dc = it->second == "1";
  if (m.k * m.l != m.n) throw DimensionError("measurement file: k*l != n");
  if (m.m > m.n) throw DimensionError("measurement file: m > n");
  ms.y = detail::read_f64_le(is, m.m);
  return ms;
}

}  // namespace spcs
