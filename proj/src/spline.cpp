#include "spcs/spline.hpp"

#include "spcs/op_count.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

namespace spcs {
namespace {

// r[k] = b^{p+1}(k) as exact rationals, k = -h..h.
// Degrees 4..6 were cross-checked against Gauss-Legendre integration of
// <b^p, b^0(. - k)> (tests/spline_test.cpp).
const std::array<std::vector<double>, SplineOrder::kMax + 1> kCrossCorr = {{
    {1.0},
    {1.0 / 8, 3.0 / 4, 1.0 / 8},
    {1.0 / 6, 2.0 / 3, 1.0 / 6},
    {1.0 / 384, 76.0 / 384, 230.0 / 384, 76.0 / 384, 1.0 / 384},
    {1.0 / 120, 26.0 / 120, 66.0 / 120, 26.0 / 120, 1.0 / 120},
    {1.0 / 46080, 722.0 / 46080, 10543.0 / 46080, 23548.0 / 46080, 10543.0 / 46080,
     722.0 / 46080, 1.0 / 46080},
}};

// b^p(j) at integers, |j| <= floor((p+1)/2) minus zero end taps.
const std::array<std::vector<double>, SplineOrder::kMax + 1> kIntegerTaps = {{
    {1.0},
    {1.0},
    {1.0 / 8, 3.0 / 4, 1.0 / 8},
    {1.0 / 6, 2.0 / 3, 1.0 / 6},
    {1.0 / 384, 76.0 / 384, 230.0 / 384, 76.0 / 384, 1.0 / 384},
    {1.0 / 120, 26.0 / 120, 66.0 / 120, 26.0 / 120, 1.0 / 120},
}};

std::size_t check_taps(std::span<const double> taps, const char* stage) {
  if (taps.empty() || taps.size() % 2 == 0)
    throw Error(std::string(stage) + ": taps must have odd, nonzero length");
  return taps.size();
}

// Convolution along the column index (within each row).
Grid conv_cols(const Grid& g, std::span<const double> taps, std::ptrdiff_t out_cols,
               std::ptrdiff_t shift) {
  // out(r, c) = sum_j taps[j] * g(r, c + shift - j), zero outside.
  const auto n = static_cast<std::ptrdiff_t>(taps.size());
  const auto in_cols = static_cast<std::ptrdiff_t>(g.cols());
  Grid out(g.rows(), static_cast<std::size_t>(out_cols));
  for (std::size_t r = 0; r < g.rows(); ++r) {
    const auto in = g.row(r);
    auto dst = out.row(r);
    for (std::ptrdiff_t c = 0; c < out_cols; ++c) {
      double acc = 0.0;
      bool first = true;
      for (std::ptrdiff_t j = 0; j < n; ++j) {
        const std::ptrdiff_t src = c + shift - j;
        if (src < 0 || src >= in_cols) continue;
        const double term = taps[static_cast<std::size_t>(j)] * in[static_cast<std::size_t>(src)];
        acc = first ? term : acc + term;
        first = false;
      }
      dst[static_cast<std::size_t>(c)] = acc;
    }
    SPCS_COUNT(out_cols * n);
  }
  return out;
}

// Convolution along the row index, accumulating whole rows.
Grid conv_rows(const Grid& g, std::span<const double> taps, std::ptrdiff_t out_rows,
               std::ptrdiff_t shift) {
  const auto n = static_cast<std::ptrdiff_t>(taps.size());
  const auto in_rows = static_cast<std::ptrdiff_t>(g.rows());
  Grid out(static_cast<std::size_t>(out_rows), g.cols());
  for (std::ptrdiff_t r = 0; r < out_rows; ++r) {
    auto dst = out.row(static_cast<std::size_t>(r));
    bool first = true;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const std::ptrdiff_t src = r + shift - j;
      if (src < 0 || src >= in_rows) continue;
      const double t = taps[static_cast<std::size_t>(j)];
      const auto in = g.row(static_cast<std::size_t>(src));
      if (first) {
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = t * in[c];
      } else {
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += t * in[c];
      }
      first = false;
    }
    SPCS_COUNT(n * static_cast<std::ptrdiff_t>(g.cols()));
  }
  return out;
}

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
struct FftwFree {
  void operator()(double* p) const { fftw_free(p); }
};

// In-place inverse filtering of every line of length n (stride 1 rows of a
// row-major buffer) by 1/R on the DCT-I grid.
void inverse_filter_lines(std::vector<double>& buf, std::size_t lines, std::size_t n,
                          const CrossCorrSeq& r) {
  if (n == 1) {
    double sum = 0.0;
    for (double t : r.taps) sum += t;
    for (auto& v : buf) v /= sum;
    return;
  }
  const double pi = std::acos(-1.0);
  std::vector<double> response(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = pi * static_cast<double>(k) / static_cast<double>(n - 1);
    double acc = r.at(0);
    for (int j = 1; j <= static_cast<int>(r.half()); ++j) acc += 2.0 * r.at(j) * std::cos(j * w);
    if (std::abs(acc) < 1e-12)
      throw Error("correction_filter_apply: R(e^jw) vanishes at w=" + std::to_string(w));
    response[k] = acc * 2.0 * static_cast<double>(n - 1);
  }
  std::unique_ptr<double, FftwFree> a(fftw_alloc_real(n));
  std::unique_ptr<double, FftwFree> b(fftw_alloc_real(n));
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> fwd(
      fftw_plan_r2r_1d(static_cast<int>(n), a.get(), b.get(), FFTW_REDFT00, FFTW_ESTIMATE));
  std::unique_ptr<fftw_plan_s, FftwPlanDeleter> inv(
      fftw_plan_r2r_1d(static_cast<int>(n), b.get(), a.get(), FFTW_REDFT00, FFTW_ESTIMATE));
  for (std::size_t line = 0; line < lines; ++line) {
    double* row = buf.data() + line * n;
    std::copy(row, row + n, a.get());
    fftw_execute(fwd.get());
    for (std::size_t k = 0; k < n; ++k) b.get()[k] /= response[k];
    fftw_execute(inv.get());
    std::copy(a.get(), a.get() + n, row);
  }
}

Grid transpose(const Grid& g) {
  Grid t(g.cols(), g.rows());
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) t(c, r) = g(r, c);
  return t;
}

}  // namespace

double bspline_value(int degree, double t) {
  if (degree < 0) throw Error("bspline_value: negative degree");
  const double half = 0.5 * (degree + 1);
  const double a = std::abs(t);
  if (a >= half) return (degree == 0 && a == half) ? 0.5 : 0.0;
  if (degree == 0) return 1.0;
  // Truncated-power form: sum_k (-1)^k C(n+1,k) (t + (n+1)/2 - k)_+^n / n!.
  // Evaluated at -|t| so only the left part of the support contributes.
  const double x = half - a;
  double sum = 0.0;
  double binom = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= degree; ++k) fact *= k;
  for (int k = 0; k <= degree + 1; ++k) {
    const double u = x - k;
    if (u <= 0.0) break;
    const double term = binom * std::pow(u, degree);
    sum += (k % 2 == 0) ? term : -term;
    binom = binom * (degree + 1 - k) / (k + 1);
  }
  return sum / fact;
}

double bspline_eval(SplineOrder p, double t) { return bspline_value(p.value(), t); }

std::vector<double> bspline_integer_taps(SplineOrder p) {
  return kIntegerTaps[static_cast<std::size_t>(p.value())];
}

CrossCorrSeq crosscorr_seq(SplineOrder p) {
  return CrossCorrSeq{p, kCrossCorr[static_cast<std::size_t>(p.value())]};
}

Grid convolve_valid(const Grid& g, std::span<const double> taps) {
  const auto n = check_taps(taps, "convolve_valid");
  if (g.rows() < n || g.cols() < n)
    throw DimensionError("convolve_valid: grid " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()) + " smaller than " + std::to_string(n) +
                         " taps");
  const auto sn = static_cast<std::ptrdiff_t>(n);
  const Grid h = conv_cols(g, taps, static_cast<std::ptrdiff_t>(g.cols()) - sn + 1, sn - 1);
  return conv_rows(h, taps, static_cast<std::ptrdiff_t>(g.rows()) - sn + 1, sn - 1);
}

Grid convolve_full(const Grid& g, std::span<const double> taps) {
  const auto sn = static_cast<std::ptrdiff_t>(check_taps(taps, "convolve_full"));
  const Grid h = conv_cols(g, taps, static_cast<std::ptrdiff_t>(g.cols()) + sn - 1, 0);
  return conv_rows(h, taps, static_cast<std::ptrdiff_t>(g.rows()) + sn - 1, 0);
}

Grid convolve_same(const Grid& g, std::span<const double> taps) {
  const auto sn = static_cast<std::ptrdiff_t>(check_taps(taps, "convolve_same"));
  const Grid h = conv_cols(g, taps, static_cast<std::ptrdiff_t>(g.cols()), sn / 2);
  return conv_rows(h, taps, static_cast<std::ptrdiff_t>(g.rows()), sn / 2);
}

Grid correction_filter_apply(const Grid& samples, SplineOrder p) {
  if (samples.empty()) return samples;
  const CrossCorrSeq r = crosscorr_seq(p);
  if (r.omega() == 1 && r.taps[0] == 1.0) return samples;
  std::vector<double> buf = samples.vector();
  inverse_filter_lines(buf, samples.rows(), samples.cols(), r);
  Grid t = transpose(Grid(samples.rows(), samples.cols(), std::move(buf)));
  std::vector<double> tb = std::move(t).vector();
  inverse_filter_lines(tb, samples.cols(), samples.rows(), r);
  return transpose(Grid(samples.cols(), samples.rows(), std::move(tb)));
}

Grid coefficients_for_samples(const Grid& samples, SplineOrder p) {
  const std::size_t h = crosscorr_seq(p).half();
  if (samples.empty()) throw DimensionError("coefficients_for_samples: empty grid");
  const auto reflect = [](std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) return std::ptrdiff_t{0};
    const std::ptrdiff_t period = 2 * (n - 1);
    i = ((i % period) + period) % period;
    return i < n ? i : period - i;
  };
  const auto rows = static_cast<std::ptrdiff_t>(samples.rows());
  const auto cols = static_cast<std::ptrdiff_t>(samples.cols());
  const auto sh = static_cast<std::ptrdiff_t>(h);
  Grid ext(samples.rows() + 2 * h, samples.cols() + 2 * h);
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(ext.rows()); ++r)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(ext.cols()); ++c)
      ext(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
          samples(static_cast<std::size_t>(reflect(r - sh, rows)),
                  static_cast<std::size_t>(reflect(c - sh, cols)));
  return correction_filter_apply(ext, p);
}

Grid render_pointwise(const Grid& a0, SplineOrder p) {
  const auto taps = bspline_integer_taps(p);
  return convolve_same(a0, taps);
}

Grid render_box_samples(const Grid& a0, SplineOrder p) {
  const CrossCorrSeq r = crosscorr_seq(p);
  return convolve_valid(a0, r.taps);
}

}  // namespace spcs
