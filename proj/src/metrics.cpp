#include "spcs/metrics.hpp"

#include <array>
#include <cmath>

#include "spcs/spline.hpp"

namespace spcs {
namespace {

void require_same(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_shape(b))
    throw DimensionError(std::string(what) + ": " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

std::array<double, 11> gaussian_window() {
  std::array<double, 11> w{};
  double sum = 0.0;
  for (int i = 0; i < 11; ++i) {
    const double d = i - 5;
    w[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (auto& v : w) v /= sum;
  return w;
}

Grid product(const Grid& a, const Grid& b) {
  Grid out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.values()[i] = a.values()[i] * b.values()[i];
  return out;
}

}  // namespace

double psnr(const Grid& ref, const Grid& test, double peak) {
  require_same(ref, test, "psnr");
  if (!(peak > 0.0)) throw Error("psnr: peak must be > 0");
  if (ref.empty()) throw DimensionError("psnr: empty images");
  double mse = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = ref.values()[i] - test.values()[i];
    mse += d * d;
  }
  mse /= static_cast<double>(ref.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

double ssim(const Grid& ref, const Grid& test, double peak) {
  require_same(ref, test, "ssim");
  if (ref.rows() < 11 || ref.cols() < 11)
    throw DimensionError("ssim: images smaller than the 11x11 window");
  const auto w = gaussian_window();
  const Grid mx = convolve_valid(ref, w);
  const Grid my = convolve_valid(test, w);
  const Grid sxx = convolve_valid(product(ref, ref), w);
  const Grid syy = convolve_valid(product(test, test), w);
  const Grid sxy = convolve_valid(product(ref, test), w);
  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double ux = mx.values()[i], uy = my.values()[i];
    const double vx = sxx.values()[i] - ux * ux;
    const double vy = syy.values()[i] - uy * uy;
    const double cov = sxy.values()[i] - ux * uy;
    total += ((2.0 * ux * uy + c1) * (2.0 * cov + c2)) /
             ((ux * ux + uy * uy + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mx.size());
}

}  // namespace spcs
