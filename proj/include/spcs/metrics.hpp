#pragma once

#include <limits>

#include "spcs/grid.hpp"

namespace spcs {

/// 10 log10(peak^2 / MSE) in dB. Identical inputs give +infinity.
double psnr(const Grid& ref, const Grid& test, double peak = 1.0);

inline bool psnr_is_exact(double db) noexcept { return db == std::numeric_limits<double>::infinity(); }

/// Mean SSIM over all positions where an 11x11 Gaussian window (sigma 1.5)
/// fits, with K1 = 0.01, K2 = 0.03 and dynamic range `peak`.
double ssim(const Grid& ref, const Grid& test, double peak = 1.0);

}  // namespace spcs
