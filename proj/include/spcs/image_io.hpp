#pragma once

#include <filesystem>

#include "spcs/grid.hpp"

namespace spcs {

/// Grayscale image with intensities scaled to [0, 1].
struct Image {
  Grid pixels;
  int max_value = 255;  // from the file; 255 or 65535 on write
};

/// Reads a binary portable graymap (P5), 8 or 16 bit.
Image read_pgm(const std::filesystem::path& path);

/// Writes P5 with the given max value (<= 65535); values are clamped to [0,1]
/// and rounded to the nearest level.
void write_pgm(const std::filesystem::path& path, const Grid& pixels, int max_value = 255);

/// Centered rows x cols window.
Grid center_crop(const Grid& g, std::size_t rows, std::size_t cols);

}  // namespace spcs
