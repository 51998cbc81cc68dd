#include "spcs/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

namespace spcs {
namespace {

// Next header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& is) {
  std::string tok;
  int ch;
  while ((ch = is.get()) != EOF) {
    if (ch == '#') {
      while ((ch = is.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

std::size_t pnm_number(std::istream& is, const std::filesystem::path& path) {
  const std::string tok = pnm_token(is);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(c); }))
    throw Error("read_pgm: bad header in " + path.string());
  return std::stoul(tok);
}

}  // namespace

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_pgm: cannot open " + path.string());
  if (pnm_token(in) != "P5") throw Error("read_pgm: " + path.string() + " is not a binary PGM");
  const std::size_t cols = pnm_number(in, path);
  const std::size_t rows = pnm_number(in, path);
  const std::size_t maxval = pnm_number(in, path);
  if (rows == 0 || cols == 0 || maxval == 0 || maxval > 65535)
    throw Error("read_pgm: unsupported header in " + path.string());
  const std::size_t bpp = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(rows * cols * bpp);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw Error("read_pgm: truncated pixel data in " + path.string());
  Image img{Grid(rows, cols), static_cast<int>(maxval)};
  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const unsigned v = bpp == 1 ? raw[i] : (unsigned{raw[2 * i]} << 8) | raw[2 * i + 1];
    img.pixels.values()[i] = v * scale;
  }
  return img;
}

void write_pgm(const std::filesystem::path& path, const Grid& pixels, int max_value) {
  if (max_value <= 0 || max_value > 65535) throw Error("write_pgm: max value out of range");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_pgm: cannot create " + path.string());
  out << "P5\n" << pixels.cols() << ' ' << pixels.rows() << '\n' << max_value << '\n';
  const bool wide = max_value > 255;
  std::vector<unsigned char> raw;
  raw.reserve(pixels.size() * (wide ? 2 : 1));
  for (double v : pixels.values()) {
    const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * max_value));
    if (wide) raw.push_back(static_cast<unsigned char>(q >> 8));
    raw.push_back(static_cast<unsigned char>(q & 0xFF));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw Error("write_pgm: write failed for " + path.string());
}

Grid center_crop(const Grid& g, std::size_t rows, std::size_t cols) {
  if (rows > g.rows() || cols > g.cols())
    throw DimensionError("center_crop: window larger than image");
  const std::size_t r0 = (g.rows() - rows) / 2, c0 = (g.cols() - cols) / 2;
  Grid out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out(r, c) = g(r0 + r, c0 + c);
  return out;
}

}  // namespace spcs
