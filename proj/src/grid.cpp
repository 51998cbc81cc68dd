#include "spcs/grid.hpp"

namespace spcs {

Grid crop(const Grid& g, std::size_t margin_r, std::size_t margin_c) {
  if (2 * margin_r > g.rows() || 2 * margin_c > g.cols())
    throw DimensionError("crop: margins exceed grid " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()));
  Grid out(g.rows() - 2 * margin_r, g.cols() - 2 * margin_c);
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = g(r + margin_r, c + margin_c);
  return out;
}

}  // namespace spcs
