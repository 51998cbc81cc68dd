#include "spcs/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "binary_io.hpp"
#include "spcs/op_count.hpp"

namespace spcs {
namespace {

FilterTaps symmetric_taps(std::vector<double> half_taps, double scale) {
  // half_taps = {h[0], h[1], ..., h[n]} -> offsets -n..n
  const int n = static_cast<int>(half_taps.size()) - 1;
  FilterTaps f;
  f.first = -n;
  for (int k = -n; k <= n; ++k) f.taps.push_back(scale * half_taps[static_cast<std::size_t>(std::abs(k))]);
  return f;
}

FilterTaps modulate(const FilterTaps& f) {
  FilterTaps out = f;
  for (int k = f.first; k <= f.last(); ++k)
    if (k % 2 != 0) out.taps[static_cast<std::size_t>(k - f.first)] *= -1.0;
  return out;
}

// High filters follow from the lowpass pair: a_high[k] = (-1)^k s_low[k],
// s_high[k] = (-1)^k a_low[k].
FilterBank biorthogonal(std::string name, FilterTaps analysis_low, FilterTaps synthesis_low,
                        int nr, int nd) {
  FilterBank b;
  b.name = std::move(name);
  b.analysis_high = modulate(synthesis_low);
  b.synthesis_high = modulate(analysis_low);
  b.analysis_low = std::move(analysis_low);
  b.synthesis_low = std::move(synthesis_low);
  b.synthesis_vanishing_moments = nr;
  b.analysis_vanishing_moments = nd;
  b.symmetric_extension = true;
  return b;
}

struct LineOps {
  const FilterBank& bank;
  std::size_t n;
  std::size_t n_low;

  std::size_t index(std::ptrdiff_t m) const {
    const auto sn = static_cast<std::ptrdiff_t>(n);
    if (m >= 0 && m < sn) return static_cast<std::size_t>(m);
    if (!bank.symmetric_extension)
      throw DimensionError("wavelet: filter '" + bank.name + "' reaches outside a line of " +
                           std::to_string(n));
    const std::ptrdiff_t period = 2 * (sn - 1);
    m = ((m % period) + period) % period;
    return static_cast<std::size_t>(m < sn ? m : period - m);
  }
  // Slot of interleaved position m in the [low | high] line.
  std::size_t slot(std::size_t m) const { return (m & 1U) ? n_low + m / 2 : m / 2; }
  static bool odd(std::ptrdiff_t m) { return (m & 1) != 0; }

  void analysis(const double* in, double* out) const {
    for (std::size_t m = 0; m < n; ++m) {
      const FilterTaps& f = (m & 1U) ? bank.analysis_high : bank.analysis_low;
      double acc = 0.0;
      for (int k = f.first; k <= f.last(); ++k)
        acc += f.taps[static_cast<std::size_t>(k - f.first)] *
               in[index(static_cast<std::ptrdiff_t>(m) + k)];
      out[slot(m)] = acc;
    }
  }
  void analysis_adjoint(const double* in, double* out) const {
    std::fill(out, out + n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      const FilterTaps& f = (m & 1U) ? bank.analysis_high : bank.analysis_low;
      const double v = in[slot(m)];
      for (int k = f.first; k <= f.last(); ++k)
        out[index(static_cast<std::ptrdiff_t>(m) + k)] +=
            f.taps[static_cast<std::size_t>(k - f.first)] * v;
    }
  }
  void synthesis(const double* in, double* out) const {
    for (std::size_t t = 0; t < n; ++t) {
      double acc = 0.0;
      for (int q = 0; q < 2; ++q) {
        const FilterTaps& f = q ? bank.synthesis_high : bank.synthesis_low;
        for (int d = f.first; d <= f.last(); ++d) {
          const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(t) - d;
          if (odd(m) != (q == 1)) continue;
          acc += f.taps[static_cast<std::size_t>(d - f.first)] * in[slot(index(m))];
        }
      }
      out[t] = acc;
    }
  }
  void synthesis_adjoint(const double* in, double* out) const {
    std::fill(out, out + n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double v = in[t];
      for (int q = 0; q < 2; ++q) {
        const FilterTaps& f = q ? bank.synthesis_high : bank.synthesis_low;
        for (int d = f.first; d <= f.last(); ++d) {
          const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(t) - d;
          if (odd(m) != (q == 1)) continue;
          out[slot(index(m))] += f.taps[static_cast<std::size_t>(d - f.first)] * v;
        }
      }
    }
  }
};

enum class Kernel { Analysis, AnalysisAdjoint, Synthesis, SynthesisAdjoint };

void run_line(const LineOps& ops, Kernel k, const double* in, double* out) {
  SPCS_COUNT(ops.n * ops.bank.max_length());
  switch (k) {
    case Kernel::Analysis: ops.analysis(in, out); break;
    case Kernel::AnalysisAdjoint: ops.analysis_adjoint(in, out); break;
    case Kernel::Synthesis: ops.synthesis(in, out); break;
    case Kernel::SynthesisAdjoint: ops.synthesis_adjoint(in, out); break;
  }
}

// Applies a 1D kernel along each row (horizontal) of the top-left r x c region.
void along_rows(Grid& buf, std::size_t r, std::size_t c, const FilterBank& bank, Kernel k,
                std::vector<double>& tmp) {
  const LineOps ops{bank, c, (c + 1) / 2};
  tmp.resize(c);
  for (std::size_t i = 0; i < r; ++i) {
    double* line = buf.row(i).data();
    run_line(ops, k, line, tmp.data());
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(c), line);
  }
}

// Applies a 1D kernel along each column (vertical) of the top-left r x c region.
void along_cols(Grid& buf, std::size_t r, std::size_t c, const FilterBank& bank, Kernel k,
                std::vector<double>& tmp) {
  const LineOps ops{bank, r, (r + 1) / 2};
  tmp.resize(2 * r);
  double* in = tmp.data();
  double* out = tmp.data() + r;
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < r; ++i) in[i] = buf(i, j);
    run_line(ops, k, in, out);
    for (std::size_t i = 0; i < r; ++i) buf(i, j) = out[i];
  }
}

struct Region {
  std::size_t r0, c0;
  Subband band;
};

// Buffer regions of every subband in flat order.
std::vector<Region> regions(const WaveletLayout& L) {
  std::vector<Region> out;
  const int I = L.levels();
  out.push_back({0, 0, L.approx()});
  for (int level = I; level >= 1; --level) {
    const std::size_t rl = L.rows_at(level), cl = L.cols_at(level);
    out.push_back({rl, 0, L.detail(level, WaveletLayout::Orientation::U)});
    out.push_back({0, cl, L.detail(level, WaveletLayout::Orientation::V)});
    out.push_back({rl, cl, L.detail(level, WaveletLayout::Orientation::UV)});
  }
  return out;
}

void pack(const Grid& buf, const WaveletLayout& L, std::span<double> flat) {
  for (const Region& reg : regions(L))
    for (std::size_t i = 0; i < reg.band.rows; ++i)
      for (std::size_t j = 0; j < reg.band.cols; ++j)
        flat[reg.band.offset + i * reg.band.cols + j] = buf(reg.r0 + i, reg.c0 + j);
}

void unpack(std::span<const double> flat, const WaveletLayout& L, Grid& buf) {
  for (const Region& reg : regions(L))
    for (std::size_t i = 0; i < reg.band.rows; ++i)
      for (std::size_t j = 0; j < reg.band.cols; ++j)
        buf(reg.r0 + i, reg.c0 + j) = flat[reg.band.offset + i * reg.band.cols + j];
}

void check_flat(std::size_t n, const WaveletLayout& L, const char* stage) {
  if (n != L.size())
    throw DimensionError(std::string(stage) + ": coefficient vector has " + std::to_string(n) +
                         " entries, layout expects " + std::to_string(L.size()));
}

// Coarse-to-fine synthesis-type pass (Kernel::Synthesis or AnalysisAdjoint).
void fine_from_coarse(Grid& buf, const WaveletLayout& L, const FilterBank& bank, Kernel k) {
  std::vector<double> tmp;
  for (int j = L.levels() - 1; j >= 0; --j) {
    along_cols(buf, L.rows_at(j), L.cols_at(j), bank, k, tmp);
    along_rows(buf, L.rows_at(j), L.cols_at(j), bank, k, tmp);
  }
}

// Fine-to-coarse analysis-type pass (Kernel::Analysis or SynthesisAdjoint).
void coarse_from_fine(Grid& buf, const WaveletLayout& L, const FilterBank& bank, Kernel k) {
  std::vector<double> tmp;
  for (int j = 0; j < L.levels(); ++j) {
    along_rows(buf, L.rows_at(j), L.cols_at(j), bank, k, tmp);
    along_cols(buf, L.rows_at(j), L.cols_at(j), bank, k, tmp);
  }
}

}  // namespace

std::size_t FilterBank::max_length() const noexcept {
  return std::max({analysis_low.taps.size(), analysis_high.taps.size(),
                   synthesis_low.taps.size(), synthesis_high.taps.size()});
}

FilterBank filter_bank(std::string_view name) {
  const double s2 = std::sqrt(2.0);
  if (name == "bior2.2") {
    return biorthogonal("bior2.2", symmetric_taps({0.75, 0.25, -0.125}, s2),
                        symmetric_taps({0.5, 0.25}, s2), 2, 2);
  }
  if (name == "bior4.4") {
    // CDF 9/7 from the degree-3 Daubechies polynomial; real root
    // y0 = -0.34238409485836913 goes to the 7-tap side.
    return biorthogonal("bior4.4",
                        symmetric_taps({0.85269867900940342, 0.37740285561265376,
                                        -0.11062440441842341, -0.023849465019380002,
                                        0.037828455506995461},
                                       1.0),
                        symmetric_taps({0.78848561640566440, 0.41809227322221220,
                                        -0.040689417609558437, -0.064538882628938439},
                                       1.0),
                        4, 4);
  }
  if (name == "haar") {
    const double h = 1.0 / s2;
    FilterBank b;
    b.name = "haar";
    b.analysis_low = {{h, h}, 0};
    b.analysis_high = {{h, -h}, -1};
    b.synthesis_low = {{h, h}, 0};
    b.synthesis_high = {{h, -h}, -1};
    b.synthesis_vanishing_moments = 1;
    b.analysis_vanishing_moments = 1;
    b.symmetric_extension = false;
    return b;
  }
  throw Error("unknown filter bank '" + std::string(name) + "'");
}

std::vector<std::string> filter_bank_names() { return {"bior2.2", "bior4.4", "haar"}; }

WaveletLayout::WaveletLayout(std::size_t rows, std::size_t cols, int levels,
                             const FilterBank& bank)
    : rows_(rows), cols_(cols), levels_(levels) {
  if (levels < 1) throw DimensionError("wavelet: levels must be >= 1");
  row_ladder_.push_back(rows);
  col_ladder_.push_back(cols);
  for (int j = 0; j < levels; ++j) {
    const std::size_t r = row_ladder_.back(), c = col_ladder_.back();
    const bool too_small = r < 2 || c < 2;
    const bool odd_haar = !bank.symmetric_extension && (r % 2 != 0 || c % 2 != 0);
    if (too_small || odd_haar)
      throw DimensionError("wavelet: " + std::to_string(levels) + " levels too many for " +
                           std::to_string(rows) + "x" + std::to_string(cols) + " grid with " +
                           bank.name + " (level " + std::to_string(j + 1) + " input " +
                           std::to_string(r) + "x" + std::to_string(c) + ")");
    row_ladder_.push_back((r + 1) / 2);
    col_ladder_.push_back((c + 1) / 2);
  }
}

Subband WaveletLayout::approx() const {
  return {row_ladder_.back(), col_ladder_.back(), 0};
}

Subband WaveletLayout::detail(int level, Orientation o) const {
  if (level < 1 || level > levels_) throw DimensionError("wavelet: level out of range");
  std::size_t offset = approx().size();
  for (int l = levels_; l >= 1; --l) {
    const auto lu = static_cast<std::size_t>(l);
    const std::size_t rl = row_ladder_[lu], cl = col_ladder_[lu];
    const std::size_t rh = row_ladder_[lu - 1] - rl, ch = col_ladder_[lu - 1] - cl;
    const Subband u{rh, cl, offset};
    const Subband v{rl, ch, u.offset + u.size()};
    const Subband uv{rh, ch, v.offset + v.size()};
    if (l == level) return o == Orientation::U ? u : (o == Orientation::V ? v : uv);
    offset = uv.offset + uv.size();
  }
  return {};
}

void synthesize(std::span<const double> flat, const WaveletLayout& layout, const FilterBank& bank,
                Grid& out) {
  check_flat(flat.size(), layout, "idwt2");
  if (out.rows() != layout.rows() || out.cols() != layout.cols())
    out = Grid(layout.rows(), layout.cols());
  unpack(flat, layout, out);
  fine_from_coarse(out, layout, bank, Kernel::Synthesis);
}

void synthesize_adjoint(const Grid& g, const WaveletLayout& layout, const FilterBank& bank,
                        std::span<double> flat) {
  if (g.rows() != layout.rows() || g.cols() != layout.cols())
    throw DimensionError("idwt2_adjoint: grid " + std::to_string(g.rows()) + "x" +
                         std::to_string(g.cols()) + " does not match layout");
  check_flat(flat.size(), layout, "idwt2_adjoint");
  Grid buf = g;
  coarse_from_fine(buf, layout, bank, Kernel::SynthesisAdjoint);
  pack(buf, layout, flat);
}

WaveletVec dwt2(const Grid& a0, const FilterBank& bank, int levels) {
  WaveletVec x{WaveletLayout(a0.rows(), a0.cols(), levels, bank), {}};
  Grid buf = a0;
  coarse_from_fine(buf, x.layout, bank, Kernel::Analysis);
  x.data.resize(x.layout.size());
  pack(buf, x.layout, x.data);
  return x;
}

Grid idwt2(const WaveletVec& x, const FilterBank& bank) {
  Grid out;
  synthesize(x.data, x.layout, bank, out);
  return out;
}

WaveletVec idwt2_adjoint(const Grid& g, const FilterBank& bank, int levels) {
  WaveletVec x{WaveletLayout(g.rows(), g.cols(), levels, bank), {}};
  x.data.resize(x.layout.size());
  synthesize_adjoint(g, x.layout, bank, x.data);
  return x;
}

Grid dwt2_adjoint(const WaveletVec& x, const FilterBank& bank) {
  check_flat(x.data.size(), x.layout, "dwt2_adjoint");
  Grid buf(x.layout.rows(), x.layout.cols());
  unpack(x.data, x.layout, buf);
  fine_from_coarse(buf, x.layout, bank, Kernel::AnalysisAdjoint);
  return buf;
}

void write_coefficients(std::ostream& os, std::span<const double> data, int levels,
                        std::size_t rows, std::size_t cols, std::string_view bank) {
  if (data.size() != rows * cols)
    throw DimensionError("write_coefficients: payload does not match rows x cols");
  os << "levels=" << levels << " rows=" << rows << " cols=" << cols << " bank=" << bank << '\n';
  detail::write_f64_le(os, data);
}

CoefficientDump read_coefficients(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error("coefficient dump: missing header");
  const auto kv = detail::parse_header(line);
  CoefficientDump d;
  d.levels = std::stoi(detail::require_key(kv, "levels"));
  d.rows = std::stoull(detail::require_key(kv, "rows"));
  d.cols = std::stoull(detail::require_key(kv, "cols"));
  d.bank = detail::require_key(kv, "bank");
  d.data = detail::read_f64_le(is, d.rows * d.cols);
  return d;
}

}  // namespace spcs
