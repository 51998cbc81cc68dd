#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spcs/grid.hpp"

namespace spcs {

/// FIR taps with the offset of the first tap: coefficient at offset
/// `first + i` is `taps[i]`.
struct FilterTaps {
  std::vector<double> taps;
  int first = 0;

  int last() const noexcept { return first + static_cast<int>(taps.size()) - 1; }
  double at(int k) const noexcept {
    return (k < first || k > last()) ? 0.0 : taps[static_cast<std::size_t>(k - first)];
  }
};

/// Two-channel perfect-reconstruction bank.
///
/// Analysis: lowpass outputs sit on even positions, highpass on odd ones,
///   v[m] = sum_k a_q[k] x[m + k],  q = m mod 2.
/// Synthesis: x[t] = sum_m u[m] s_{m mod 2}[t - m] on the interleaved subbands.
/// Banks with odd symmetric filters use whole-sample symmetric extension
/// (any length >= 2, ceiling halving); Haar needs none and requires even lengths.
struct FilterBank {
  std::string name;
  FilterTaps analysis_low;
  FilterTaps analysis_high;
  FilterTaps synthesis_low;
  FilterTaps synthesis_high;
  int synthesis_vanishing_moments = 0;  // N_r
  int analysis_vanishing_moments = 0;   // N_d
  bool symmetric_extension = true;

  std::size_t max_length() const noexcept;
};

/// Known banks: "bior2.2" (CDF 5/3), "bior4.4" (CDF 9/7), "haar".
/// Lowpass filters sum to sqrt(2) on both sides.
FilterBank filter_bank(std::string_view name);
std::vector<std::string> filter_bank_names();

/// Position of one subband inside the flat coefficient vector.
struct Subband {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t offset = 0;
  std::size_t size() const noexcept { return rows * cols; }
};

/// Shape ladder of an I-level 2D decomposition of a rows x cols grid.
///
/// Flat order: [a(I), d_u(I), d_v(I), d_uv(I), d_u(I-1), ..., d_uv(1)], each
/// subband row-major. u is the row index, v the column index; d_u is highpass
/// along u and lowpass along v.
class WaveletLayout {
 public:
  WaveletLayout() = default;
  /// Throws DimensionError if `levels` cannot be applied with `bank`.
  WaveletLayout(std::size_t rows, std::size_t cols, int levels, const FilterBank& bank);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  int levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return rows_ * cols_; }

  /// Dimensions of the approximation entering level j (j = 0 is the grid).
  std::size_t rows_at(int j) const { return row_ladder_.at(static_cast<std::size_t>(j)); }
  std::size_t cols_at(int j) const { return col_ladder_.at(static_cast<std::size_t>(j)); }

  Subband approx() const;
  enum class Orientation { U, V, UV };
  Subband detail(int level, Orientation o) const;

  friend bool operator==(const WaveletLayout&, const WaveletLayout&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  int levels_ = 0;
  std::vector<std::size_t> row_ladder_;
  std::vector<std::size_t> col_ladder_;
};

/// Flattened multi-level 2D wavelet coefficients.
struct WaveletVec {
  WaveletLayout layout;
  std::vector<double> data;
};

/// Forward analysis transform (Psi^{-1}).
WaveletVec dwt2(const Grid& a0, const FilterBank& bank, int levels);
/// Synthesis transform a0 = Psi x.
Grid idwt2(const WaveletVec& x, const FilterBank& bank);
/// Psi^T: analysis-style pass built from the synthesis filters.
WaveletVec idwt2_adjoint(const Grid& g, const FilterBank& bank, int levels);
/// (Psi^{-1})^T: synthesis-style pass built from the analysis filters.
Grid dwt2_adjoint(const WaveletVec& x, const FilterBank& bank);

/// Span-based variants used on the hot path. `flat` has layout.size() entries.
void synthesize(std::span<const double> flat, const WaveletLayout& layout,
                const FilterBank& bank, Grid& out);
void synthesize_adjoint(const Grid& g, const WaveletLayout& layout, const FilterBank& bank,
                        std::span<double> flat);

/// Coefficient dump: text line `levels=I rows=R cols=C bank=NAME`, then
/// little-endian float64 payload.
void write_coefficients(std::ostream& os, std::span<const double> data, int levels,
                        std::size_t rows, std::size_t cols, std::string_view bank);
struct CoefficientDump {
  int levels = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string bank;
  std::vector<double> data;
};
CoefficientDump read_coefficients(std::istream& is);

}  // namespace spcs
