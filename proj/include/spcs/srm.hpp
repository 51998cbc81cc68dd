#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace spcs {

/// SplitMix64 (Steele, Lea, Flood 2014). Fixed constants, so streams are
/// identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Standard normal via Box-Muller (one draw per call, cosine branch).
  double normal() noexcept;

 private:
  std::uint64_t state_;
};

/// Mixes a master seed with a stream index into an independent seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Structurally random matrix S = D F P (orthonormal Walsh-Hadamard F).
struct SrmConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  bool keep_dc = false;
  std::vector<std::size_t> permutation;  // (P c)[i] = c[permutation[i]]
  std::vector<std::size_t> row_select;   // strictly increasing, size m

  /// Deterministic construction: Fisher-Yates permutation from the seed's
  /// first stream, row selection from a second shuffle (first m, sorted).
  /// With keep_dc the all-ones row 0 replaces the last drawn row when the
  /// draw missed it; a permutation-only SRM otherwise cannot see the image mean.
  static SrmConfig make(std::size_t n, std::size_t m, std::uint64_t seed, bool keep_dc = false);
};

bool is_power_of_two(std::size_t n) noexcept;

/// Unnormalized in-place Walsh-Hadamard butterfly (natural ordering).
/// Applying it twice multiplies by n.
void fwht(std::span<double> v);

/// y = D F P c, F scaled by 1/sqrt(n). `work` must hold n entries.
void srm_forward(const SrmConfig& cfg, std::span<const double> c, std::span<double> y,
                 std::span<double> work);
/// c = P^T F^T D^T y; exact transpose of srm_forward.
void srm_adjoint(const SrmConfig& cfg, std::span<const double> y, std::span<double> c);

std::vector<double> srm_forward(const SrmConfig& cfg, std::span<const double> c);
std::vector<double> srm_adjoint(const SrmConfig& cfg, std::span<const double> y);

}  // namespace spcs
