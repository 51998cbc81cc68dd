#include "spcs/srm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spcs/grid.hpp"
#include "spcs/op_count.hpp"

namespace spcs {

std::uint64_t SplitMix64::below(std::uint64_t bound) noexcept {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % bound;
}

double SplitMix64::normal() noexcept {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::acos(-1.0) * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  SplitMix64 g(master ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return g.next();
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

SrmConfig SrmConfig::make(std::size_t n, std::size_t m, std::uint64_t seed, bool keep_dc) {
  if (!is_power_of_two(n)) throw DimensionError("srm: n=" + std::to_string(n) + " is not a power of two");
  if (m == 0 || m > n) throw DimensionError("srm: m=" + std::to_string(m) + " not in [1, n]");
  SrmConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.seed = seed;
  cfg.keep_dc = keep_dc;

  const auto shuffle = [n](SplitMix64& rng) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
    return p;
  };
  SplitMix64 perm_rng(derive_seed(seed, 0));
  cfg.permutation = shuffle(perm_rng);
  SplitMix64 row_rng(derive_seed(seed, 1));
  auto rows = shuffle(row_rng);
  if (keep_dc) {
    // Swap row 0 into the kept prefix, displacing its last entry.
    const auto dc = std::find(rows.begin(), rows.end(), std::size_t{0});
    if (static_cast<std::size_t>(dc - rows.begin()) >= m) std::iter_swap(dc, rows.begin() + (m - 1));
  }
  rows.resize(m);
  std::sort(rows.begin(), rows.end());
  cfg.row_select = std::move(rows);
  return cfg;
}

void fwht(std::span<double> v) {
  const std::size_t n = v.size();
  if (!is_power_of_two(n)) throw DimensionError("fwht: length " + std::to_string(n) + " is not a power of two");
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
    SPCS_COUNT(n);
  }
}

void srm_forward(const SrmConfig& cfg, std::span<const double> c, std::span<double> y,
                 std::span<double> work) {
  if (c.size() != cfg.n)
    throw DimensionError("srm_forward: input length " + std::to_string(c.size()) + " != n=" + std::to_string(cfg.n));
  if (y.size() != cfg.m) throw DimensionError("srm_forward: output length != m");
  if (work.size() < cfg.n) throw DimensionError("srm_forward: work buffer too small");
  auto w = work.first(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) w[i] = c[cfg.permutation[i]];
  fwht(w);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n));
  for (std::size_t k = 0; k < cfg.m; ++k) y[k] = w[cfg.row_select[k]] * scale;
}

void srm_adjoint(const SrmConfig& cfg, std::span<const double> y, std::span<double> c) {
  if (y.size() != cfg.m)
    throw DimensionError("srm_adjoint: input length " + std::to_string(y.size()) + " != m=" + std::to_string(cfg.m));
  if (c.size() != cfg.n) throw DimensionError("srm_adjoint: output length != n");
  std::vector<double> w(cfg.n, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.n));
  for (std::size_t k = 0; k < cfg.m; ++k) w[cfg.row_select[k]] = y[k] * scale;
  fwht(w);
  for (std::size_t i = 0; i < cfg.n; ++i) c[cfg.permutation[i]] = w[i];
}

std::vector<double> srm_forward(const SrmConfig& cfg, std::span<const double> c) {
  std::vector<double> y(cfg.m), work(cfg.n);
  srm_forward(cfg, c, y, work);
  return y;
}

std::vector<double> srm_adjoint(const SrmConfig& cfg, std::span<const double> y) {
  std::vector<double> c(cfg.n);
  srm_adjoint(cfg, y, c);
  return c;
}

}  // namespace spcs
