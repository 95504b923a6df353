#include <random>
#include <stdexcept>

#include "seldiac/error.hpp"
#include "seldiac/evalkit.hpp"

namespace seldiac {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double paired_bootstrap(const std::vector<double>& a, const std::vector<double>& b,
                        std::size_t resamples, std::uint64_t seed) {
  if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
  if (a.size() < 2) throw std::invalid_argument("paired bootstrap needs at least 2 items");
  if (resamples == 0) throw std::invalid_argument("resamples must be positive");
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  double observed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
    observed += diff[i];
  }
  if (observed == 0) return 1.0;
  const double sign = observed > 0 ? 1.0 : -1.0;

  std::size_t against = 0;
  for (std::size_t r = 0; r < resamples; ++r) {
    // Each resample has its own stream so resamples can run in any order.
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(r)));
    double s = 0;
    for (std::size_t k = 0; k < n; ++k) s += diff[rng() % n];
    if (s * sign <= 0) ++against;
  }
  const double p = 2.0 * static_cast<double>(against) / static_cast<double>(resamples);
  return p > 1.0 ? 1.0 : p;
}

}  // namespace seldiac
