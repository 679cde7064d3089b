#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace pmtherm {

/// Counter-based random numbers.
///
/// A draw is a pure function of (root seed, stream, draw, lane), so results
/// do not depend on which worker evaluates them or in what order.
namespace rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for one (stream, draw, lane) cell under `root`.
constexpr std::uint64_t derive(std::uint64_t root, std::uint64_t stream, std::uint64_t draw = 0,
                               std::uint64_t lane = 0) noexcept {
  std::uint64_t h = splitmix64(root);
  h = splitmix64(h ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(draw + 0x85157af5ULL));
  return splitmix64(h ^ splitmix64(lane + 0x2545f4914f6cdd1dULL));
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform(std::uint64_t seed) noexcept {
  return static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53;
}

/// Inverse-CDF selection over weights `p` for a uniform u in [0, 1).
///
/// Entries at or below `floor` are never chosen. A target landing exactly
/// on a CDF boundary resolves to the lower index. Returns p.size() when no
/// entry exceeds `floor`.
inline std::size_t pick(std::span<const double> p, double u, double floor = 0.0) noexcept {
  double total = 0.0;
  for (double v : p)
    if (v > floor) total += v;
  if (!(total > 0.0)) return p.size();
  const double target = u * total;
  std::size_t chosen = p.size();
  double cum = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (!(p[y] > floor)) continue;
    cum += p[y];
    chosen = y;
    if (target <= cum) break;
  }
  return chosen;
}

}  // namespace rng
}  // namespace pmtherm
