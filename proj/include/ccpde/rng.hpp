// Seeded randomness helpers; identical seeds give identical draws.
#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace ccpde {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Deterministic per-task seed derivation for independent sub-tasks.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t task) {
  std::uint64_t x = base ^ (0x9e3779b97f4a7c15ULL * (task + 1));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

inline Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace ccpde
