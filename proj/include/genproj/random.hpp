#pragma once

#include <cstdint>
#include <random>

#include "genproj/matrix.hpp"
#include "genproj/scalar.hpp"

namespace genproj {

using Rng = std::mt19937_64;

/// Generator for sample `index` of the stream identified by `seed`.
/// Samples drawn this way do not depend on evaluation order.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index),
                    std::uint32_t(index >> 32), 0x9e3779b9u};
  return Rng(seq);
}

/// Real and imaginary parts uniform in [-radius, radius].
inline CVec random_point(std::size_t n, double radius, Rng& rng) {
  std::uniform_real_distribution<double> dist(-radius, radius);
  CVec u(n);
  for (auto& x : u) {
    double re = dist(rng);
    double im = dist(rng);
    x = cplx(re, im);
  }
  return u;
}

/// Integers uniform in [-bound, bound].
inline QVec random_rational_point(std::size_t n, std::int64_t bound, Rng& rng) {
  std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
  QVec u;
  u.reserve(n);
  for (std::size_t k = 0; k < n; ++k) u.emplace_back(static_cast<long long>(dist(rng)));
  return u;
}

/// Unit-norm complex direction.
inline CVec random_unit_vector(std::size_t n, Rng& rng) {
  CVec u;
  do {
    u = random_point(n, 1.0, rng);
  } while (norm2(u) < 1e-3);
  double s = norm2(u);
  for (auto& x : u) x /= s;
  return u;
}

}  // namespace genproj
