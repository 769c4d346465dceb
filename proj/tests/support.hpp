#pragma once

#include <cmath>
#include <random>

#include "vqf/symcore.hpp"

namespace vqf::test {

// (x^2 - y^2, xy)
inline VQForm twist() {
  return VQForm({SymmetricMatrix{{1.0, 0.0}, {0.0, -1.0}}, SymmetricMatrix{{0.0, 0.5}, {0.5, 0.0}}});
}

// (xy, xz, yz)
inline VQForm trident() {
  return VQForm({SymmetricMatrix{{0.0, 0.5, 0.0}, {0.5, 0.0, 0.0}, {0.0, 0.0, 0.0}},
                 SymmetricMatrix{{0.0, 0.0, 0.5}, {0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}},
                 SymmetricMatrix{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.5}, {0.0, 0.5, 0.0}}});
}

// (x^2, y^2)
inline VQForm axes() {
  return VQForm({SymmetricMatrix{{1.0, 0.0}, {0.0, 0.0}}, SymmetricMatrix{{0.0, 0.0}, {0.0, 1.0}}});
}

// x^2 - y^2
inline VQForm hyperbola() { return VQForm({SymmetricMatrix{{1.0, 0.0}, {0.0, -1.0}}}); }

inline Vector random_vector(std::size_t n, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  Vector v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  return dot(a, b) / (norm(a) * norm(b));
}

}  // namespace vqf::test
