#pragma once

// Deterministic point streams on the unit sphere S^{d-1}.
//
// Streams are prefix-stable: the first k points never depend on how many
// points are drawn later, so growing a sample budget only adds points.
// Order: coordinate axes, sign patterns (1, +-1, ..., +-1)/sqrt(d), pair
// diagonals (e_i +- e_j)/sqrt(2), Halton points (d <= 6), then seeded
// Gaussian draws.

#include <cstdint>
#include <random>

#include "vqf/symcore.hpp"

namespace vqf {

enum class SphereCover {
  /// One representative per antipodal pair (enough for even maps like Q).
  Half,
  /// Structured points are emitted together with their negation.
  Full,
};

class SphereSequence {
 public:
  SphereSequence(std::size_t dim, SphereCover cover, std::uint64_t seed);

  Vector next();
  std::vector<Vector> take(std::size_t count);

 private:
  void build_structured();

  std::size_t dim_;
  SphereCover cover_;
  std::vector<Vector> structured_;
  std::size_t cursor_ = 0;
  std::uint64_t halton_index_ = 1;
  std::uint64_t halton_emitted_ = 0;
  std::mt19937_64 rng_;
};

/// Uniform point on S^{d-1} from a Gaussian draw.
Vector random_unit_vector(std::size_t dim, std::mt19937_64& rng);

}  // namespace vqf
