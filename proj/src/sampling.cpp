#include "vqf/sampling.hpp"

#include <array>
#include <cmath>

#include "vqf/error.hpp"

namespace vqf {

namespace {

constexpr std::array<unsigned, 6> kHaltonBases = {2, 3, 5, 7, 11, 13};
constexpr std::size_t kMaxPatternDim = 10;
constexpr std::uint64_t kMaxHaltonPoints = 4096;

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

Vector random_unit_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  double len = 0.0;
  while (len < 1e-12) {
    for (double& x : v) x = normal(rng);
    len = norm(v);
  }
  for (double& x : v) x /= len;
  return v;
}

SphereSequence::SphereSequence(std::size_t dim, SphereCover cover, std::uint64_t seed)
    : dim_(dim), cover_(cover), rng_(seed) {
  if (dim == 0) throw InputError("SphereSequence: dimension must be positive");
  build_structured();
}

void SphereSequence::build_structured() {
  const bool full = cover_ == SphereCover::Full;
  auto push = [&](Vector v) {
    structured_.push_back(v);
    if (full) {
      for (double& x : v) x = -x;
      structured_.push_back(std::move(v));
    }
  };

  for (std::size_t i = 0; i < dim_; ++i) {
    Vector e(dim_, 0.0);
    e[i] = 1.0;
    push(std::move(e));
  }
  if (dim_ == 1) return;

  if (dim_ <= kMaxPatternDim) {
    const double s = 1.0 / std::sqrt(static_cast<double>(dim_));
    // Binary counting with '+' first; Half keeps the first coordinate positive.
    const std::size_t free_bits = full ? dim_ : dim_ - 1;
    for (std::size_t mask = 0; mask < (std::size_t{1} << free_bits); ++mask) {
      Vector v(dim_, s);
      for (std::size_t b = 0; b < free_bits; ++b) {
        const std::size_t coord = full ? b : b + 1;
        if (mask & (std::size_t{1} << (free_bits - 1 - b))) v[coord] = -s;
      }
      structured_.push_back(std::move(v));
    }
  }

  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      Vector plus(dim_, 0.0);
      plus[i] = h;
      plus[j] = h;
      Vector minus(dim_, 0.0);
      minus[i] = h;
      minus[j] = -h;
      push(std::move(plus));
      push(std::move(minus));
    }
  }
}

Vector SphereSequence::next() {
  if (cursor_ < structured_.size()) return structured_[cursor_++];

  if (dim_ <= kHaltonBases.size() && halton_emitted_ < kMaxHaltonPoints) {
    // Halton points in [-1,1]^d, rejected to the unit ball, projected radially.
    for (int guard = 0; guard < 100000; ++guard) {
      Vector p(dim_);
      for (std::size_t k = 0; k < dim_; ++k) {
        p[k] = 2.0 * radical_inverse(halton_index_, kHaltonBases[k]) - 1.0;
      }
      ++halton_index_;
      const double len = norm(p);
      if (len > 1e-6 && len <= 1.0) {
        for (double& x : p) x /= len;
        ++halton_emitted_;
        return p;
      }
    }
    halton_emitted_ = kMaxHaltonPoints;
  }
  return random_unit_vector(dim_, rng_);
}

std::vector<Vector> SphereSequence::take(std::size_t count) {
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(next());
  return out;
}

}  // namespace vqf
