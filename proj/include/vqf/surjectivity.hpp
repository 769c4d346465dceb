#pragma once

// Surjectivity of Q: R^n -> R^m.
//
// Routes, in precedence order:
//   1. index bound: ind(lambda.Q) >= m for every lambda != 0 implies
//      surjective. Exact for m = 1 (lambda = +-1) and m = 2 (arc sweep over
//      the circle); sampled, hence evidence only, for m >= 3.
//   2. psd direction: some lambda != 0 with lambda.Q >= 0 confines the image
//      to a half-space, so Q is not surjective.
//   3. probing: preimage solves on unit targets (cone scaling covers every
//      ray). All solved is evidence for, one unsolved target evidence against.
// For n = m = 2, surjective <=> indefinite, so classification decides it.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vqf/classify.hpp"
#include "vqf/preimage.hpp"
#include "vqf/symcore.hpp"

namespace vqf {

struct IndexProfile {
  struct Entry {
    Vector lambda;
    Inertia inertia;
  };
  std::vector<Entry> entries;
  int min_index = 0;
  bool exact = false;
  /// Angles (radians, in [0, 2pi)) where det A(theta) = 0; m = 2 sweep only.
  std::vector<double> singular_angles;
  std::vector<std::string> diagnostics;
};

struct IndexBound {
  int min_index = 0;
  bool exact = false;
};

struct FailedTarget {
  Vector target;         // unit vector in R^m
  double best_residual = 0.0;
  int starts = 0;
};

using SurjectivityCertificate = std::variant<IndexBound, PsdDirection, InteriorWitness, FailedTarget>;

enum class SurjectivityKind {
  SurjectiveCertified,
  SurjectiveEvidence,
  NotSurjectiveCertified,
  NotSurjectiveEvidence,
  Indeterminate,
};
std::string to_string(SurjectivityKind k);

struct SurjectivityVerdict {
  SurjectivityKind verdict = SurjectivityKind::Indeterminate;
  std::optional<SurjectivityCertificate> certificate;
  std::optional<IndexProfile> profile;
  int targets_solved = 0;
  std::vector<std::string> diagnostics;
};

struct SurjectivityOptions {
  int num_targets = 32;
  /// Sampled lambda directions for the index profile when m >= 3.
  int index_directions = 512;
  SolveOptions solve;
  AscentOptions ascent;
  /// psd band; 0 means default_definite_tol.
  double tol = 0.0;
  std::uint64_t seed = 1;
};

/// Inertia of A(lambda) and A(-lambda) for num_directions sphere directions
/// (prefix-stable, so more directions only add entries).
IndexProfile index_profile_sampled(const VQForm& form, int num_directions, std::uint64_t seed = 1);

/// Exact sweep over lambda(theta) = (cos theta, sin theta). Falls back to a
/// sampled profile (exact = false) when det(A_1 + t A_2) vanishes identically.
IndexProfile index_profile_exact_m2(const VQForm& form);

/// Exact profile for m = 1 (lambda = +-1) or m = 2 (arc sweep).
IndexProfile index_profile_exact(const VQForm& form);

SurjectivityVerdict agrachev_sarychev_test(const VQForm& form, const IndexProfile& profile);

std::optional<SurjectivityVerdict> nonsurjectivity_from_semidefiniteness(
    const VQForm& form, const AscentOptions& ascent = {}, double tol = 0.0);

SurjectivityVerdict surjectivity_probe(const VQForm& form, const SurjectivityOptions& opts = {});

/// n = m = 2 only: surjective iff indefinite.
SurjectivityVerdict dim2_decide(const VQForm& form, const ClassifyOptions& opts = {});

struct KernelProbeResult {
  std::optional<Vector> u;  // unit vector with |Q(u)| <= tol
  double best_residual = 0.0;
  double tol = 0.0;
  int starts = 0;
};

/// Searches the unit sphere for a nontrivial zero of Q.
KernelProbeResult kernel_probe(const VQForm& form, const SolveOptions& opts = {});

}  // namespace vqf
