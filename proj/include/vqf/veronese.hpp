#pragma once

// The image of Q as a projection of the rank-one cone.
//
// pi(x) = x x^t maps R^n onto K_n, the psd matrices of rank <= 1. The linear
// map S -> (tr(A_i S))_i composed with pi is Q, and its adjoint
// lambda -> sum lambda_i A_i embeds R^m into Sym_n(R). Whitening by G^{-1/2}
// (G the Gram matrix of the A_i) makes that embedding isometric onto
// L = span{A_i}; the coordinates of the orthogonal projection of pi(x) onto L
// are then W Q(x).

#include <cstdint>
#include <string>

#include "vqf/error.hpp"
#include "vqf/symcore.hpp"

namespace vqf {

/// Thrown by build_embedding when the A_i are linearly dependent.
class SingularGramError : public InputError {
 public:
  SingularGramError(const std::string& what, Vector null_vector)
      : InputError(what), null_vector_(std::move(null_vector)) {}
  /// Unit lambda with sum lambda_i A_i ~ 0.
  const Vector& null_vector() const { return null_vector_; }

 private:
  Vector null_vector_;
};

struct EmbeddingData {
  VQForm form;
  SymmetricMatrix gram;                // G_ij = tr(A_i A_j)
  SymmetricMatrix whitener;            // W = G^{-1/2}
  std::vector<SymmetricMatrix> basis;  // E_k = sum_i W_ki A_i, Frobenius-orthonormal
};

SymmetricMatrix pi(std::span<const double> x);

/// Symmetric, psd and rank <= 1, judged by the spectrum with tolerance tol.
bool in_cone(const SymmetricMatrix& s, double tol = 1e-9);

/// S -> (tr(A_i S))_i
Vector induced_linear_map(const VQForm& form, const SymmetricMatrix& s);

/// lambda -> sum_i lambda_i A_i
SymmetricMatrix adjoint_embed(const VQForm& form, std::span<const double> lambda);

/// Throws SingularGramError if G has an eigenvalue below 1e-12 * max(1, |G|).
EmbeddingData build_embedding(const VQForm& form);

struct Projection {
  SymmetricMatrix projection;
  Vector coords;  // coords_k = tr(E_k S)
};

Projection project_onto_span(const EmbeddingData& e, const SymmetricMatrix& s);

struct TraceSplit {
  SymmetricMatrix trace_part;      // (tr S / n) I
  SymmetricMatrix traceless_part;  // S - trace_part
};

TraceSplit identity_traceless_split(const SymmetricMatrix& s);

/// Angle between x x^t and the identity, in radians. Equals arccos(1/sqrt(n))
/// for every x != 0. Throws InputError for x = 0.
double cone_angle_with_identity(std::span<const double> x);

struct ReductionReport {
  bool passed = false;
  int samples = 0;
  double max_deviation = 0.0;
  Vector worst_sample;
  double tolerance = 1e-9;
};

/// Checks coords(project(pi(x))) == W Q(x) on num_samples unit vectors.
ReductionReport reduction_check(const VQForm& form, int num_samples, std::uint64_t seed = 1);

}  // namespace vqf
