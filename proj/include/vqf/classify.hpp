#pragma once

// Definiteness / indefiniteness of a vector-valued quadratic form.
//
// B is definite when some covector lambda makes lambda.Q positive-definite,
// and indefinite when every nonzero lambda.Q takes both signs. The two
// notions are not complementary. Each positive answer here comes with a
// certificate that verify_certificate re-checks from scratch:
//
//   DefiniteDirection  lambda with lambda_min(A(lambda)) = margin > 0
//   InteriorWitness    points u_j and weights w_j > 0 with sum w_j Q(u_j) = 0
//                      and {Q(u_j)} spanning R^m, so 0 is interior to
//                      conv(image Q)
//   PsdDirection       lambda != 0 with A(lambda) psd within tolerance
//
// Searches are sound but incomplete: failing to find a certificate is
// reported as Indeterminate, never guessed.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vqf/symcore.hpp"

namespace vqf {

struct DefiniteDirection {
  Vector lambda;   // unit length
  double margin;   // lambda_min(A(lambda)) > 0
};

struct PsdDirection {
  Vector lambda;   // unit length
  double min_eig;  // >= -tol
};

struct InteriorWitness {
  std::vector<Vector> points;  // u_j in R^n
  Vector weights;              // w_j > 0, sum 1
};

using Certificate = std::variant<DefiniteDirection, PsdDirection, InteriorWitness>;

enum class Verdict { Definite, Indefinite, SemidefiniteBoundary, Indeterminate };
std::string to_string(Verdict v);

enum class Sampler { SphereGrid, Random };

struct AscentOptions {
  int iterations = 500;
  int restarts = 0;          // 0 means max(8, 2m)
  double step_scale = 0.5;   // angular step c/sqrt(k)
  bool polish = true;        // smoothed-eigenvalue refinement of the winner
  std::uint64_t seed = 1;
};

struct WitnessOptions {
  Sampler sampler = Sampler::SphereGrid;
  int max_samples = 512;
  double weight_tol = 1e-6;
  double rank_tol = 1e-8;
  std::uint64_t seed = 1;
};

struct ClassifyOptions {
  AscentOptions ascent;
  WitnessOptions witness;
  /// 0 means 1e-7 * (1 + max_i ||A_i||_F).
  double definite_tol = 0.0;
};

struct EigenDirection {
  Vector lambda;
  double value = 0.0;  // lambda_min(contract(F, lambda))
  int iterations = 0;
  int restarts = 0;
};

struct BudgetReport {
  int ascent_iterations = 0;
  int restarts = 0;
  int samples = 0;
  int lp_pivots = 0;
  int grid_nodes = 0;
};

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<Certificate> certificate;
  /// Best lambda_min(A(lambda)) over unit lambda found by the ascent.
  double best_min_eig = 0.0;
  double tol = 0.0;
  BudgetReport budget;
  std::vector<std::string> diagnostics;
};

double default_definite_tol(const VQForm& form);

/// Multi-start projected supergradient ascent of lambda -> lambda_min(A(lambda))
/// on the unit sphere. The returned value is attained at the returned lambda;
/// it is a lower bound on the global maximum.
EigenDirection max_min_eigen_direction(const VQForm& form, const AscentOptions& opts = {});

std::optional<DefiniteDirection> definite_certificate(const VQForm& form,
                                                      const ClassifyOptions& opts = {});

/// Returns no witness when none was found. Throws NumericError when the LP
/// solver itself fails.
std::optional<InteriorWitness> indefinite_certificate(const VQForm& form,
                                                      const WitnessOptions& opts = {},
                                                      BudgetReport* budget = nullptr);

/// Independent re-check of a certificate. `tol` is the psd band for
/// PsdDirection (0 means default_definite_tol). Throws InputError when the
/// certificate's dimensions do not match the form.
bool verify_certificate(const VQForm& form, const Certificate& cert, double tol = 0.0);

Classification classify(const VQForm& form, const ClassifyOptions& opts = {});

/// Exhaustive lambda-sphere grid (m <= 3) with local refinement around the
/// best nodes. Oracle for tests; too slow for anything else.
Classification brute_force_classify(const VQForm& form, double resolution_deg = 1.0);

}  // namespace vqf
