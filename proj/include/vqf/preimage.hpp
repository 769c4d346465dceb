#pragma once

// Numerical preimages of Q(u) = v.
//
// Targets are normalised first: Q(t u) = t^2 Q(u), so a solution u of
// Q(u) = v/|v| rescales to sqrt(|v|) u. Each start runs a Levenberg-style
// damped Gauss-Newton iteration. Failure to converge is evidence, not
// proof, that v is outside the image.

#include <cstdint>
#include <functional>
#include <optional>

#include "vqf/symcore.hpp"

namespace vqf {

struct SolveOptions {
  int restarts = 32;
  int max_iters = 200;
  /// Residual tolerance on the original target is residual_tol * (1 + |v|).
  double residual_tol = 1e-10;
  double damping_init = 1e-3;
  std::uint64_t seed = 1;

  /// Throws InputError unless every field is positive and residual_tol < 1e-4.
  void validate() const;
};

struct PreimageResult {
  std::optional<Vector> solution;
  double residual_norm = 0.0;  // |Q(u) - v| for the solution or best iterate
  Vector best;                 // best iterate found (equals *solution on success)
  int starts_used = 0;
  std::vector<double> trace;   // final residual of each start, in order
};

struct ResidualJacobian {
  Vector r;       // r_i = u^t A_i u - v_i
  DenseMatrix j;  // row i = 2 A_i u
};

ResidualJacobian residual_jacobian(const VQForm& form, std::span<const double> u,
                                   std::span<const double> v);

PreimageResult solve_preimage(const VQForm& form, std::span<const double> v,
                              const SolveOptions& opts = {});

bool verify_preimage(const VQForm& form, std::span<const double> u, std::span<const double> v,
                     double tol);

/// Generic damped Gauss-Newton used by solve_preimage and kernel_probe.
/// `residual` fills r (size rows) and J (rows x u.size()) at u.
using ResidualFn = std::function<void(std::span<const double> u, Vector& r, DenseMatrix& j)>;

struct LmRun {
  Vector u;
  double residual_norm;
  int iterations;
};

LmRun damped_gauss_newton(const ResidualFn& residual, Vector u0, double tol, int max_iters,
                          double damping_init);

}  // namespace vqf
