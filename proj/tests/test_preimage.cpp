#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vqf/error.hpp"
#include "vqf/preimage.hpp"
#include "vqf/sampling.hpp"

using namespace vqf;
using vqf::test::random_vector;

namespace {

double residual(const VQForm& f, std::span<const double> u, std::span<const double> v) {
  const Vector q = evaluate(f, u);
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += (q[i] - v[i]) * (q[i] - v[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("residual and Jacobian examples") {
  const ResidualJacobian rj = residual_jacobian(test::twist(), Vector{1, 1}, Vector{0, 0});
  CHECK(rj.r == Vector{0, 1});
  CHECK(rj.j(0, 0) == 2.0);
  CHECK(rj.j(0, 1) == -2.0);
  CHECK(rj.j(1, 0) == 1.0);
  CHECK(rj.j(1, 1) == 1.0);

  const ResidualJacobian z = residual_jacobian(test::trident(), Vector{0, 0, 0}, Vector{1, 2, 3});
  for (double x : z.j.data()) CHECK(x == 0.0);
  CHECK(z.r == Vector{-1, -2, -3});

  CHECK_THROWS_AS(residual_jacobian(test::twist(), Vector{1, 1}, Vector{0}), InputError);
}

TEST_CASE("Jacobian matches central finite differences") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const std::size_t m = 1 + trial % 4;
    const VQForm f = random_form(n, m, Ensemble::Gaussian, 900 + trial);
    const Vector u = random_vector(n, rng);
    const Vector v = random_vector(m, rng);
    const ResidualJacobian rj = residual_jacobian(f, u, v);
    const double h = 1e-6;
    for (std::size_t k = 0; k < n; ++k) {
      Vector up = u;
      Vector um = u;
      up[k] += h;
      um[k] -= h;
      const Vector rp = residual_jacobian(f, up, v).r;
      const Vector rm = residual_jacobian(f, um, v).r;
      for (std::size_t i = 0; i < m; ++i) {
        const double fd = (rp[i] - rm[i]) / (2.0 * h);
        CHECK(std::abs(fd - rj.j(i, k)) <= 1e-6 * std::max(1.0, std::abs(rj.j(i, k))));
      }
    }
  }
}

TEST_CASE("solve_preimage on reachable targets") {
  const SolveOptions opts;
  const double tol = opts.residual_tol;

  const PreimageResult tw = solve_preimage(test::twist(), Vector{0, 1});
  REQUIRE(tw.solution.has_value());
  CHECK(residual(test::twist(), *tw.solution, Vector{0, 1}) <= tol * 2.0);
  CHECK(tw.residual_norm <= tol * 2.0);

  const PreimageResult tr = solve_preimage(test::trident(), Vector{1, 1, 1});
  REQUIRE(tr.solution.has_value());
  CHECK(residual(test::trident(), *tr.solution, Vector{1, 1, 1}) <= tol * (1.0 + std::sqrt(3.0)));

  const PreimageResult zero = solve_preimage(test::trident(), Vector{0, 0, 0});
  REQUIRE(zero.solution.has_value());
  CHECK(*zero.solution == Vector{0, 0, 0});
  CHECK(zero.residual_norm == 0.0);

  CHECK_THROWS_AS(solve_preimage(test::twist(), Vector{1, 2, 3}), InputError);
}

TEST_CASE("trident target (1,1,-1) has no preimage and the solver stops at the infimum") {
  // If every residual component were below a = 1/sqrt(3) in magnitude then
  // xy > 0 and xz > 0, forcing yz > 0 and a third residual above a. So the
  // residual norm is at least a; a grid search confirms the bound is tight.
  const VQForm tri = test::trident();
  const double a = 1.0 / std::sqrt(3.0);
  const Vector v_hat{a, a, -a};

  double grid_min = 1e300;
  const int half = 80;
  const double box = 8.0;
  for (int i = -half; i <= half; ++i) {
    for (int j = -half; j <= half; ++j) {
      for (int k = -half; k <= half; ++k) {
        const double x = box * i / half;
        const double y = box * j / half;
        const double z = box * k / half;
        const double r1 = x * y - a;
        const double r2 = x * z - a;
        const double r3 = y * z + a;
        grid_min = std::min(grid_min, std::sqrt(r1 * r1 + r2 * r2 + r3 * r3));
      }
    }
  }
  CHECK(grid_min >= a);
  CHECK(grid_min <= a + 0.02);

  for (const Vector& v : {Vector{1, 1, -1}, v_hat}) {
    const PreimageResult r = solve_preimage(tri, v);
    CHECK_FALSE(r.solution.has_value());
    CHECK(r.starts_used == SolveOptions{}.restarts);
    CHECK(r.trace.size() == static_cast<std::size_t>(r.starts_used));
    // Residuals scale with |v| under the cone reduction.
    const double bound = a * norm(v);
    CHECK(r.residual_norm >= bound * (1.0 - 1e-12));
    CHECK(r.residual_norm <= bound * 1.05);
    CHECK(residual(tri, r.best, v) == doctest::Approx(r.residual_norm).epsilon(1e-12));
  }
}

TEST_CASE("every unit target of the twist map is reached") {
  SphereSequence targets(2, SphereCover::Full, 4);
  for (const Vector& v : targets.take(64)) {
    const PreimageResult r = solve_preimage(test::twist(), v);
    REQUIRE(r.solution.has_value());
    CHECK(verify_preimage(test::twist(), *r.solution, v, 2e-10));
  }
}

TEST_CASE("cone scaling: targets v and 9v both verify") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const VQForm f = random_form(4, 2, Ensemble::IndefinitePlanted, 60 + trial);
    const Vector v = random_vector(2, rng);
    Vector v9 = v;
    for (double& x : v9) x *= 9.0;
    const PreimageResult r1 = solve_preimage(f, v);
    const PreimageResult r9 = solve_preimage(f, v9);
    CHECK(r1.solution.has_value() == r9.solution.has_value());
    if (r1.solution) CHECK(verify_preimage(f, *r1.solution, v, 1e-10 * (1.0 + norm(v))));
    if (r9.solution) CHECK(verify_preimage(f, *r9.solution, v9, 1e-10 * (1.0 + norm(v9))));
  }
}

TEST_CASE("solve_preimage is deterministic") {
  const VQForm f = random_form(5, 3, Ensemble::Gaussian, 12);
  const Vector v{0.3, -1.2, 0.7};
  SolveOptions opts;
  opts.seed = 99;
  const PreimageResult a = solve_preimage(f, v, opts);
  const PreimageResult b = solve_preimage(f, v, opts);
  CHECK(a.solution == b.solution);
  CHECK(a.best == b.best);
  CHECK(a.trace == b.trace);
  CHECK(a.residual_norm == b.residual_norm);
}

TEST_CASE("verify_preimage") {
  const VQForm tw = test::twist();
  const Vector u{1, 1};
  CHECK(verify_preimage(tw, u, Vector{0, 1}, 1e-12));
  // Cone scaling: 2u maps to 4v.
  CHECK(verify_preimage(tw, Vector{2, 2}, Vector{0, 4}, 1e-12));
  // J at (1,1) is [[2,-2],[1,1]], nonsingular, so any 1e-2 step moves Q.
  CHECK_FALSE(verify_preimage(tw, Vector{1.01, 1.0}, Vector{0, 1}, 1e-8));
  CHECK_FALSE(verify_preimage(tw, Vector{1.0, 1.01}, Vector{0, 1}, 1e-8));
}

TEST_CASE("solver options are validated") {
  SolveOptions o;
  CHECK_NOTHROW(o.validate());
  o.residual_tol = 1e-3;
  CHECK_THROWS_AS(o.validate(), InputError);
  o = SolveOptions{};
  o.restarts = 0;
  CHECK_THROWS_AS(o.validate(), InputError);
  o = SolveOptions{};
  o.damping_init = -1.0;
  CHECK_THROWS_AS(solve_preimage(test::twist(), Vector{0, 1}, o), InputError);
}
