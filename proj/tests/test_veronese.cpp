#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "vqf/veronese.hpp"

using namespace vqf;
using vqf::test::max_abs_diff;
using vqf::test::random_vector;

namespace {

SymmetricMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a.set(i, j, normal(rng));
  return a;
}

}  // namespace

TEST_CASE("pi and cone membership") {
  CHECK(pi(Vector{1, 0, 0}) == SymmetricMatrix::diagonal(Vector{1, 0, 0}));
  CHECK(pi(Vector{1, 1}) == SymmetricMatrix{{1, 1}, {1, 1}});
  CHECK_FALSE(in_cone(SymmetricMatrix::identity(2)));

  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Vector x = random_vector(1 + t % 6, rng);
    const SymmetricMatrix p = pi(x);
    CHECK(p.trace() == doctest::Approx(dot(x, x)).epsilon(1e-13));
    CHECK(in_cone(p));
    CHECK_FALSE(in_cone(-p));
    const Vector ev = eigenvalues(p);
    if (ev.size() > 1) CHECK(std::abs(ev[ev.size() - 2]) <= 1e-12 * (1.0 + p.frobenius_norm()));
  }
}

TEST_CASE("induced linear map and its adjoint") {
  const VQForm tw = test::twist();
  CHECK(induced_linear_map(tw, pi(Vector{1, 1})) == Vector{0, 1});
  CHECK(induced_linear_map(tw, SymmetricMatrix(2)) == Vector{0, 0});
  const VQForm tri = test::trident();
  CHECK(induced_linear_map(tri, SymmetricMatrix::identity(3)) == Vector{0, 0, 0});
  CHECK(adjoint_embed(tri, Vector{0, 1, 0}) == tri[1]);

  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 4;
    const std::size_t m = 1 + t % 3;
    const VQForm f = random_form(n, m, "gaussian", 70 + t);
    const Vector x = random_vector(n, rng);
    CHECK(max_abs_diff(induced_linear_map(f, pi(x)), evaluate(f, x)) <= 1e-10 * (1.0 + dot(x, x)));
    CHECK(max_abs_diff(induced_linear_map(f, SymmetricMatrix::identity(n)),
                       [&] {
                         Vector tr;
                         for (const auto& a : f.matrices()) tr.push_back(a.trace());
                         return tr;
                       }()) <= 1e-12);
    const Vector lambda = random_vector(m, rng);
    const SymmetricMatrix s = random_symmetric(n, rng);
    const double lhs = frobenius(adjoint_embed(f, lambda), s);
    const double rhs = dot(lambda, induced_linear_map(f, s));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("embedding examples") {
  const EmbeddingData ax = build_embedding(test::axes());
  CHECK(ax.gram == SymmetricMatrix::identity(2));
  CHECK((ax.whitener - SymmetricMatrix::identity(2)).frobenius_norm() <= 1e-14);
  CHECK((ax.basis[0] - test::axes()[0]).frobenius_norm() <= 1e-14);
  CHECK((ax.basis[1] - test::axes()[1]).frobenius_norm() <= 1e-14);

  const EmbeddingData tw = build_embedding(test::twist());
  CHECK(tw.gram == SymmetricMatrix::diagonal(Vector{2.0, 0.5}));
  CHECK((tw.basis[0] - (1.0 / std::sqrt(2.0)) * test::twist()[0]).frobenius_norm() <= 1e-14);
  CHECK((tw.basis[1] - std::sqrt(2.0) * test::twist()[1]).frobenius_norm() <= 1e-14);

  const SymmetricMatrix a{{1.0, 2.0}, {2.0, -1.0}};
  try {
    build_embedding(VQForm({a, a}));
    FAIL("expected a singular Gram error");
  } catch (const SingularGramError& e) {
    const Vector& v = e.null_vector();
    CHECK(norm(v) == doctest::Approx(1.0));
    CHECK(std::abs(v[0] + v[1]) <= 1e-12);
  }
}

TEST_CASE("embedding basis is orthonormal and spans the same subspace") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 3;
    const std::size_t m = 1 + seed % 4;
    const VQForm f = random_form(n, m, "gaussian", 1500 + seed);
    const EmbeddingData e = build_embedding(f);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l)
        CHECK(std::abs(frobenius(e.basis[k], e.basis[l]) - (k == l ? 1.0 : 0.0)) <= 1e-10);
    // Each A_i is reproduced by its projection onto span{E_k}.
    for (const auto& a : f.matrices()) {
      const Projection p = project_onto_span(e, a);
      CHECK((p.projection - a).frobenius_norm() <= 1e-10 * (1.0 + a.frobenius_norm()));
    }
  }
}

TEST_CASE("projection onto the span is idempotent, self-adjoint and contracting") {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 2 + seed % 4;
    const std::size_t m = 1 + seed % 3;
    const EmbeddingData e = build_embedding(random_form(n, m, "gaussian", 1600 + seed));
    const SymmetricMatrix s = random_symmetric(n, rng);
    const SymmetricMatrix t = random_symmetric(n, rng);
    const Projection ps = project_onto_span(e, s);
    const Projection pt = project_onto_span(e, t);

    CHECK((project_onto_span(e, ps.projection).projection - ps.projection).frobenius_norm() <= 1e-10);
    CHECK(std::abs(frobenius(ps.projection, t) - frobenius(s, pt.projection)) <= 1e-10);
    CHECK(ps.projection.frobenius_norm() <= s.frobenius_norm() + 1e-12);

    // Element of the span.
    Vector c = random_vector(m, rng);
    SymmetricMatrix in(n);
    for (std::size_t k = 0; k < m; ++k) in += c[k] * e.basis[k];
    CHECK((project_onto_span(e, in).projection - in).frobenius_norm() <= 1e-10);

    // Orthogonal residual projects to zero.
    const SymmetricMatrix perp = s - ps.projection;
    CHECK(project_onto_span(e, perp).projection.frobenius_norm() <= 1e-10);

    // Central reduction identity: coords of pi(x) equal W Q(x).
    const Vector x = random_vector(n, rng);
    const Vector coords = project_onto_span(e, pi(x)).coords;
    CHECK(max_abs_diff(coords, e.whitener.multiply(evaluate(e.form, x))) <= 1e-10 * (1.0 + dot(x, x)));
  }
}

TEST_CASE("identity and traceless split") {
  const TraceSplit id = identity_traceless_split(SymmetricMatrix::identity(3));
  CHECK(id.trace_part == SymmetricMatrix::identity(3));
  CHECK(id.traceless_part == SymmetricMatrix(3));

  std::mt19937_64 rng(4);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + t % 6;
    const Vector x = random_vector(n, rng);
    const TraceSplit px = identity_traceless_split(pi(x));
    CHECK((px.trace_part - (dot(x, x) / n) * SymmetricMatrix::identity(n)).frobenius_norm() <= 1e-12);

    const SymmetricMatrix s = random_symmetric(n, rng);
    const TraceSplit sp = identity_traceless_split(s);
    // Off-diagonals are exact; diagonals round once in d - c and once in c + (d - c).
    CHECK((sp.trace_part + sp.traceless_part - s).frobenius_norm() <= 1e-15 * (1.0 + s.frobenius_norm()));
    CHECK(std::abs(sp.traceless_part.trace()) <= 1e-12);
    CHECK(std::abs(frobenius(sp.trace_part, sp.traceless_part)) <= 1e-12);
  }
}

TEST_CASE("cone angle with the identity is arccos(1/sqrt(n))") {
  CHECK(cone_angle_with_identity(Vector{-2.5}) == doctest::Approx(0.0));
  CHECK(cone_angle_with_identity(Vector{1, 0}) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK_THROWS_AS(cone_angle_with_identity(Vector{0, 0}), InputError);

  std::mt19937_64 rng(6);
  for (std::size_t n = 2; n <= 8; ++n) {
    const double expected = std::acos(1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> angles;
    for (int k = 0; k < 100; ++k) {
      angles.push_back(cone_angle_with_identity(random_vector(n, rng)));
      CHECK(std::abs(angles.back() - expected) <= 1e-12);
    }
    double mean = 0.0;
    for (double a : angles) mean += a;
    mean /= angles.size();
    double var = 0.0;
    for (double a : angles) var += (a - mean) * (a - mean);
    var /= angles.size();
    CHECK(var <= 1e-20);
    if (n == 4) CHECK(std::cos(mean) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("reduction check on the named forms") {
  for (const VQForm& f : {test::twist(), test::trident(), test::axes(), test::hyperbola()}) {
    const ReductionReport r = reduction_check(f, 1000);
    CHECK(r.passed);
    CHECK(r.samples == 1000);
    CHECK(r.max_deviation <= 1e-10);
  }
  const SymmetricMatrix a{{1.0, 0.0}, {0.0, -1.0}};
  CHECK_THROWS_AS(reduction_check(VQForm({a, a}), 10), SingularGramError);
}
