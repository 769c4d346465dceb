#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "vqf/simplex.hpp"

using namespace vqf;

namespace {

DenseMatrix matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
  DenseMatrix a(rows, cols);
  std::size_t k = 0;
  for (double v : values) {
    a(k / cols, k % cols) = v;
    ++k;
  }
  return a;
}

// Solves the square system by Gaussian elimination; false if singular.
bool solve_square(std::vector<std::vector<double>> m, Vector b, Vector& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    if (std::abs(m[p][c]) < 1e-10) return false;
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return true;
}

// Best basic feasible solution by enumerating every basis (full row rank A).
double vertex_enumeration(const DenseMatrix& a, const Vector& b, const Vector& c, bool& feasible) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<bool> pick(cols, false);
  std::fill(pick.begin(), pick.begin() + rows, true);
  double best = std::numeric_limits<double>::infinity();
  feasible = false;
  do {
    std::vector<std::size_t> basis;
    for (std::size_t j = 0; j < cols; ++j)
      if (pick[j]) basis.push_back(j);
    std::vector<std::vector<double>> m(rows, std::vector<double>(rows));
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t k = 0; k < rows; ++k) m[i][k] = a(i, basis[k]);
    Vector xb;
    if (!solve_square(m, b, xb)) continue;
    if (*std::min_element(xb.begin(), xb.end()) < -1e-9) continue;
    feasible = true;
    double obj = 0.0;
    for (std::size_t k = 0; k < rows; ++k) obj += c[basis[k]] * xb[k];
    best = std::min(best, obj);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST_CASE("simplex solves a small bounded LP") {
  // min -x1 - x2  s.t.  x1 + 2 x2 + s1 = 4,  3 x1 + x2 + s2 = 6
  const DenseMatrix a = matrix(2, 4, {1, 2, 1, 0, 3, 1, 0, 1});
  const Vector b{4, 6};
  const Vector c{-1, -1, 0, 0};
  const LpResult r = solve_standard_lp(a, b, c);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-2.8).epsilon(1e-12));
  CHECK(r.x[0] == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(r.x[1] == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("simplex detects infeasible and unbounded problems") {
  // x1 + x2 = -1 with x >= 0
  CHECK(solve_standard_lp(matrix(1, 2, {1, 1}), Vector{-1}, Vector{0, 0}).status ==
        LpStatus::Infeasible);
  // min -x1  s.t.  x1 - x2 = 0
  CHECK(solve_standard_lp(matrix(1, 2, {1, -1}), Vector{0}, Vector{-1, 0}).status ==
        LpStatus::Unbounded);
}

TEST_CASE("simplex tolerates redundant equality rows") {
  const DenseMatrix a = matrix(3, 3, {1, 1, 1, 2, 2, 2, 1, 0, -1});
  const LpResult r = solve_standard_lp(a, Vector{1, 2, 0}, Vector{0, 1, 0});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(0.0));
  CHECK(r.x[0] == doctest::Approx(0.5));
  CHECK(r.x[2] == doctest::Approx(0.5));
  CHECK(to_string(LpStatus::PivotLimit) == "pivot-limit");
}

TEST_CASE("simplex matches vertex enumeration on random bounded LPs") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + trial % 3;
    const std::size_t cols = rows + 2 + trial % 4;
    DenseMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = normal(rng);
    // A bounding row sum x = 1 keeps every instance bounded.
    for (std::size_t j = 0; j < cols; ++j) a(0, j) = 1.0;
    Vector x0(cols);
    for (double& v : x0) v = unit(rng);
    double s = 0.0;
    for (double v : x0) s += v;
    for (double& v : x0) v /= s;
    Vector b(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) b[i] += a(i, j) * x0[j];
    Vector c(cols);
    for (double& v : c) v = normal(rng);

    bool feasible = false;
    const double expected = vertex_enumeration(a, b, c, feasible);
    REQUIRE(feasible);
    const LpResult r = solve_standard_lp(a, b, c);
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(expected).epsilon(1e-9));
    for (std::size_t i = 0; i < rows; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < cols; ++j) lhs += a(i, j) * r.x[j];
      CHECK(std::abs(lhs - b[i]) <= 1e-9);
    }
    for (double v : r.x) CHECK(v >= -1e-12);
  }
}
