#include "vqf/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "vqf/error.hpp"

namespace vqf {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::PivotLimit: return "pivot-limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-12;

// Tableau rows 0..rows-1 are constraints, row `rows` is the objective
// (reduced costs, with -objective in the last column).
struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;  // variable columns, excluding rhs
  std::vector<double> t;
  std::vector<std::size_t> basis;

  double& at(std::size_t r, std::size_t c) { return t[r * (cols + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t[r * (cols + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols); }

  void pivot(std::size_t pr, std::size_t pc) {
    const double p = at(pr, pc);
    for (std::size_t c = 0; c <= cols; ++c) at(pr, c) /= p;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basis[pr] = pc;
  }

  // Bland's rule over columns [0, limit).
  LpStatus run(std::size_t limit, int& pivots, int max_pivots) {
    while (true) {
      std::size_t enter = limit;
      for (std::size_t c = 0; c < limit; ++c) {
        if (at(rows, c) < -kCostEps) {
          enter = c;
          break;
        }
      }
      if (enter == limit) return LpStatus::Optimal;

      std::size_t leave = rows;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = at(r, cols) / a;
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && leave < rows && basis[r] < basis[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave == rows) return LpStatus::Unbounded;
      if (pivots >= max_pivots) return LpStatus::PivotLimit;
      pivot(leave, enter);
      ++pivots;
    }
  }
};

}  // namespace

LpResult solve_standard_lp(const DenseMatrix& a, std::span<const double> b,
                           std::span<const double> c, int max_pivots) {
  const std::size_t rows = a.rows();
  const std::size_t nvar = a.cols();
  if (b.size() != rows || c.size() != nvar) {
    throw InputError("solve_standard_lp: dimension mismatch");
  }

  // Columns: [original vars | artificials].
  Tableau tab;
  tab.rows = rows;
  tab.cols = nvar + rows;
  tab.t.assign((rows + 1) * (tab.cols + 1), 0.0);
  tab.basis.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double sign = b[r] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < nvar; ++j) tab.at(r, j) = sign * a(r, j);
    tab.at(r, nvar + r) = 1.0;
    tab.rhs(r) = sign * b[r];
    tab.basis[r] = nvar + r;
  }
  // Phase 1 objective: sum of artificials, expressed in non-basic terms.
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j <= tab.cols; ++j) {
      if (j >= nvar && j < tab.cols) continue;
      tab.at(rows, j) -= tab.at(r, j);
    }
  }

  LpResult result;
  LpStatus st = tab.run(tab.cols, result.pivots, max_pivots);
  if (st == LpStatus::PivotLimit) {
    result.status = st;
    return result;
  }
  const double infeasibility = -tab.at(rows, tab.cols);
  double bscale = 1.0;
  for (double x : b) bscale = std::max(bscale, std::abs(x));
  if (infeasibility > 1e-9 * bscale) {
    result.status = LpStatus::Infeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are redundant and get neutralised.
  std::vector<bool> redundant(rows, false);
  for (std::size_t r = 0; r < rows; ++r) {
    if (tab.basis[r] < nvar) continue;
    std::size_t col = nvar;
    for (std::size_t j = 0; j < nvar; ++j) {
      if (std::abs(tab.at(r, j)) > kPivotEps) {
        col = j;
        break;
      }
    }
    if (col < nvar) {
      tab.pivot(r, col);
      ++result.pivots;
    } else {
      redundant[r] = true;
    }
  }

  // Phase 2: fresh objective row from c, priced out against the basis.
  for (std::size_t j = 0; j <= tab.cols; ++j) tab.at(rows, j) = j < nvar ? c[j] : 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (redundant[r]) continue;
    const std::size_t bc = tab.basis[r];
    const double f = tab.at(rows, bc);
    if (f == 0.0) continue;
    for (std::size_t j = 0; j <= tab.cols; ++j) tab.at(rows, j) -= f * tab.at(r, j);
  }
  // Artificial columns are excluded from entering by limiting to nvar.
  st = tab.run(nvar, result.pivots, max_pivots);
  result.status = st;
  if (st != LpStatus::Optimal) return result;

  result.x.assign(nvar, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (tab.basis[r] < nvar) result.x[tab.basis[r]] = std::max(0.0, tab.at(r, tab.cols));
  }
  result.objective = dot(c, result.x);
  return result;
}

}  // namespace vqf
