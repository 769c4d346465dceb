#include "vqf/preimage.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vqf/error.hpp"
#include "vqf/sampling.hpp"

namespace vqf {

void SolveOptions::validate() const {
  if (restarts < 1 || max_iters < 1) throw InputError("SolveOptions: counts must be positive");
  if (!(residual_tol > 0.0) || !(residual_tol < 1e-4)) {
    throw InputError("SolveOptions: residual_tol must be in (0, 1e-4)");
  }
  if (!(damping_init > 0.0)) throw InputError("SolveOptions: damping_init must be positive");
}

namespace {

// Solves H x = b for symmetric positive-definite H (row-major n x n) in place.
bool cholesky_solve(std::vector<double>& h, Vector& b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = h[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= h[j * n + k] * h[j * n + k];
    if (!(d > 0.0)) return false;
    d = std::sqrt(d);
    h[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = h[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= h[i * n + k] * h[j * n + k];
      h[i * n + j] = s / d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= h[i * n + k] * b[k];
    b[i] = s / h[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= h[k * n + i] * b[k];
    b[i] = s / h[i * n + i];
  }
  return true;
}

}  // namespace

ResidualJacobian residual_jacobian(const VQForm& form, std::span<const double> u,
                                   std::span<const double> v) {
  if (u.size() != form.n() || v.size() != form.m()) {
    throw InputError("residual_jacobian: dimension mismatch (u has " + std::to_string(u.size()) +
                     ", v has " + std::to_string(v.size()) + ")");
  }
  ResidualJacobian out{Vector(form.m()), DenseMatrix(form.m(), form.n())};
  for (std::size_t i = 0; i < form.m(); ++i) {
    const Vector au = form[i].multiply(u);
    out.r[i] = dot(u, au) - v[i];
    for (std::size_t k = 0; k < form.n(); ++k) out.j(i, k) = 2.0 * au[k];
  }
  return out;
}

LmRun damped_gauss_newton(const ResidualFn& residual, Vector u, double tol, int max_iters,
                          double damping_init) {
  const std::size_t n = u.size();
  Vector r;
  DenseMatrix j;
  residual(u, r, j);
  double f = norm(r);

  auto normal_equations = [&](const DenseMatrix& jac, const Vector& res, std::vector<double>& jtj,
                              Vector& jtr) {
    jtj.assign(n * n, 0.0);
    jtr.assign(n, 0.0);
    for (std::size_t row = 0; row < jac.rows(); ++row) {
      for (std::size_t a = 0; a < n; ++a) {
        jtr[a] += jac(row, a) * res[row];
        for (std::size_t b = 0; b < n; ++b) jtj[a * n + b] += jac(row, a) * jac(row, b);
      }
    }
  };

  std::vector<double> jtj;
  Vector jtr;
  normal_equations(j, r, jtj, jtr);
  double diag_max = 0.0;
  for (std::size_t a = 0; a < n; ++a) diag_max = std::max(diag_max, jtj[a * n + a]);
  double mu = damping_init * std::max(1.0, diag_max);

  int it = 0;
  Vector r_new;
  DenseMatrix j_new;
  for (; it < max_iters && f > tol; ++it) {
    std::vector<double> h = jtj;
    for (std::size_t a = 0; a < n; ++a) h[a * n + a] += mu;
    Vector step = jtr;
    for (double& x : step) x = -x;
    if (!cholesky_solve(h, step, n)) {
      mu *= 4.0;
      continue;
    }
    Vector trial(n);
    for (std::size_t a = 0; a < n; ++a) trial[a] = u[a] + step[a];
    residual(trial, r_new, j_new);
    const double f_new = norm(r_new);
    if (f_new < f) {
      u = std::move(trial);
      std::swap(r, r_new);
      std::swap(j, j_new);
      f = f_new;
      normal_equations(j, r, jtj, jtr);
      mu = std::max(mu * 0.5, 1e-300);
    } else {
      mu *= 4.0;
      if (mu > 1e30) break;
    }
  }
  return {std::move(u), f, it};
}

PreimageResult solve_preimage(const VQForm& form, std::span<const double> v,
                              const SolveOptions& opts) {
  opts.validate();
  if (v.size() != form.m()) {
    throw InputError("solve_preimage: target has length " + std::to_string(v.size()) +
                     ", expected " + std::to_string(form.m()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("solve_preimage: non-finite target");
  }

  PreimageResult out;
  const double vn = norm(v);
  if (vn == 0.0) {
    out.solution = Vector(form.n(), 0.0);
    out.best = *out.solution;
    return out;
  }

  const double tol = opts.residual_tol * (1.0 + vn);
  // Solve for the unit target with a slightly tighter tolerance so the
  // rescaled residual stays below `tol` after rounding.
  const double unit_tol = 0.5 * tol / vn;
  Vector target(v.begin(), v.end());
  for (double& x : target) x /= vn;

  ResidualFn fn = [&](std::span<const double> u, Vector& r, DenseMatrix& j) {
    auto rj = residual_jacobian(form, u, target);
    r = std::move(rj.r);
    j = std::move(rj.j);
  };

  // Warm starts: top eigenvectors of A(target), scaled so u^t A(target) u = 1.
  std::vector<Vector> starts;
  {
    const auto ed = eigh(contract(form, target));
    const std::size_t n = form.n();
    for (std::size_t k = 0; k < std::min(form.m(), n); ++k) {
      const std::size_t idx = n - 1 - k;
      const double mu = ed.values[idx];
      if (!(mu > 1e-12)) break;
      Vector u = ed.vectors.column(idx);
      for (double& x : u) x /= std::sqrt(mu);
      starts.push_back(std::move(u));
    }
  }
  std::mt19937_64 rng(opts.seed);
  while (starts.size() < static_cast<std::size_t>(opts.restarts)) {
    Vector u = random_unit_vector(form.n(), rng);
    const double q = norm(evaluate(form, u));
    if (q > 1e-3) {
      for (double& x : u) x /= std::sqrt(q);
    }
    starts.push_back(std::move(u));
  }
  starts.resize(static_cast<std::size_t>(opts.restarts));

  const double back = std::sqrt(vn);
  double best_residual = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    LmRun run = damped_gauss_newton(fn, start, unit_tol, opts.max_iters, opts.damping_init);
    ++out.starts_used;
    Vector u = run.u;
    for (double& x : u) x *= back;
    Vector q = evaluate(form, u);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= v[i];
    const double res = norm(q);
    out.trace.push_back(res);
    if (res < best_residual) {
      best_residual = res;
      out.best = u;
      out.residual_norm = res;
    }
    if (res <= tol) {
      out.solution = std::move(u);
      out.best = *out.solution;
      out.residual_norm = res;
      return out;
    }
  }
  return out;
}

bool verify_preimage(const VQForm& form, std::span<const double> u, std::span<const double> v,
                     double tol) {
  if (u.size() != form.n() || v.size() != form.m()) {
    throw InputError("verify_preimage: dimension mismatch");
  }
  Vector q = evaluate(form, u);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] -= v[i];
  return norm(q) <= tol;
}

}  // namespace vqf
