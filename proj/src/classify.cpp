#include "vqf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vqf/error.hpp"
#include "vqf/sampling.hpp"
#include "vqf/simplex.hpp"

namespace vqf {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Definite: return "Definite";
    case Verdict::Indefinite: return "Indefinite";
    case Verdict::SemidefiniteBoundary: return "SemidefiniteBoundary";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

double default_definite_tol(const VQForm& form) { return 1e-7 * (1.0 + form.max_norm()); }

namespace {

void normalize_in_place(Vector& v) {
  const double len = norm(v);
  for (double& x : v) x /= len;
}

Vector normalized(Vector v) {
  normalize_in_place(v);
  return v;
}

double min_eig(const VQForm& form, std::span<const double> lambda) {
  return eigenvalues(contract(form, lambda)).front();
}

// Component of g orthogonal to the unit vector lambda.
Vector tangent(const Vector& g, const Vector& lambda) {
  const double along = dot(g, lambda);
  Vector t(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) t[i] = g[i] - along * lambda[i];
  return t;
}

// Move along a unit tangent direction and renormalise onto the sphere.
Vector sphere_step(const Vector& lambda, const Vector& direction, double step) {
  Vector next(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) next[i] = lambda[i] + step * direction[i];
  return normalized(std::move(next));
}

struct AscentRun {
  Vector lambda;
  double value;
  int iterations;
};

AscentRun supergradient_ascent(const VQForm& form, Vector lambda, const AscentOptions& opts) {
  const std::size_t m = form.m();
  const double scale = 1.0 + form.max_norm();
  AscentRun best{lambda, -std::numeric_limits<double>::infinity(), 0};

  int k = 0;
  for (; k <= opts.iterations; ++k) {
    const auto ed = eigh(contract(form, lambda));
    const double value = ed.values.front();
    if (value > best.value) {
      best.value = value;
      best.lambda = lambda;
    }
    if (k == opts.iterations || m == 1) break;

    const Vector v = ed.vectors.column(0);
    Vector g(m);
    for (std::size_t i = 0; i < m; ++i) g[i] = form[i].quadratic(v);
    Vector t = tangent(g, lambda);
    const double tn = norm(t);
    if (tn <= 1e-14 * scale) break;
    for (double& x : t) x /= tn;
    lambda = sphere_step(lambda, t, opts.step_scale / std::sqrt(static_cast<double>(k + 1)));
  }
  best.iterations = k;
  return best;
}

// Soft-min of the spectrum at temperature mu, and its gradient in lambda.
struct Smoothed {
  double value;
  double true_min;
  Vector grad;
};

Smoothed smoothed_min(const VQForm& form, const Vector& lambda, double mu) {
  const auto ed = eigh(contract(form, lambda));
  const double lo = ed.values.front();
  double z = 0.0;
  std::vector<double> w(ed.values.size(), 0.0);
  for (std::size_t k = 0; k < ed.values.size(); ++k) {
    const double e = (ed.values[k] - lo) / mu;
    if (e < 60.0) {
      w[k] = std::exp(-e);
      z += w[k];
    }
  }
  Smoothed out{lo - mu * std::log(z), lo, Vector(form.m(), 0.0)};
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    const Vector v = ed.vectors.column(k);
    for (std::size_t i = 0; i < form.m(); ++i) out.grad[i] += (w[k] / z) * form[i].quadratic(v);
  }
  return out;
}

// Refines a supergradient iterate at a kink of lambda_min (eigenvalue
// crossings), where plain supergradient steps only oscillate.
AscentRun polish(const VQForm& form, AscentRun start) {
  if (form.m() == 1) return start;
  const double scale = 1.0 + form.max_norm();
  AscentRun best = start;
  Vector lambda = start.lambda;
  double step = 0.05;
  for (double mu = 1e-2 * scale; mu >= 1e-11 * scale; mu *= 0.1) {
    for (int it = 0; it < 60; ++it) {
      const Smoothed here = smoothed_min(form, lambda, mu);
      Vector t = tangent(here.grad, lambda);
      const double tn = norm(t);
      if (tn <= 1e-15 * scale) break;
      for (double& x : t) x /= tn;

      double trial = std::min(2.0 * step, 0.5);
      bool moved = false;
      while (trial > 1e-15) {
        Vector cand = sphere_step(lambda, t, trial);
        const Smoothed there = smoothed_min(form, cand, mu);
        if (there.value >= here.value + 1e-4 * trial * tn) {
          lambda = std::move(cand);
          step = trial;
          moved = true;
          ++best.iterations;
          if (there.true_min > best.value) {
            best.value = there.true_min;
            best.lambda = lambda;
          }
          break;
        }
        trial *= 0.5;
      }
      if (!moved) break;
    }
  }
  return best;
}

// Numerical rank test: sigma_min / sigma_max of the point cloud > rank_tol.
bool spans_space(const std::vector<Vector>& images, std::size_t m, double rank_tol) {
  if (images.size() < m) return false;
  SymmetricMatrix scatter(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double s = 0.0;
      for (const auto& q : images) s += q[i] * q[j];
      scatter.set(i, j, s);
    }
  }
  const Vector ev = eigenvalues(scatter);
  if (!(ev.back() > 0.0)) return false;
  return std::sqrt(std::max(0.0, ev.front()) / ev.back()) > rank_tol;
}

}  // namespace

// --- ascent ----------------------------------------------------------------

EigenDirection max_min_eigen_direction(const VQForm& form, const AscentOptions& opts) {
  if (opts.iterations < 1) throw InputError("max_min_eigen_direction: budget must be >= 1");
  if (opts.restarts < 0) throw InputError("max_min_eigen_direction: restarts must be >= 1");
  const int restarts =
      opts.restarts > 0 ? opts.restarts : std::max(8, 2 * static_cast<int>(form.m()));

  SphereSequence starts(form.m(), SphereCover::Full, opts.seed);
  std::optional<AscentRun> best;
  int total_iterations = 0;
  for (int r = 0; r < restarts; ++r) {
    AscentRun run = supergradient_ascent(form, starts.next(), opts);
    total_iterations += run.iterations;
    if (!best || run.value > best->value) best = std::move(run);
  }
  if (opts.polish) {
    const int before = best->iterations;
    best = polish(form, std::move(*best));
    total_iterations += best->iterations - before;
  }

  EigenDirection out;
  out.lambda = std::move(best->lambda);
  // Report the value exactly as verify_certificate will recompute it.
  out.value = min_eig(form, out.lambda);
  out.iterations = total_iterations;
  out.restarts = restarts;
  return out;
}

std::optional<DefiniteDirection> definite_certificate(const VQForm& form,
                                                      const ClassifyOptions& opts) {
  const double tol = opts.definite_tol > 0.0 ? opts.definite_tol : default_definite_tol(form);
  const EigenDirection dir = max_min_eigen_direction(form, opts.ascent);
  if (dir.value > tol) return DefiniteDirection{dir.lambda, dir.value};
  return std::nullopt;
}

// --- interior witness ------------------------------------------------------

std::optional<InteriorWitness> indefinite_certificate(const VQForm& form,
                                                      const WitnessOptions& opts,
                                                      BudgetReport* budget) {
  const std::size_t m = form.m();
  if (opts.max_samples < static_cast<int>(m) + 1) {
    throw InputError("indefinite_certificate: max_samples must be >= m + 1");
  }
  const double scale = std::max(1.0, form.max_norm());

  SphereSequence grid(form.n(), SphereCover::Half, opts.seed);
  std::mt19937_64 rng(opts.seed);
  auto draw = [&] {
    return opts.sampler == Sampler::SphereGrid ? grid.next() : random_unit_vector(form.n(), rng);
  };

  std::vector<Vector> points;
  std::vector<Vector> images;
  const std::size_t cap = static_cast<std::size_t>(opts.max_samples);
  std::size_t batch = std::min(cap, std::max<std::size_t>(32, 2 * (m + 1)));

  while (true) {
    while (points.size() < batch) {
      points.push_back(draw());
      Vector q = evaluate(form, points.back());
      for (double& x : q) x /= scale;
      images.push_back(std::move(q));
    }
    const std::size_t k = points.size();
    if (budget != nullptr) budget->samples = static_cast<int>(k);

    // Variables: eps, y_1..y_k with w_j = eps + y_j.
    //   eps * sum_j q_j + sum_j y_j q_j = 0
    //   k * eps + sum_j y_j = 1
    DenseMatrix a(m + 1, k + 1);
    Vector b(m + 1, 0.0);
    Vector c(k + 1, 0.0);
    c[0] = -1.0;
    b[m] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        a(i, j + 1) = images[j][i];
        s += images[j][i];
      }
      a(i, 0) = s;
    }
    a(m, 0) = static_cast<double>(k);
    for (std::size_t j = 0; j < k; ++j) a(m, j + 1) = 1.0;

    const LpResult lp = solve_standard_lp(a, b, c);
    if (budget != nullptr) budget->lp_pivots += lp.pivots;
    if (lp.status == LpStatus::PivotLimit || lp.status == LpStatus::Unbounded) {
      throw NumericError("indefinite_certificate: LP solver failed (" + to_string(lp.status) +
                         ", " + std::to_string(lp.pivots) + " pivots, " + std::to_string(k) +
                         " samples)");
    }
    if (lp.status == LpStatus::Optimal && lp.x[0] > opts.weight_tol) {
      InteriorWitness w;
      w.weights.resize(k);
      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        w.weights[j] = lp.x[0] + lp.x[j + 1];
        total += w.weights[j];
      }
      for (double& x : w.weights) x /= total;
      if (spans_space(images, m, opts.rank_tol)) {
        w.points = points;
        return w;
      }
    }
    if (batch >= cap) return std::nullopt;
    batch = std::min(cap, 2 * batch);
  }
}

// --- verification ----------------------------------------------------------

bool verify_certificate(const VQForm& form, const Certificate& cert, double tol) {
  if (tol <= 0.0) tol = default_definite_tol(form);
  const std::size_t m = form.m();

  auto checked_direction = [&](const Vector& lambda) {
    if (lambda.size() != m) throw InputError("certificate: lambda has wrong length");
    for (double x : lambda) {
      if (!std::isfinite(x)) throw InputError("certificate: non-finite lambda");
    }
    if (norm(lambda) < 1e-12) throw InputError("certificate: lambda is zero");
    return normalized(lambda);
  };

  if (const auto* d = std::get_if<DefiniteDirection>(&cert)) {
    const Vector lambda = checked_direction(d->lambda);
    if (!(d->margin > 0.0)) return false;
    return min_eig(form, lambda) >= 0.5 * d->margin;
  }
  if (const auto* p = std::get_if<PsdDirection>(&cert)) {
    const Vector lambda = checked_direction(p->lambda);
    return min_eig(form, lambda) >= -tol;
  }

  const auto& w = std::get<InteriorWitness>(cert);
  if (w.points.empty() || w.points.size() != w.weights.size()) {
    throw InputError("certificate: witness points and weights disagree in count");
  }
  for (const auto& u : w.points) {
    if (u.size() != form.n()) throw InputError("certificate: witness point has wrong length");
  }
  double total = 0.0;
  for (double x : w.weights) {
    if (!std::isfinite(x)) throw InputError("certificate: non-finite weight");
    if (!(x > 0.0)) return false;
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) return false;

  Vector sum(m, 0.0);
  double biggest = 0.0;
  std::vector<Vector> images;
  images.reserve(w.points.size());
  for (std::size_t j = 0; j < w.points.size(); ++j) {
    Vector q = evaluate(form, w.points[j]);
    biggest = std::max(biggest, norm(q));
    for (std::size_t i = 0; i < m; ++i) sum[i] += w.weights[j] * q[i];
    images.push_back(std::move(q));
  }
  if (norm(sum) > 1e-8 * std::max(1.0, biggest)) return false;
  return spans_space(images, m, 1e-8);
}

// --- top level -------------------------------------------------------------

Classification classify(const VQForm& form, const ClassifyOptions& opts) {
  Classification out;
  out.tol = opts.definite_tol > 0.0 ? opts.definite_tol : default_definite_tol(form);

  const Vector g = eigenvalues(gram(form));
  if (g.front() <= 1e-12 * std::max(1.0, g.back())) {
    out.diagnostics.push_back(
        "matrices are linearly dependent: image of B does not span R^m, some lambda.Q vanishes");
  }

  const EigenDirection dir = max_min_eigen_direction(form, opts.ascent);
  out.best_min_eig = dir.value;
  out.budget.ascent_iterations = dir.iterations;
  out.budget.restarts = dir.restarts;

  if (dir.value > out.tol) {
    out.verdict = Verdict::Definite;
    out.certificate = DefiniteDirection{dir.lambda, dir.value};
    return out;
  }

  try {
    if (auto w = indefinite_certificate(form, opts.witness, &out.budget)) {
      out.verdict = Verdict::Indefinite;
      out.certificate = std::move(*w);
      return out;
    }
  } catch (const NumericError& e) {
    out.diagnostics.push_back(e.what());
  }

  if (std::abs(dir.value) <= out.tol) {
    out.verdict = Verdict::SemidefiniteBoundary;
    out.certificate = PsdDirection{dir.lambda, dir.value};
    return out;
  }
  out.verdict = Verdict::Indeterminate;
  out.diagnostics.push_back("no definite direction (best lambda_min " + std::to_string(dir.value) +
                            ") and no interior witness within " +
                            std::to_string(out.budget.samples) + " samples");
  return out;
}

// --- brute-force oracle ----------------------------------------------------

namespace {

std::vector<Vector> sphere_grid(std::size_t m, double res_deg) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  std::vector<Vector> nodes;
  if (m == 1) {
    nodes = {{1.0}, {-1.0}};
  } else if (m == 2) {
    const int count = static_cast<int>(std::ceil(360.0 / res_deg));
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      nodes.push_back({std::cos(t), std::sin(t)});
    }
  } else {
    const int rings = static_cast<int>(std::ceil(180.0 / res_deg));
    for (int r = 0; r < rings; ++r) {
      const double phi = (-90.0 + (r + 0.5) * 180.0 / rings) * kDeg;
      const int count = std::max(1, static_cast<int>(std::ceil(360.0 * std::cos(phi) / res_deg)));
      for (int k = 0; k < count; ++k) {
        const double t = 2.0 * std::numbers::pi * k / count;
        nodes.push_back({std::cos(phi) * std::cos(t), std::cos(phi) * std::sin(t), std::sin(phi)});
      }
    }
  }
  return nodes;
}

// Orthonormal basis of the tangent plane at a unit vector in R^3.
std::pair<Vector, Vector> tangent_basis3(const Vector& p) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (std::abs(p[i]) < std::abs(p[k])) k = i;
  }
  Vector e(3, 0.0);
  e[k] = 1.0;
  Vector t1 = {p[1] * e[2] - p[2] * e[1], p[2] * e[0] - p[0] * e[2], p[0] * e[1] - p[1] * e[0]};
  normalize_in_place(t1);
  Vector t2 = {p[1] * t1[2] - p[2] * t1[1], p[2] * t1[0] - p[0] * t1[2],
               p[0] * t1[1] - p[1] * t1[0]};
  return {t1, t2};
}

}  // namespace

Classification brute_force_classify(const VQForm& form, double resolution_deg) {
  const std::size_t m = form.m();
  if (m > 3) throw InputError("brute_force_classify: only m <= 3 is supported");
  if (!(resolution_deg > 0.0) || resolution_deg > 1.0) {
    throw InputError("brute_force_classify: resolution must be in (0, 1] degrees");
  }
  constexpr double kDeg = std::numbers::pi / 180.0;
  constexpr std::size_t kRefineNodes = 6;

  Classification out;
  out.tol = default_definite_tol(form);

  const auto nodes = sphere_grid(m, resolution_deg);
  std::vector<double> values(nodes.size());
  // Smallest top eigenvalue: a node with lambda_max <= tol makes -lambda psd.
  double low_top = std::numeric_limits<double>::infinity();
  std::size_t low_top_node = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Vector ev = eigenvalues(contract(form, nodes[k]));
    values[k] = ev.front();
    if (ev.back() < low_top) {
      low_top = ev.back();
      low_top_node = k;
    }
  }
  out.budget.grid_nodes = static_cast<int>(nodes.size());

  std::vector<std::size_t> order(nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });

  Vector best_lambda = nodes[order.front()];
  double best = values[order.front()];

  // Local fine grid (tenth of the resolution) around the best nodes.
  const double h = resolution_deg * kDeg;
  const int steps = 10;
  for (std::size_t r = 0; r < std::min(kRefineNodes, order.size()) && m > 1; ++r) {
    const Vector& c = nodes[order[r]];
    auto consider = [&](Vector cand) {
      normalize_in_place(cand);
      const double v = min_eig(form, cand);
      ++out.budget.grid_nodes;
      if (v > best) {
        best = v;
        best_lambda = std::move(cand);
      }
    };
    if (m == 2) {
      const double t0 = std::atan2(c[1], c[0]);
      for (int a = -steps; a <= steps; ++a) {
        const double t = t0 + h * a / steps;
        consider({std::cos(t), std::sin(t)});
      }
    } else {
      const auto [t1, t2] = tangent_basis3(c);
      for (int a = -steps; a <= steps; ++a) {
        for (int b = -steps; b <= steps; ++b) {
          Vector cand = c;
          for (std::size_t i = 0; i < 3; ++i) cand[i] += h * (a * t1[i] + b * t2[i]) / steps;
          consider(std::move(cand));
        }
      }
    }
  }

  if (-low_top > best) {
    best = -low_top;
    best_lambda = nodes[low_top_node];
    for (double& x : best_lambda) x = -x;
  }

  out.best_min_eig = best;
  if (best > out.tol) {
    out.verdict = Verdict::Definite;
    out.certificate = DefiniteDirection{best_lambda, best};
  } else if (best >= -out.tol) {
    out.verdict = Verdict::SemidefiniteBoundary;
    out.certificate = PsdDirection{best_lambda, best};
  } else {
    // Every grid direction has lambda_min < -tol and lambda_max > tol.
    out.verdict = Verdict::Indefinite;
  }
  return out;
}

}  // namespace vqf
