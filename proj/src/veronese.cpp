#include "vqf/veronese.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "vqf/sampling.hpp"

namespace vqf {

SymmetricMatrix pi(std::span<const double> x) { return SymmetricMatrix::outer(x); }

bool in_cone(const SymmetricMatrix& s, double tol) {
  const Vector ev = eigenvalues(s);
  if (ev.front() < -tol) return false;
  // Second-largest magnitude: with lambda_min >= -tol the largest magnitude is
  // the top eigenvalue, so check everything below it.
  double second = 0.0;
  for (std::size_t k = 0; k + 1 < ev.size(); ++k) second = std::max(second, std::abs(ev[k]));
  return second <= tol * (1.0 + s.frobenius_norm());
}

Vector induced_linear_map(const VQForm& form, const SymmetricMatrix& s) {
  if (s.dim() != form.n()) throw InputError("induced_linear_map: dimension mismatch");
  Vector out(form.m());
  for (std::size_t i = 0; i < form.m(); ++i) out[i] = frobenius(form[i], s);
  return out;
}

SymmetricMatrix adjoint_embed(const VQForm& form, std::span<const double> lambda) {
  return contract(form, lambda);
}

EmbeddingData build_embedding(const VQForm& form) {
  const SymmetricMatrix g = gram(form);
  const auto ed = eigh(g);
  const std::size_t m = form.m();
  const double floor = 1e-12 * std::max(1.0, ed.values.back());
  if (ed.values.front() <= floor) {
    Vector null = ed.vectors.column(0);
    std::string combo;
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) combo += ", ";
      combo += std::to_string(null[i]);
    }
    throw SingularGramError("build_embedding: Gram matrix is singular; sum lambda_i A_i ~ 0 for lambda = (" +
                                combo + ")",
                            std::move(null));
  }

  // W = V diag(mu^{-1/2}) V^t
  std::vector<double> w(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        s += ed.vectors(i, k) * ed.vectors(j, k) / std::sqrt(ed.values[k]);
      }
      w[i * m + j] = s;
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) w[i * m + j] = w[j * m + i];
  SymmetricMatrix whitener(m, std::move(w));

  std::vector<SymmetricMatrix> basis;
  basis.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    Vector row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = whitener(k, i);
    basis.push_back(contract(form, row));
  }
  return EmbeddingData{form, g, std::move(whitener), std::move(basis)};
}

Projection project_onto_span(const EmbeddingData& e, const SymmetricMatrix& s) {
  if (s.dim() != e.form.n()) throw InputError("project_onto_span: dimension mismatch");
  Projection out{SymmetricMatrix(s.dim()), Vector(e.basis.size())};
  for (std::size_t k = 0; k < e.basis.size(); ++k) {
    out.coords[k] = frobenius(e.basis[k], s);
    out.projection += out.coords[k] * e.basis[k];
  }
  return out;
}

TraceSplit identity_traceless_split(const SymmetricMatrix& s) {
  const std::size_t n = s.dim();
  SymmetricMatrix trace_part = (s.trace() / static_cast<double>(n)) * SymmetricMatrix::identity(n);
  SymmetricMatrix traceless = s - trace_part;
  return {std::move(trace_part), std::move(traceless)};
}

double cone_angle_with_identity(std::span<const double> x) {
  if (norm(x) == 0.0) throw InputError("cone_angle_with_identity: x = 0 is the cone vertex");
  const SymmetricMatrix p = pi(x);
  const SymmetricMatrix id = SymmetricMatrix::identity(x.size());
  const double c = frobenius(p, id) / (p.frobenius_norm() * id.frobenius_norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

ReductionReport reduction_check(const VQForm& form, int num_samples, std::uint64_t seed) {
  const EmbeddingData e = build_embedding(form);
  ReductionReport report;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < num_samples; ++s) {
    const Vector x = random_unit_vector(form.n(), rng);
    const Vector coords = project_onto_span(e, pi(x)).coords;
    const Vector expected = e.whitener.multiply(evaluate(form, x));
    Vector diff(coords.size());
    for (std::size_t k = 0; k < coords.size(); ++k) diff[k] = coords[k] - expected[k];
    const double dev = norm(diff);
    if (dev > report.max_deviation || s == 0) {
      report.max_deviation = dev;
      report.worst_sample = x;
    }
    ++report.samples;
  }
  report.passed = report.max_deviation <= report.tolerance;
  return report;
}

}  // namespace vqf
