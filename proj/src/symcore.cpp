#include "vqf/symcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "vqf/error.hpp"

namespace vqf {

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InputError(std::string(what) + ": expected length " + std::to_string(want) +
                     ", got " + std::to_string(got));
  }
}

// Cyclic Jacobi on a row-major copy. Rotations are accumulated into `v` when
// it is non-null.
void jacobi_diagonalize(std::vector<double>& a, std::size_t n, std::vector<double>* v) {
  constexpr int kMaxSweeps = 100;
  if (v != nullptr) {
    v->assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) (*v)[i * n + i] = 1.0;
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double scale = 0.0;
  for (double x : a) scale += x * x;
  scale = std::sqrt(scale);
  if (scale == 0.0 || n == 1) return;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (std::sqrt(off) <= 1e-300 || std::sqrt(2.0 * off) <= 1e-17 * scale) return;

    // Early sweeps skip rotations on entries that are already small.
    const double threshold = sweep < 3 ? 0.2 * std::sqrt(off) / static_cast<double>(n * n) : 0.0;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        if (sweep >= 3 && std::abs(apq) <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          at(p, q) = at(q, p) = 0.0;
          continue;
        }
        if (std::abs(apq) < threshold) continue;

        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          at(r, p) = at(p, r) = arp - s * (arq + tau * arp);
          at(r, q) = at(q, r) = arq + s * (arp - tau * arq);
        }
        if (v != nullptr) {
          auto& vm = *v;
          for (std::size_t r = 0; r < n; ++r) {
            const double vrp = vm[r * n + p];
            const double vrq = vm[r * n + q];
            vm[r * n + p] = vrp - s * (vrq + tau * vrp);
            vm[r * n + q] = vrq + s * (vrp - tau * vrq);
          }
        }
      }
    }
  }
  throw NumericError("eigh: Jacobi iteration did not converge in 100 sweeps");
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_length(b.size(), a.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

// --- DenseMatrix -----------------------------------------------------------

Vector DenseMatrix::column(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
  require_length(x.size(), cols_, "DenseMatrix::multiply");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    out[i] = s;
  }
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

// --- SymmetricMatrix -------------------------------------------------------

SymmetricMatrix::SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
  if (n == 0) throw InputError("SymmetricMatrix: dimension must be positive");
}

SymmetricMatrix::SymmetricMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (n == 0) throw InputError("SymmetricMatrix: dimension must be positive");
  require_length(data_.size(), n * n, "SymmetricMatrix entries");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = data_[i * n + j];
      if (!std::isfinite(x)) {
        throw InputError("SymmetricMatrix: non-finite entry at (" + std::to_string(i) + "," +
                         std::to_string(j) + ")");
      }
      if (j > i && x != data_[j * n + i]) {
        throw InputError("SymmetricMatrix: entries (" + std::to_string(i) + "," +
                         std::to_string(j) + ") and (" + std::to_string(j) + "," +
                         std::to_string(i) + ") differ");
      }
    }
  }
}

SymmetricMatrix::SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymmetricMatrix(rows.size(), [&] {
        std::vector<double> flat;
        for (const auto& r : rows) {
          if (r.size() != rows.size()) throw InputError("SymmetricMatrix: matrix is not square");
          flat.insert(flat.end(), r.begin(), r.end());
        }
        return flat;
      }()) {}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) a.data_[i * n + i] = 1.0;
  return a;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
  SymmetricMatrix a(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (!std::isfinite(diag[i])) throw InputError("SymmetricMatrix::diagonal: non-finite entry");
    a.data_[i * diag.size() + i] = diag[i];
  }
  return a;
}

SymmetricMatrix SymmetricMatrix::outer(std::span<const double> x) {
  const std::size_t n = x.size();
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i])) throw InputError("SymmetricMatrix::outer: non-finite entry");
    for (std::size_t j = i; j < n; ++j) a.set(i, j, x[i] * x[j]);
  }
  return a;
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
  if (!std::isfinite(value)) throw InputError("SymmetricMatrix::set: non-finite value");
  data_[i * n_ + j] = value;
  data_[j * n_ + i] = value;
}

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i];
  return t;
}

double SymmetricMatrix::frobenius_norm() const { return norm(data_); }

double SymmetricMatrix::bilinear(std::span<const double> x, std::span<const double> y) const {
  require_length(x.size(), n_, "bilinear (left vector)");
  require_length(y.size(), n_, "bilinear (right vector)");
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n_; ++j) row += data_[i * n_ + j] * y[j];
    s += x[i] * row;
  }
  return s;
}

Vector SymmetricMatrix::multiply(std::span<const double> x) const {
  require_length(x.size(), n_, "SymmetricMatrix::multiply");
  Vector out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += data_[i * n_ + j] * x[j];
    out[i] = s;
  }
  return out;
}

SymmetricMatrix& SymmetricMatrix::operator+=(const SymmetricMatrix& other) {
  require_length(other.n_, n_, "SymmetricMatrix +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator-=(const SymmetricMatrix& other) {
  require_length(other.n_, n_, "SymmetricMatrix -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymmetricMatrix& SymmetricMatrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

// --- VQForm ----------------------------------------------------------------

VQForm::VQForm(std::vector<SymmetricMatrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw InputError("VQForm: need at least one matrix");
  n_ = mats_.front().dim();
  if (n_ == 0) throw InputError("VQForm: dimension must be positive");
  for (std::size_t i = 1; i < mats_.size(); ++i) {
    if (mats_[i].dim() != n_) {
      throw InputError("VQForm: matrix " + std::to_string(i) + " has dimension " +
                       std::to_string(mats_[i].dim()) + ", expected " + std::to_string(n_));
    }
  }
}

double VQForm::max_norm() const {
  double best = 0.0;
  for (const auto& a : mats_) best = std::max(best, a.frobenius_norm());
  return best;
}

// --- evaluation ------------------------------------------------------------

Vector evaluate(const VQForm& form, std::span<const double> u) {
  require_length(u.size(), form.n(), "evaluate");
  Vector out(form.m());
  for (std::size_t i = 0; i < form.m(); ++i) out[i] = form[i].quadratic(u);
  return out;
}

Vector bilinear(const VQForm& form, std::span<const double> u, std::span<const double> w) {
  require_length(u.size(), form.n(), "bilinear (u)");
  require_length(w.size(), form.n(), "bilinear (w)");
  Vector out(form.m());
  for (std::size_t i = 0; i < form.m(); ++i) out[i] = form[i].bilinear(u, w);
  return out;
}

SymmetricMatrix contract(const VQForm& form, std::span<const double> lambda) {
  require_length(lambda.size(), form.m(), "contract");
  const std::size_t n = form.n();
  std::vector<double> acc(n * n, 0.0);
  for (std::size_t i = 0; i < form.m(); ++i) {
    if (!std::isfinite(lambda[i])) throw InputError("contract: non-finite coefficient");
    const auto src = form[i].data();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += lambda[i] * src[k];
  }
  // Summation order is the same for (i,j) and (j,i), so acc stays symmetric.
  return SymmetricMatrix(n, std::move(acc));
}

// --- spectral --------------------------------------------------------------

EigenDecomposition eigh(const SymmetricMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> work(a.data().begin(), a.data().end());
  std::vector<double> v;
  jacobi_diagonalize(work, n, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return work[x * n + x] < work[y * n + y]; });

  EigenDecomposition out{Vector(n), DenseMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = work[src * n + src];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v[r * n + src];
  }
  return out;
}

Vector eigenvalues(const SymmetricMatrix& a) {
  const std::size_t n = a.dim();
  std::vector<double> work(a.data().begin(), a.data().end());
  jacobi_diagonalize(work, n, nullptr);
  Vector values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = work[k * n + k];
  std::sort(values.begin(), values.end());
  return values;
}

double default_inertia_tol(const SymmetricMatrix& a) {
  return 1e-8 * std::max(1.0, a.frobenius_norm());
}

Inertia inertia_from_eigenvalues(std::span<const double> values, double tol) {
  if (!(tol >= 0.0)) throw InputError("inertia: tolerance must be non-negative");
  Inertia out;
  out.tol = tol;
  for (double mu : values) {
    if (mu > tol) {
      ++out.n_plus;
    } else if (mu < -tol) {
      ++out.n_minus;
    } else {
      ++out.n_zero;
    }
  }
  return out;
}

Inertia inertia(const SymmetricMatrix& a, double tol) {
  return inertia_from_eigenvalues(eigenvalues(a), tol);
}

Inertia inertia(const SymmetricMatrix& a) { return inertia(a, default_inertia_tol(a)); }

double frobenius(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  require_length(b.dim(), a.dim(), "frobenius");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij B_ij for symmetric B.
  return dot(a.data(), b.data());
}

SymmetricMatrix gram(const VQForm& form) {
  SymmetricMatrix g(form.m());
  for (std::size_t i = 0; i < form.m(); ++i)
    for (std::size_t j = i; j < form.m(); ++j) g.set(i, j, frobenius(form[i], form[j]));
  return g;
}

// --- ensembles -------------------------------------------------------------

Ensemble parse_ensemble(std::string_view name) {
  if (name == "gaussian") return Ensemble::Gaussian;
  if (name == "traceless-gaussian") return Ensemble::TracelessGaussian;
  if (name == "definite-planted") return Ensemble::DefinitePlanted;
  if (name == "indefinite-planted") return Ensemble::IndefinitePlanted;
  throw InputError("unknown ensemble '" + std::string(name) +
                   "' (expected gaussian, traceless-gaussian, definite-planted, indefinite-planted)");
}

std::string_view ensemble_name(Ensemble e) {
  switch (e) {
    case Ensemble::Gaussian: return "gaussian";
    case Ensemble::TracelessGaussian: return "traceless-gaussian";
    case Ensemble::DefinitePlanted: return "definite-planted";
    case Ensemble::IndefinitePlanted: return "indefinite-planted";
  }
  return "unknown";
}

namespace {

SymmetricMatrix gaussian_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SymmetricMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      // GOE scaling: off-diagonal variance 1/2, diagonal variance 1.
      const double x = normal(rng);
      a.set(i, j, i == j ? x : x / std::sqrt(2.0));
    }
  }
  return a;
}

SymmetricMatrix remove_trace(SymmetricMatrix a) {
  const double shift = a.trace() / static_cast<double>(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) a.set(i, i, a(i, i) - shift);
  return a;
}

}  // namespace

VQForm random_form(std::size_t n, std::size_t m, Ensemble ensemble, std::uint64_t seed) {
  if (n == 0 || m == 0) throw InputError("random_form: n and m must be positive");
  std::mt19937_64 rng(seed);

  auto draw = [&](bool traceless) {
    std::vector<SymmetricMatrix> mats;
    mats.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      auto a = gaussian_symmetric(n, rng);
      mats.push_back(traceless ? remove_trace(std::move(a)) : std::move(a));
    }
    return mats;
  };

  switch (ensemble) {
    case Ensemble::Gaussian:
      return VQForm(draw(false));
    case Ensemble::TracelessGaussian:
      return VQForm(draw(true));
    case Ensemble::DefinitePlanted: {
      auto mats = draw(false);
      const double lo = eigenvalues(mats[0]).front();
      const double shift = 1.0 - lo;
      for (std::size_t i = 0; i < n; ++i) mats[0].set(i, i, mats[0](i, i) + shift);
      return VQForm(std::move(mats));
    }
    case Ensemble::IndefinitePlanted: {
      if (n * (n + 1) / 2 < m + 1) {
        throw InputError("random_form: indefinite-planted needs m <= n(n+1)/2 - 1 (n=" +
                         std::to_string(n) + ", m=" + std::to_string(m) + ")");
      }
      for (int attempt = 0; attempt < 64; ++attempt) {
        VQForm f(draw(true));
        const Vector g = eigenvalues(gram(f));
        if (g.front() > 1e-6 * std::max(1.0, g.back())) return f;
      }
      throw NumericError("random_form: could not draw independent traceless matrices");
    }
  }
  throw InputError("random_form: unknown ensemble");
}

VQForm random_form(std::size_t n, std::size_t m, std::string_view ensemble, std::uint64_t seed) {
  return random_form(n, m, parse_ensemble(ensemble), seed);
}

}  // namespace vqf
