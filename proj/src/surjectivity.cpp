#include "vqf/surjectivity.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "vqf/error.hpp"
#include "vqf/sampling.hpp"

namespace vqf {

std::string to_string(SurjectivityKind k) {
  switch (k) {
    case SurjectivityKind::SurjectiveCertified: return "SurjectiveCertified";
    case SurjectivityKind::SurjectiveEvidence: return "SurjectiveEvidence";
    case SurjectivityKind::NotSurjectiveCertified: return "NotSurjectiveCertified";
    case SurjectivityKind::NotSurjectiveEvidence: return "NotSurjectiveEvidence";
    case SurjectivityKind::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

namespace {

Inertia swapped(Inertia in) {
  std::swap(in.n_plus, in.n_minus);
  return in;
}

// Adds lambda and -lambda. The inertia of A(-lambda) = -A(lambda) is the
// swap of A(lambda)'s, so antipodal consistency holds exactly.
Inertia add_antipodal_pair(IndexProfile& profile, const VQForm& form, Vector lambda) {
  const SymmetricMatrix a = contract(form, lambda);
  const Inertia in = inertia(a);
  Vector neg = lambda;
  for (double& x : neg) x = -x;
  profile.entries.push_back({std::move(lambda), in});
  profile.entries.push_back({std::move(neg), swapped(in)});
  return in;
}

void finish(IndexProfile& profile) {
  profile.min_index = profile.entries.front().inertia.n_minus;
  for (const auto& e : profile.entries) profile.min_index = std::min(profile.min_index, e.inertia.n_minus);
}

Eigen::MatrixXd to_eigen(const SymmetricMatrix& a) {
  Eigen::MatrixXd out(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = a(i, j);
  return out;
}

}  // namespace

IndexProfile index_profile_sampled(const VQForm& form, int num_directions, std::uint64_t seed) {
  if (num_directions < 2 * static_cast<int>(form.m())) {
    throw InputError("index_profile_sampled: need at least 2m directions");
  }
  IndexProfile profile;
  SphereSequence seq(form.m(), SphereCover::Half, seed);
  for (int k = 0; k < num_directions; ++k) add_antipodal_pair(profile, form, seq.next());
  finish(profile);
  return profile;
}

IndexProfile index_profile_exact_m2(const VQForm& form) {
  if (form.m() != 2) throw InputError("index_profile_exact_m2: requires m == 2");
  if (form[0].frobenius_norm() == 0.0 && form[1].frobenius_norm() == 0.0) {
    throw InputError("index_profile_exact_m2: both matrices are zero");
  }

  // det(A_1 + t A_2) == 0 identically iff A(theta) is singular everywhere;
  // probing a few generic angles detects that.
  bool singular_everywhere = true;
  for (double theta : {0.37, 1.91, 2.83, 4.41}) {
    const Vector lambda = {std::cos(theta), std::sin(theta)};
    const SymmetricMatrix a = contract(form, lambda);
    const Vector ev = eigenvalues(a);
    double smallest = std::abs(ev.front());
    for (double x : ev) smallest = std::min(smallest, std::abs(x));
    if (smallest > default_inertia_tol(a)) {
      singular_everywhere = false;
      break;
    }
  }
  if (singular_everywhere) {
    IndexProfile fallback = index_profile_sampled(form, 4096, 1);
    fallback.diagnostics.push_back(
        "singular pencil: det(A_1 + t A_2) vanishes identically; sampled profile, not exact");
    return fallback;
  }

  // A(theta) = cos(theta) (A_1 + tan(theta) A_2). Finite roots t of
  // det(A_1 + t A_2) are -sigma for generalized eigenvalues sigma of
  // (A_1, A_2); theta = pi/2 (det A_2 = 0) is checked unconditionally.
  std::vector<double> half_angles = {std::numbers::pi / 2.0};
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> qz(to_eigen(form[0]), to_eigen(form[1]), false);
  if (qz.info() != Eigen::Success) {
    throw NumericError("index_profile_exact_m2: QZ iteration failed");
  }
  const auto alphas = qz.alphas();
  const auto betas = qz.betas();
  for (Eigen::Index k = 0; k < alphas.size(); ++k) {
    const double beta = betas(k);
    if (std::abs(beta) <= 1e-14 * std::abs(alphas(k))) continue;  // infinite: theta = pi/2
    const std::complex<double> sigma = alphas(k) / beta;
    // Near-real roots are kept too; an extra candidate angle only adds a
    // sample point, a missed one could hide an arc.
    if (std::abs(sigma.imag()) > 1e-6 * (1.0 + std::abs(sigma))) continue;
    double theta = std::atan(-sigma.real());
    if (theta < 0.0) theta += std::numbers::pi;
    half_angles.push_back(theta);
  }
  std::sort(half_angles.begin(), half_angles.end());
  half_angles.erase(std::unique(half_angles.begin(), half_angles.end(),
                                [](double a, double b) { return std::abs(a - b) <= 1e-13; }),
                    half_angles.end());

  IndexProfile profile;
  profile.exact = true;
  // Candidate angles, then one representative per open arc on [0, pi); the
  // antipodal pairs cover [pi, 2pi). pi/2 is a candidate even when A_2 is
  // nonsingular, so only angles with a zero eigenvalue count as singular.
  for (double theta : half_angles) {
    const Inertia in = add_antipodal_pair(profile, form, {std::cos(theta), std::sin(theta)});
    if (in.n_zero == 0) continue;
    profile.singular_angles.push_back(theta);
    profile.singular_angles.push_back(theta + std::numbers::pi);
  }
  for (std::size_t k = 0; k < half_angles.size(); ++k) {
    const double lo = half_angles[k];
    const double hi = k + 1 < half_angles.size() ? half_angles[k + 1] : half_angles.front() + std::numbers::pi;
    const double mid = 0.5 * (lo + hi);
    add_antipodal_pair(profile, form, {std::cos(mid), std::sin(mid)});
  }
  std::sort(profile.singular_angles.begin(), profile.singular_angles.end());
  finish(profile);
  return profile;
}

IndexProfile index_profile_exact(const VQForm& form) {
  if (form.m() == 1) {
    IndexProfile profile;
    profile.exact = true;
    add_antipodal_pair(profile, form, {1.0});
    finish(profile);
    return profile;
  }
  if (form.m() == 2) return index_profile_exact_m2(form);
  throw InputError("index_profile_exact: exact profiles exist only for m <= 2");
}

SurjectivityVerdict agrachev_sarychev_test(const VQForm& form, const IndexProfile& profile) {
  if (profile.entries.empty()) throw InputError("agrachev_sarychev_test: empty profile");
  SurjectivityVerdict out;
  out.profile = profile;
  const int m = static_cast<int>(form.m());
  if (profile.min_index >= m) {
    out.verdict = profile.exact ? SurjectivityKind::SurjectiveCertified
                                : SurjectivityKind::SurjectiveEvidence;
    out.certificate = IndexBound{profile.min_index, profile.exact};
  } else {
    out.verdict = SurjectivityKind::Indeterminate;
    out.diagnostics.push_back("index bound inconclusive: min index " +
                              std::to_string(profile.min_index) + " < m = " + std::to_string(m));
  }
  return out;
}

std::optional<SurjectivityVerdict> nonsurjectivity_from_semidefiniteness(
    const VQForm& form, const AscentOptions& ascent, double tol) {
  if (tol <= 0.0) tol = default_definite_tol(form);
  const EigenDirection dir = max_min_eigen_direction(form, ascent);
  if (dir.value < -tol) return std::nullopt;

  SurjectivityVerdict out;
  out.certificate = PsdDirection{dir.lambda, dir.value};
  if (dir.value >= tol) {
    out.verdict = SurjectivityKind::NotSurjectiveCertified;
  } else {
    out.verdict = SurjectivityKind::NotSurjectiveEvidence;
    out.diagnostics.push_back("psd direction only within the tolerance band (lambda_min = " +
                              std::to_string(dir.value) + ")");
  }
  return out;
}

SurjectivityVerdict surjectivity_probe(const VQForm& form, const SurjectivityOptions& opts) {
  const int m = static_cast<int>(form.m());
  if (opts.num_targets < 2 * m) throw InputError("surjectivity_probe: need at least 2m targets");

  IndexProfile profile = m <= 2 ? index_profile_exact(form)
                                : index_profile_sampled(form, opts.index_directions, opts.seed);
  SurjectivityVerdict index_route = agrachev_sarychev_test(form, profile);
  if (index_route.verdict == SurjectivityKind::SurjectiveCertified) return index_route;

  if (auto psd = nonsurjectivity_from_semidefiniteness(form, opts.ascent, opts.tol)) {
    psd->profile = std::move(profile);
    return *psd;
  }

  SurjectivityVerdict out;
  out.profile = std::move(profile);
  out.diagnostics = index_route.diagnostics;
  SphereSequence targets(form.m(), SphereCover::Full, opts.seed);
  for (int k = 0; k < opts.num_targets; ++k) {
    const Vector v = targets.next();
    const PreimageResult res = solve_preimage(form, v, opts.solve);
    if (!res.solution) {
      out.verdict = SurjectivityKind::NotSurjectiveEvidence;
      out.certificate = FailedTarget{v, res.residual_norm, res.starts_used};
      return out;
    }
    ++out.targets_solved;
  }
  out.verdict = SurjectivityKind::SurjectiveEvidence;
  if (index_route.certificate) out.certificate = index_route.certificate;
  return out;
}

SurjectivityVerdict dim2_decide(const VQForm& form, const ClassifyOptions& opts) {
  if (form.n() != 2 || form.m() != 2) {
    throw InputError("dim2_decide: requires n == 2 and m == 2 (got n=" + std::to_string(form.n()) +
                     ", m=" + std::to_string(form.m()) + ")");
  }
  const Classification c = classify(form, opts);
  SurjectivityVerdict out;
  out.diagnostics = c.diagnostics;
  switch (c.verdict) {
    case Verdict::Indefinite:
      if (verify_certificate(form, *c.certificate)) {
        out.verdict = SurjectivityKind::SurjectiveCertified;
        out.certificate = std::get<InteriorWitness>(*c.certificate);
      }
      break;
    case Verdict::Definite:
      if (verify_certificate(form, *c.certificate)) {
        const auto& d = std::get<DefiniteDirection>(*c.certificate);
        out.verdict = SurjectivityKind::NotSurjectiveCertified;
        out.certificate = PsdDirection{d.lambda, d.margin};
      }
      break;
    case Verdict::SemidefiniteBoundary:
      if (verify_certificate(form, *c.certificate, c.tol)) {
        out.verdict = SurjectivityKind::NotSurjectiveCertified;
        out.certificate = std::get<PsdDirection>(*c.certificate);
      }
      break;
    case Verdict::Indeterminate:
      break;
  }
  if (out.verdict == SurjectivityKind::Indeterminate) {
    out.diagnostics.push_back("classification " + to_string(c.verdict) + " did not yield a verified certificate");
  }
  return out;
}

KernelProbeResult kernel_probe(const VQForm& form, const SolveOptions& opts) {
  opts.validate();
  KernelProbeResult out;
  out.tol = opts.residual_tol * (1.0 + form.max_norm());
  out.best_residual = std::numeric_limits<double>::infinity();

  // Q(u) = 0 together with |u|^2 = 1.
  ResidualFn fn = [&](std::span<const double> u, Vector& r, DenseMatrix& j) {
    const std::size_t m = form.m();
    const std::size_t n = form.n();
    r.assign(m + 1, 0.0);
    j = DenseMatrix(m + 1, n);
    for (std::size_t i = 0; i < m; ++i) {
      const Vector au = form[i].multiply(u);
      r[i] = dot(u, au);
      for (std::size_t k = 0; k < n; ++k) j(i, k) = 2.0 * au[k];
    }
    r[m] = dot(u, u) - 1.0;
    for (std::size_t k = 0; k < n; ++k) j(m, k) = 2.0 * u[k];
  };

  SphereSequence starts(form.n(), SphereCover::Half, opts.seed);
  for (int s = 0; s < opts.restarts; ++s) {
    LmRun run = damped_gauss_newton(fn, starts.next(), 0.5 * out.tol, opts.max_iters, opts.damping_init);
    ++out.starts;
    const double len = norm(run.u);
    if (!(len > 1e-8)) continue;
    for (double& x : run.u) x /= len;
    const double res = norm(evaluate(form, run.u));
    out.best_residual = std::min(out.best_residual, res);
    if (res <= out.tol) {
      out.u = std::move(run.u);
      out.best_residual = res;
      return out;
    }
  }
  return out;
}

}  // namespace vqf
