// vqf: command-line front end for vector-valued quadratic form analysis.
//
// Exit codes
//   0  success / every verdict determinate / check passed
//   1  input error (unreadable or malformed file, bad parameters)
//   2  analyze: some verdict is Indeterminate
//   3  preimage: no solution found
//   4  veronese-check: reduction identity violated

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqf/classify.hpp"
#include "vqf/document.hpp"
#include "vqf/error.hpp"
#include "vqf/preimage.hpp"
#include "vqf/surjectivity.hpp"
#include "vqf/veronese.hpp"

namespace {

using nlohmann::json;
using namespace vqf;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitNoPreimage = 3;
constexpr int kExitCheckFailed = 4;

struct CommonFlags {
  bool json_out = false;
  std::uint64_t seed = 1;
  int restarts = 32;
  int samples = 512;
  double tol = 0.0;
  bool exact = false;
  bool veronese = false;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt_vec(std::span<const double> v) {
  std::ostringstream os;
  os << std::setprecision(6) << "(";
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  os << ")";
  return os.str();
}

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_flag("--json", f.json_out, "Write the structured report to stdout");
  cmd->add_option("--seed", f.seed, "Seed for every randomised search")->capture_default_str();
  cmd->add_option("--restarts", f.restarts, "Preimage solver restarts")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--samples", f.samples, "Sample budget (witness search / reduction check)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol", f.tol, "Definiteness / psd tolerance (default 1e-7 * (1 + max |A_i|_F))")
      ->check(CLI::NonNegativeNumber);
}

ClassifyOptions classify_options(const CommonFlags& f) {
  ClassifyOptions o;
  o.ascent.seed = f.seed;
  o.witness.seed = f.seed;
  o.witness.max_samples = f.samples;
  o.definite_tol = f.tol;
  return o;
}

SolveOptions solve_options(const CommonFlags& f) {
  SolveOptions o;
  o.restarts = f.restarts;
  o.seed = f.seed;
  return o;
}

json header(const FormDocument& doc, const CommonFlags& f) {
  json j = {{"schema_version", kSchemaVersion},
            {"input",
             {{"digest", form_digest(doc)}, {"n", doc.form.n()}, {"m", doc.form.m()}}},
            {"seed", f.seed}};
  j["input"]["name"] = doc.name ? json(*doc.name) : json(nullptr);
  return j;
}

// --- analyze ---------------------------------------------------------------

int cmd_analyze(const std::string& path, const CommonFlags& f) {
  const FormDocument doc = load_form_document(path);
  const VQForm& form = doc.form;
  json report = header(doc, f);
  const ClassifyOptions copts = classify_options(f);

  std::optional<IndexProfile> forced;
  if (f.exact) {
    if (form.m() != 2) throw InputError("--exact requires m == 2 (got m = " + std::to_string(form.m()) + ")");
    forced = index_profile_exact_m2(form);
    if (!forced->exact) throw InputError("--exact: singular pencil, the exact sweep is unavailable");
  }

  Stopwatch t_cls;
  const Classification cls = classify(form, copts);
  report["classification"] = to_json(cls);
  report["classification"]["wall_time_s"] = t_cls.seconds();

  SurjectivityOptions sopts;
  sopts.ascent = copts.ascent;
  sopts.tol = copts.definite_tol;
  sopts.solve = solve_options(f);
  sopts.seed = f.seed;

  Stopwatch t_probe;
  const SurjectivityVerdict probe = surjectivity_probe(form, sopts);
  report["surjectivity_probe"] = to_json(probe);
  report["surjectivity_probe"]["tolerance"] = sopts.tol > 0.0 ? sopts.tol : default_definite_tol(form);
  report["surjectivity_probe"]["wall_time_s"] = t_probe.seconds();

  SurjectivityVerdict final_verdict = probe;
  std::string route = "probe";
  if (form.n() == 2 && form.m() == 2) {
    Stopwatch t_dim2;
    const SurjectivityVerdict d2 = dim2_decide(form, copts);
    report["dim2"] = to_json(d2);
    report["dim2"]["tolerance"] = cls.tol;
    report["dim2"]["wall_time_s"] = t_dim2.seconds();
    if (d2.verdict != SurjectivityKind::Indeterminate) {
      final_verdict = d2;
      route = "dim2";
    }
  }
  report["surjectivity"] = to_json(final_verdict);
  report["surjectivity"]["route"] = route;
  report["surjectivity"]["tolerance"] = route == "dim2" ? json(cls.tol) : report["surjectivity_probe"]["tolerance"];
  if (forced) report["index_profile"] = to_json(*forced);

  Stopwatch t_kernel;
  const KernelProbeResult kernel = kernel_probe(form, solve_options(f));
  report["kernel"] = to_json(kernel);
  report["kernel"]["wall_time_s"] = t_kernel.seconds();

  if (f.veronese) {
    try {
      report["veronese"] = to_json(reduction_check(form, f.samples, f.seed));
    } catch (const SingularGramError& e) {
      report["veronese"] = {{"passed", false}, {"error", e.what()}};
    }
  }

  const bool indeterminate = cls.verdict == Verdict::Indeterminate ||
                             final_verdict.verdict == SurjectivityKind::Indeterminate;
  const int code = indeterminate ? kExitIndeterminate : kExitOk;
  report["exit_code"] = code;

  if (f.json_out) {
    std::cout << report.dump(2) << "\n";
    return code;
  }
  std::cout << "form        " << (doc.name ? *doc.name : path) << "  (n=" << form.n() << ", m=" << form.m()
            << ")\n";
  std::cout << "digest      " << report["input"]["digest"].get<std::string>() << "\n";
  std::cout << "classify    " << to_string(cls.verdict) << "  (best lambda_min " << cls.best_min_eig
            << ", tol " << cls.tol << ")\n";
  if (cls.certificate) {
    if (const auto* d = std::get_if<DefiniteDirection>(&*cls.certificate)) {
      std::cout << "            definite direction " << fmt_vec(d->lambda) << ", margin " << d->margin << "\n";
    } else if (const auto* p = std::get_if<PsdDirection>(&*cls.certificate)) {
      std::cout << "            psd direction " << fmt_vec(p->lambda) << ", lambda_min " << p->min_eig << "\n";
    } else if (const auto* w = std::get_if<InteriorWitness>(&*cls.certificate)) {
      std::cout << "            interior witness with " << w->points.size() << " points\n";
    }
  }
  std::cout << "surjective  " << to_string(final_verdict.verdict) << "  (route " << route << ")\n";
  if (final_verdict.certificate) {
    if (const auto* ft = std::get_if<FailedTarget>(&*final_verdict.certificate)) {
      std::cout << "            unreached target " << fmt_vec(ft->target) << ", best residual "
                << ft->best_residual << "\n";
    } else if (const auto* b = std::get_if<IndexBound>(&*final_verdict.certificate)) {
      std::cout << "            index bound " << b->min_index << (b->exact ? " (exact)" : " (sampled)") << "\n";
    }
  }
  if (probe.profile) {
    std::cout << "index       min " << probe.profile->min_index << (probe.profile->exact ? " (exact)" : " (sampled)")
              << "\n";
  }
  std::cout << "kernel      " << (kernel.u ? "nontrivial zero " + fmt_vec(*kernel.u) : std::string("none found"))
            << "\n";
  if (report.contains("veronese")) {
    std::cout << "veronese    " << (report["veronese"]["passed"].get<bool>() ? "pass" : "FAIL") << "\n";
  }
  for (const auto& d : cls.diagnostics) std::cout << "note        " << d << "\n";
  return code;
}

// --- preimage --------------------------------------------------------------

int cmd_preimage(const std::string& path, const std::vector<double>& target, const CommonFlags& f) {
  const FormDocument doc = load_form_document(path);
  if (target.size() != doc.form.m()) {
    throw InputError("target has " + std::to_string(target.size()) + " components, expected m = " +
                     std::to_string(doc.form.m()));
  }
  const SolveOptions opts = solve_options(f);
  Stopwatch t;
  const PreimageResult res = solve_preimage(doc.form, target, opts);
  const double tol = opts.residual_tol * (1.0 + norm(target));
  json report = header(doc, f);
  report["preimage"] = to_json(res, target, tol);
  report["preimage"]["wall_time_s"] = t.seconds();
  const int code = res.solution ? kExitOk : kExitNoPreimage;
  report["exit_code"] = code;

  if (f.json_out) {
    std::cout << report.dump(2) << "\n";
  } else if (res.solution) {
    std::cout << "solution    " << fmt_vec(*res.solution) << "\n"
              << "residual    " << res.residual_norm << "  (tol " << tol << ", " << res.starts_used
              << " starts)\n";
  } else {
    std::cout << "no preimage found for " << fmt_vec(target) << "\n"
              << "best residual " << res.residual_norm << " after " << res.starts_used << " starts\n";
  }
  return code;
}

// --- generate --------------------------------------------------------------

int cmd_generate(std::size_t n, std::size_t m, const std::string& ensemble, std::uint64_t seed,
                 const std::string& out_path) {
  FormDocument doc{random_form(n, m, ensemble, seed), ensemble + "-" + std::to_string(seed),
                   "generated: n=" + std::to_string(n) + " m=" + std::to_string(m) + " ensemble=" + ensemble +
                       " seed=" + std::to_string(seed)};
  const std::string text = serialize_form_document(doc);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + out_path + "'");
  out << text;
  return kExitOk;
}

// --- veronese-check --------------------------------------------------------

int cmd_veronese(const std::string& path, const CommonFlags& f) {
  const FormDocument doc = load_form_document(path);
  const ReductionReport r = reduction_check(doc.form, f.samples, f.seed);
  const std::size_t n = doc.form.n();
  Vector x(n, 0.0);
  x[0] = 1.0;
  const double angle = cone_angle_with_identity(x);

  json report = header(doc, f);
  report["veronese"] = to_json(r);
  report["veronese"]["cone_angle"] = angle;
  report["veronese"]["cone_angle_expected"] = std::acos(1.0 / std::sqrt(static_cast<double>(n)));
  const int code = r.passed ? kExitOk : kExitCheckFailed;
  report["exit_code"] = code;
  if (f.json_out) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "reduction   " << (r.passed ? "pass" : "FAIL") << "  max deviation " << r.max_deviation
              << " over " << r.samples << " samples (tol " << r.tolerance << ")\n"
              << "cone angle  " << angle << " rad  (arccos(1/sqrt(" << n << ")))\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analyze vector-valued quadratic forms Q(u) = (u^t A_1 u, ..., u^t A_m u)"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommonFlags analyze_flags;
  CommonFlags preimage_flags;
  CommonFlags veronese_flags;
  veronese_flags.samples = 1000;
  std::string input;

  auto* analyze = app.add_subcommand("analyze", "Classify definiteness and surjectivity");
  analyze->add_option("input", input, "Form document (JSON)")->required();
  add_common(analyze, analyze_flags);
  analyze->add_flag("--exact", analyze_flags.exact, "Force the exact m = 2 index sweep or fail");
  analyze->add_flag("--veronese", analyze_flags.veronese, "Also run the projection reduction check");

  std::vector<double> target;
  auto* preimage = app.add_subcommand("preimage", "Solve Q(u) = v");
  preimage->add_option("input", input, "Form document (JSON)")->required();
  preimage->add_option("target", target, "Target vector v (m numbers)")->required()->allow_extra_args();
  add_common(preimage, preimage_flags);

  std::size_t gen_n = 0;
  std::size_t gen_m = 0;
  std::string ensemble;
  std::uint64_t gen_seed = 0;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "Write a seeded random form document");
  generate->add_option("n", gen_n, "Domain dimension")->required()->check(CLI::PositiveNumber);
  generate->add_option("m", gen_m, "Codomain dimension")->required()->check(CLI::PositiveNumber);
  generate->add_option("ensemble", ensemble,
                       "gaussian | traceless-gaussian | definite-planted | indefinite-planted")
      ->required();
  generate->add_option("seed", gen_seed, "Seed")->required();
  generate->add_option("-o,--output", out_path, "Output path (default stdout)");

  auto* veronese = app.add_subcommand("veronese-check", "Check the rank-one cone projection identity");
  veronese->add_option("input", input, "Form document (JSON)")->required();
  add_common(veronese, veronese_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze) return cmd_analyze(input, analyze_flags);
    if (*preimage) return cmd_preimage(input, target, preimage_flags);
    if (*generate) return cmd_generate(gen_n, gen_m, ensemble, gen_seed, out_path);
    if (*veronese) return cmd_veronese(input, veronese_flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
