#include "vqf/document.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "vqf/error.hpp"

namespace vqf {

using nlohmann::json;

namespace {

std::size_t require_count(const json& j, const char* field) {
  if (!j.contains(field)) throw InputError(std::string("form document: missing field '") + field + "'");
  const json& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw InputError(std::string("form document: '") + field + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

Vector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
  Vector out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw InputError(where + "[" + std::to_string(k) + "]: expected a number");
    out.push_back(j[k].get<double>());
  }
  return out;
}

json vector_to_json(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

std::optional<std::string> optional_string(const json& j, const char* field) {
  if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
  if (!j.at(field).is_string()) throw InputError(std::string("form document: '") + field + "' must be a string");
  return j.at(field).get<std::string>();
}

json matrix_rows(const SymmetricMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string hex(const unsigned char* data, unsigned len) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned k = 0; k < len; ++k) {
    out.push_back(kDigits[data[k] >> 4]);
    out.push_back(kDigits[data[k] & 0xF]);
  }
  return out;
}

}  // namespace

// --- form documents ---------------------------------------------------------

FormDocument parse_form_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("form document: ") + e.what());
  }
  if (!j.is_object()) throw InputError("form document: top level must be an object");
  if (!j.contains("schema_version") || !j.at("schema_version").is_string()) {
    throw InputError("form document: missing string field 'schema_version'");
  }
  if (j.at("schema_version").get<std::string>() != kSchemaVersion) {
    throw InputError("form document: unsupported schema_version '" +
                     j.at("schema_version").get<std::string>() + "' (expected \"1\")");
  }
  const std::size_t n = require_count(j, "n");
  const std::size_t m = require_count(j, "m");
  if (!j.contains("matrices") || !j.at("matrices").is_array()) {
    throw InputError("form document: missing array field 'matrices'");
  }
  const json& mats = j.at("matrices");
  if (mats.size() != m) {
    throw InputError("form document: 'matrices' has " + std::to_string(mats.size()) +
                     " entries but m = " + std::to_string(m));
  }

  std::vector<SymmetricMatrix> parsed;
  for (std::size_t k = 0; k < m; ++k) {
    const std::string where = "matrices[" + std::to_string(k) + "]";
    const json& rows = mats[k];
    if (!rows.is_array() || rows.size() != n) {
      throw InputError("form document: " + where + " must have n = " + std::to_string(n) + " rows");
    }
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector row = vector_from_json(rows[i], "form document: " + where + "[" + std::to_string(i) + "]");
      if (row.size() != n) {
        throw InputError("form document: " + where + "[" + std::to_string(i) + "] must have " +
                         std::to_string(n) + " entries");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    try {
      parsed.emplace_back(n, std::move(flat));
    } catch (const InputError& e) {
      throw InputError("form document: " + where + ": " + e.what());
    }
  }
  return FormDocument{VQForm(std::move(parsed)), optional_string(j, "name"), optional_string(j, "notes")};
}

FormDocument load_form_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_form_document(buf.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string serialize_form_document(const FormDocument& doc) {
  json j = json::object();
  j["schema_version"] = kSchemaVersion;
  if (doc.name) j["name"] = *doc.name;
  if (doc.notes) j["notes"] = *doc.notes;
  j["n"] = doc.form.n();
  j["m"] = doc.form.m();
  json mats = json::array();
  for (const auto& a : doc.form.matrices()) mats.push_back(matrix_rows(a));
  j["matrices"] = std::move(mats);
  return j.dump(2) + "\n";
}

std::string form_digest(const FormDocument& doc) {
  const std::string text = serialize_form_document(doc);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw NumericError("form_digest: SHA-256 failed");
  }
  return "sha256:" + hex(md, len);
}

// --- certificates -----------------------------------------------------------

json certificate_to_json(const Certificate& cert) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, DefiniteDirection>) {
          return {{"type", "DefiniteDirection"}, {"lambda", vector_to_json(c.lambda)}, {"margin", c.margin}};
        } else if constexpr (std::is_same_v<T, PsdDirection>) {
          return {{"type", "PsdDirection"}, {"lambda", vector_to_json(c.lambda)}, {"min_eig", c.min_eig}};
        } else {
          json pts = json::array();
          for (const auto& u : c.points) pts.push_back(vector_to_json(u));
          return {{"type", "InteriorWitness"}, {"points", std::move(pts)}, {"weights", vector_to_json(c.weights)}};
        }
      },
      cert);
}

Certificate certificate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw InputError("certificate: missing 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "DefiniteDirection") {
      return DefiniteDirection{vector_from_json(j.at("lambda"), "lambda"), j.at("margin").get<double>()};
    }
    if (type == "PsdDirection") {
      return PsdDirection{vector_from_json(j.at("lambda"), "lambda"), j.at("min_eig").get<double>()};
    }
    if (type == "InteriorWitness") {
      InteriorWitness w;
      const json& pts = j.at("points");
      if (!pts.is_array()) throw InputError("certificate: 'points' must be an array");
      for (std::size_t k = 0; k < pts.size(); ++k) {
        w.points.push_back(vector_from_json(pts[k], "points[" + std::to_string(k) + "]"));
      }
      w.weights = vector_from_json(j.at("weights"), "weights");
      return w;
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  throw InputError("certificate: unknown type '" + type + "'");
}

json surjectivity_certificate_to_json(const SurjectivityCertificate& cert) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IndexBound>) {
          return {{"type", "IndexBound"}, {"min_index", c.min_index}, {"exact", c.exact}};
        } else if constexpr (std::is_same_v<T, FailedTarget>) {
          return {{"type", "FailedTarget"},
                  {"target", vector_to_json(c.target)},
                  {"best_residual", c.best_residual},
                  {"starts", c.starts}};
        } else {
          return certificate_to_json(Certificate{c});
        }
      },
      cert);
}

SurjectivityCertificate surjectivity_certificate_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw InputError("certificate: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "IndexBound") return IndexBound{j.at("min_index").get<int>(), j.at("exact").get<bool>()};
    if (type == "FailedTarget") {
      return FailedTarget{vector_from_json(j.at("target"), "target"), j.at("best_residual").get<double>(),
                          j.at("starts").get<int>()};
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("certificate: ") + e.what());
  }
  const Certificate c = certificate_from_json(j);
  if (const auto* p = std::get_if<PsdDirection>(&c)) return *p;
  if (const auto* w = std::get_if<InteriorWitness>(&c)) return *w;
  throw InputError("certificate: '" + type + "' is not a surjectivity certificate");
}

// --- report sections --------------------------------------------------------

json to_json(const Classification& c) {
  json j = {{"verdict", to_string(c.verdict)},
            {"tolerance", c.tol},
            {"best_min_eig", c.best_min_eig},
            {"budget",
             {{"ascent_iterations", c.budget.ascent_iterations},
              {"restarts", c.budget.restarts},
              {"samples", c.budget.samples},
              {"lp_pivots", c.budget.lp_pivots},
              {"grid_nodes", c.budget.grid_nodes}}},
            {"diagnostics", c.diagnostics}};
  j["certificate"] = c.certificate ? certificate_to_json(*c.certificate) : json(nullptr);
  return j;
}

json to_json(const IndexProfile& p) {
  json entries = json::array();
  for (const auto& e : p.entries) {
    entries.push_back({{"lambda", vector_to_json(e.lambda)},
                       {"inertia", {e.inertia.n_plus, e.inertia.n_minus, e.inertia.n_zero}},
                       {"tol", e.inertia.tol}});
  }
  return {{"min_index", p.min_index},
          {"exact", p.exact},
          {"singular_angles", p.singular_angles},
          {"entries", std::move(entries)},
          {"diagnostics", p.diagnostics}};
}

json to_json(const SurjectivityVerdict& v) {
  json j = {{"verdict", to_string(v.verdict)},
            {"targets_solved", v.targets_solved},
            {"diagnostics", v.diagnostics}};
  j["certificate"] = v.certificate ? surjectivity_certificate_to_json(*v.certificate) : json(nullptr);
  if (v.profile) {
    // The per-arc entries of sampled profiles are bulky; keep the summary.
    json prof = to_json(*v.profile);
    if (!v.profile->exact) prof.erase("entries");
    j["profile"] = std::move(prof);
  }
  return j;
}

json to_json(const KernelProbeResult& k) {
  json j = {{"found", k.u.has_value()}, {"best_residual", k.best_residual}, {"tolerance", k.tol}, {"starts", k.starts}};
  j["u"] = k.u ? vector_to_json(*k.u) : json(nullptr);
  return j;
}

json to_json(const PreimageResult& r, std::span<const double> target, double tol) {
  json j = {{"target", vector_to_json(target)},
            {"found", r.solution.has_value()},
            {"residual_norm", r.residual_norm},
            {"tolerance", tol},
            {"starts_used", r.starts_used},
            {"trace", r.trace},
            {"best", vector_to_json(r.best)}};
  j["solution"] = r.solution ? vector_to_json(*r.solution) : json(nullptr);
  return j;
}

json to_json(const ReductionReport& r) {
  return {{"passed", r.passed},
          {"samples", r.samples},
          {"max_deviation", r.max_deviation},
          {"tolerance", r.tolerance},
          {"worst_sample", vector_to_json(r.worst_sample)}};
}

// --- re-verification --------------------------------------------------------

std::vector<std::string> reverify_report(const VQForm& form, const json& report) {
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };
  try {
    if (report.contains("classification")) {
      const json& c = report.at("classification");
      if (!c.at("certificate").is_null()) {
        check(verify_certificate(form, certificate_from_json(c.at("certificate")), c.at("tolerance").get<double>()),
              "classification certificate");
      }
    }
    for (const char* section : {"surjectivity", "surjectivity_probe", "dim2"}) {
      if (!report.contains(section)) continue;
      const json& s = report.at(section);
      if (s.at("certificate").is_null()) continue;
      const auto cert = surjectivity_certificate_from_json(s.at("certificate"));
      const std::string label = std::string(section) + " certificate";
      if (const auto* b = std::get_if<IndexBound>(&cert)) {
        if (b->exact) {
          const IndexProfile p = index_profile_exact(form);
          check(p.exact && p.min_index == b->min_index, label);
        }
      } else if (const auto* p = std::get_if<PsdDirection>(&cert)) {
        const double tol = s.contains("tolerance") ? s.at("tolerance").get<double>() : 0.0;
        check(verify_certificate(form, *p, tol), label);
      } else if (const auto* w = std::get_if<InteriorWitness>(&cert)) {
        check(verify_certificate(form, *w), label);
      } else if (const auto* f = std::get_if<FailedTarget>(&cert)) {
        check(f->target.size() == form.m() && std::abs(norm(f->target) - 1.0) < 1e-12, label);
      }
    }
    if (report.contains("kernel") && report.at("kernel").at("found").get<bool>()) {
      const json& k = report.at("kernel");
      const Vector u = vector_from_json(k.at("u"), "kernel.u");
      check(verify_preimage(form, u, Vector(form.m(), 0.0), k.at("tolerance").get<double>()), "kernel vector");
    }
    if (report.contains("preimage") && report.at("preimage").at("found").get<bool>()) {
      const json& p = report.at("preimage");
      check(verify_preimage(form, vector_from_json(p.at("solution"), "preimage.solution"),
                            vector_from_json(p.at("target"), "preimage.target"), p.at("tolerance").get<double>()),
            "preimage solution");
    }
  } catch (const json::exception& e) {
    failures.push_back(std::string("malformed report: ") + e.what());
  } catch (const InputError& e) {
    failures.push_back(std::string("malformed report: ") + e.what());
  }
  return failures;
}

}  // namespace vqf
