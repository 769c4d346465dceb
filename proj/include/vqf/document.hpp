#pragma once

// On-disk forms and analysis reports (JSON, schema_version "1").
//
// Form document:
//   {
//     "schema_version": "1",
//     "name": "twist",                       (optional)
//     "notes": "...",                        (optional)
//     "n": 2, "m": 2,
//     "matrices": [ [[1.0, 0.0], [0.0, -1.0]], [[0.0, 0.5], [0.5, 0.0]] ]
//   }
//
// A monomial x_i x_j (i != j) contributes 1/2 to entries (i,j) and (j,i).
// Doubles are written in shortest round-trip form, so parse(serialize(f))
// reproduces every matrix bit-for-bit.

#include <optional>
#include <string>

#include <json.hpp>

#include "vqf/classify.hpp"
#include "vqf/preimage.hpp"
#include "vqf/surjectivity.hpp"
#include "vqf/veronese.hpp"

namespace vqf {

inline constexpr const char* kSchemaVersion = "1";

struct FormDocument {
  VQForm form;
  std::optional<std::string> name;
  std::optional<std::string> notes;

  friend bool operator==(const FormDocument&, const FormDocument&) = default;
};

/// Throws InputError naming the offending field (and line/column for syntax
/// errors).
FormDocument parse_form_document(const std::string& text);
FormDocument load_form_document(const std::string& path);

/// Canonical text: two-space indentation, trailing newline.
std::string serialize_form_document(const FormDocument& doc);

/// "sha256:<hex>" of the canonical serialization.
std::string form_digest(const FormDocument& doc);

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);
nlohmann::json surjectivity_certificate_to_json(const SurjectivityCertificate& cert);
SurjectivityCertificate surjectivity_certificate_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Classification& c);
nlohmann::json to_json(const SurjectivityVerdict& v);
nlohmann::json to_json(const IndexProfile& p);
nlohmann::json to_json(const KernelProbeResult& k);
nlohmann::json to_json(const PreimageResult& r, std::span<const double> target, double tol);
nlohmann::json to_json(const ReductionReport& r);

/// Re-verifies every certificate embedded in a report produced by the CLI
/// (classification, surjectivity, kernel and preimage sections). Returns the
/// list of failures; empty means everything checks out.
std::vector<std::string> reverify_report(const VQForm& form, const nlohmann::json& report);

}  // namespace vqf
