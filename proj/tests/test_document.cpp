#include <doctest.h>

#include <random>
#include <regex>

#include "support.hpp"
#include "vqf/document.hpp"
#include "vqf/error.hpp"

using namespace vqf;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(VQF_FIXTURE_DIR) + "/" + name; }

std::string error_of(const std::string& text) {
  try {
    parse_form_document(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("fixtures load as the named forms") {
  CHECK(load_form_document(fixture("trident.json")).form == test::trident());
  CHECK(load_form_document(fixture("twist.json")).form == test::twist());
  CHECK(load_form_document(fixture("axes.json")).form == test::axes());
  CHECK(load_form_document(fixture("hyperbola.json")).form == test::hyperbola());
  CHECK(load_form_document(fixture("twist.json")).name == "twist");
  CHECK_THROWS_AS(load_form_document(fixture("missing.json")), InputError);
}

TEST_CASE("serialization round-trips bit-exactly") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    FormDocument doc{random_form(1 + seed % 5, 1 + seed % 3, "gaussian", seed), std::nullopt, std::nullopt};
    if (seed % 2) doc.name = "form " + std::to_string(seed);
    if (seed % 3) doc.notes = "notes with \"quotes\" and unicode é";
    const std::string text = serialize_form_document(doc);
    const FormDocument back = parse_form_document(text);
    CHECK(back == doc);
    CHECK(serialize_form_document(back) == text);
  }
  // Values with long shortest representations.
  const double awkward = 0.1 + 0.2;
  const FormDocument doc{VQForm({SymmetricMatrix{{awkward, 1e-300}, {1e-300, -5e307}}}), std::nullopt, std::nullopt};
  CHECK(parse_form_document(serialize_form_document(doc)) == doc);
}

TEST_CASE("parse errors name the offending field") {
  CHECK(error_of("{\"schema_version\": \"1\", \"n\": 2,,}").find("line 1") != std::string::npos);
  CHECK(error_of("[1, 2]").find("top level") != std::string::npos);
  CHECK(error_of(R"({"n": 1, "m": 1, "matrices": [[[1]]]})").find("schema_version") != std::string::npos);
  CHECK(error_of(R"({"schema_version": "2", "n": 1, "m": 1, "matrices": [[[1]]]})").find("unsupported") !=
        std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "m": 1, "matrices": [[[1]]]})").find("'n'") != std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "n": 1, "m": 2, "matrices": [[[1]]]})").find("'matrices'") !=
        std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "n": 2, "m": 1, "matrices": [[[1, 2], [3, 1]]]})")
            .find("matrices[0]") != std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "n": 2, "m": 1, "matrices": [[[1, "x"], [0, 1]]]})")
            .find("matrices[0][0][1]") != std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "n": 2, "m": 1, "matrices": [[[1, 0]]]})").find("rows") !=
        std::string::npos);
  CHECK(error_of(R"({"schema_version": "1", "n": 0, "m": 1, "matrices": []})").find("positive") !=
        std::string::npos);
}

TEST_CASE("form digest") {
  const FormDocument a = load_form_document(fixture("twist.json"));
  const std::string d = form_digest(a);
  CHECK(std::regex_match(d, std::regex("sha256:[0-9a-f]{64}")));
  CHECK(form_digest(parse_form_document(serialize_form_document(a))) == d);
  FormDocument b = a;
  b.form = test::axes();
  CHECK(form_digest(b) != d);
}

TEST_CASE("certificate JSON round trips") {
  const std::vector<Certificate> certs = {DefiniteDirection{{0.6, 0.8}, 0.25}, PsdDirection{{1.0}, -1e-9},
                                          InteriorWitness{{{1, 0}, {0, 1}}, {0.5, 0.5}}};
  for (const auto& c : certs) {
    const json j = json::parse(certificate_to_json(c).dump());
    const Certificate back = certificate_from_json(j);
    CHECK(back.index() == c.index());
    CHECK(certificate_to_json(back) == certificate_to_json(c));
  }
  const std::vector<SurjectivityCertificate> scerts = {IndexBound{1, true}, FailedTarget{{0.6, -0.8}, 0.5, 32},
                                                       PsdDirection{{0.0, 1.0}, 0.0}};
  for (const auto& c : scerts) {
    const SurjectivityCertificate back = surjectivity_certificate_from_json(surjectivity_certificate_to_json(c));
    CHECK(surjectivity_certificate_to_json(back) == surjectivity_certificate_to_json(c));
  }
  CHECK_THROWS_AS(certificate_from_json(json{{"type", "IndexBound"}}), InputError);
  CHECK_THROWS_AS(certificate_from_json(json{{"lambda", {1.0}}}), InputError);
  CHECK_THROWS_AS(certificate_from_json(json{{"type", "DefiniteDirection"}, {"lambda", {1.0}}}), InputError);
}

TEST_CASE("reports re-verify, and tampering is caught") {
  const VQForm tri = test::trident();
  json report;
  report["classification"] = to_json(classify(tri));
  report["surjectivity_probe"] = to_json(surjectivity_probe(tri));
  report["kernel"] = to_json(kernel_probe(tri));
  const Vector v{1, 1, 1};
  const PreimageResult pr = solve_preimage(tri, v);
  report["preimage"] = to_json(pr, v, 1e-10 * (1.0 + norm(v)));
  const json reloaded = json::parse(report.dump());
  CHECK(reverify_report(tri, reloaded).empty());

  json bad = reloaded;
  bad["classification"]["certificate"]["weights"][0] = 0.0;
  CHECK(reverify_report(tri, bad).size() == 1);

  bad = reloaded;
  bad["kernel"]["u"] = {0.6, 0.8, 0.0};
  CHECK(reverify_report(tri, bad).size() == 1);

  bad = reloaded;
  bad["preimage"]["target"] = {1, 1, 2};
  CHECK(reverify_report(tri, bad).size() == 1);

  bad = reloaded;
  bad["classification"].erase("tolerance");
  CHECK_FALSE(reverify_report(tri, bad).empty());

  const VQForm ax = test::axes();
  json axr;
  axr["classification"] = to_json(classify(ax));
  axr["dim2"] = to_json(dim2_decide(ax));
  axr["index_profile"] = to_json(index_profile_exact(ax));
  CHECK(reverify_report(ax, axr).empty());
  axr["dim2"]["certificate"]["lambda"] = {-0.6, -0.8};
  CHECK(reverify_report(ax, axr).size() == 1);
}
