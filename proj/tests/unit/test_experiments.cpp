#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "epcgh/curves.hpp"
#include "epcgh/experiments.hpp"

using namespace epcgh;

namespace {
const ResultRow* find(const std::vector<ResultRow>& rows, const std::string& subject, const std::string& metric) {
  for (const auto& r : rows)
    if (r.subject == subject && r.metric == metric) return &r;
  return nullptr;
}
}  // namespace

TEST_CASE("pass flag") {
  CHECK(ResultRow::make("e", "1", "m", 1.0, 1.0005, 1e-3).pass.value());
  CHECK_FALSE(ResultRow::make("e", "1", "m", 1.0, 1.01, 1e-3).pass.value());
  CHECK_FALSE(ResultRow::make("e", "1", "m", 1.0, 1.0).pass.has_value());
  CHECK_FALSE(ResultRow::make("e", "1", "m", 1.0).pass.has_value());
}

TEST_CASE("dis_gamma table") {
  const auto rows = run_table_dis_gamma(8);
  for (int k = 1; k <= 6; ++k) {
    const ResultRow* r = find(rows, std::to_string(k), "dis_gamma");
    REQUIRE(r);
    CHECK(r->pass.value());
  }
  CHECK(std::abs(find(rows, "2", "dis_gamma")->value - 1.1114) < 1e-3);
  CHECK_FALSE(find(rows, "7", "dis_gamma")->reference.has_value());
  CHECK(find(rows, "5", "dis_gamma")->value > find(rows, "5", "half_delta_k")->value);
  CHECK(find(rows, "5", "exceeds_half_delta")->value == 1.0);
  CHECK(find(rows, "6", "exceeds_half_delta")->value == 1.0);
  CHECK(find(rows, "4", "exceeds_half_delta")->value == 0.0);
  CHECK(std::abs(find(rows, "5", "half_delta_k")->value - 1.4280) < 1e-4);
  CHECK(find(rows, "all", "strictly_increasing")->value == 1.0);
  CHECK_THROWS_AS(run_table_dis_gamma(0), DomainError);
  CHECK_THROWS_AS(run_table_dis_gamma(9), DomainError);
}

TEST_CASE("dis_rn range and k = 1 row") {
  CHECK_THROWS_AS(run_dis_rn(5, 1000, 42), DomainError);
  CHECK_THROWS_AS(run_dis_rn(0, 1000, 42), DomainError);
  const ResultRow r = run_dis_rn(1, 20000, 42);
  CHECK(r.reference.value() == doctest::Approx(2 * kPi / 3));
  CHECK(r.value <= 2 * kPi / 3 + 1e-3);
}

TEST_CASE("rho3 profile rows") {
  const Rho3Profile p = run_rho3_profile(2001);
  CHECK(p.curve.size() == 2001);
  for (const auto& r : p.rows)
    if (r.pass) CHECK(*r.pass);
  CHECK(find(p.rows, "1", "asymmetry")->value < 1e-10);
  CHECK_THROWS_AS(run_rho3_profile(999), DomainError);
}

TEST_CASE("csv format") {
  CHECK(rows_to_csv({}) == "experiment,subject,metric,value,reference,tolerance,pass\n");
  const auto rows = run_table_dis_gamma(2);
  const std::string csv = rows_to_csv(rows);
  CHECK(csv.rfind("# ", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.find("table_dis_gamma,1,dis_gamma,0.812") != std::string::npos);
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(2.0) == "2");
  CHECK(csv == rows_to_csv(run_table_dis_gamma(2)));
  // every referenced row's note appears in the comment header
  for (const auto& r : rows)
    if (r.reference) CHECK(csv.find("# " + r.note + "\n") != std::string::npos);
}

TEST_CASE("json summary and content hashes") {
  // git hash-object of an empty blob and of "hello\n"
  CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  ExperimentRecipe rec{"table-dis-gamma", {{"kmax", "2"}, {"seed", "42"}}, {"table-dis-gamma.csv"}};
  const auto j = nlohmann::json::parse(rows_to_json(run_table_dis_gamma(2), rec));
  CHECK(j["recipe"] == "table-dis-gamma");
  CHECK(j["parameters"]["kmax"] == "2");
  CHECK(j["input_hash"] == recipe_hash(rec));
  CHECK(j["rows"].size() == 9);
  ExperimentRecipe other = rec;
  other.parameters["seed"] = "43";
  CHECK(recipe_hash(other) != recipe_hash(rec));
  CHECK(nlohmann::json::parse(rows_to_json({}, rec))["rows"].empty());
}

TEST_CASE("curve csv") {
  const std::string s = curve_to_csv({{0.0, 1.0}, {0.5, 0.25}}, "theta", "rho3");
  CHECK(s == "theta,rho3\n0,1\n0.5,0.25\n");
}
