#include "epcgh/experiments.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

#include "epcgh/curves.hpp"
#include "epcgh/epc.hpp"
#include "epcgh/fiber3.hpp"

namespace epcgh {

ResultRow ResultRow::make(std::string experiment, std::string subject, std::string metric, double value,
                          std::optional<double> reference, std::optional<double> tolerance, std::string note) {
  ResultRow r;
  r.experiment = std::move(experiment);
  r.subject = std::move(subject);
  r.metric = std::move(metric);
  r.value = value;
  r.reference = reference;
  r.tolerance = tolerance;
  r.note = std::move(note);
  if (reference && tolerance) r.pass = std::abs(value - *reference) <= *tolerance;
  return r;
}

const std::vector<double>& reference_dis_gamma() {
  static const std::vector<double> v{0.8128, 1.1114, 1.2694, 1.3676, 1.4345, 1.4831};
  return v;
}

namespace {
const char* kTableNote = "reference: tabulated dis(gamma_{2k+1}), four decimals";
const char* kDeltaNote = "reference: delta_k = 2 pi k / (2k+1), conjectured distortion of R_{2k+1}";
const char* kGhNote = "reference: 1/2 dis(gamma_3) + covering radius of gamma_3, quoted as 1.3293";
const char* kCovNote = "reference: covering radius of gamma_3 in S^3, quoted as 0.9229";
const char* kRhoNote = "reference: extrema of rho_3 on the fiber boundary, quoted as 0.9232 / 0.6476";
}  // namespace

std::vector<ResultRow> run_table_dis_gamma(int k_max) {
  if (k_max < 1 || k_max > 8) throw DomainError("k_max must lie in [1, 8]");
  const auto& ref = reference_dis_gamma();
  std::vector<ResultRow> rows;
  double prev = -1.0;
  bool monotone = true;
  for (int k = 1; k <= k_max; ++k) {
    const std::string kk = std::to_string(k);
    const double d = dis_gamma(k);
    const double dk = delta_k(k);
    if (k <= static_cast<int>(ref.size()))
      rows.push_back(ResultRow::make("table_dis_gamma", kk, "dis_gamma", d, ref[k - 1], 1e-3, kTableNote));
    else
      rows.push_back(ResultRow::make("table_dis_gamma", kk, "dis_gamma", d));
    rows.push_back(ResultRow::make("table_dis_gamma", kk, "half_delta_k", 0.5 * dk));
    rows.push_back(ResultRow::make("table_dis_gamma", kk, "delta_k", dk));
    ResultRow cross = ResultRow::make("table_dis_gamma", kk, "exceeds_half_delta", d > 0.5 * dk ? 1.0 : 0.0);
    if (d > 0.5 * dk) cross.note = "dis(gamma) above delta_k/2";
    rows.push_back(cross);
    monotone = monotone && d > prev;
    prev = d;
  }
  rows.push_back(ResultRow::make("table_dis_gamma", "all", "strictly_increasing", monotone ? 1.0 : 0.0));
  return rows;
}

ResultRow run_dis_rn(int k, std::uint64_t budget, std::uint64_t seed, int threads) {
  if (k < 1 || k > 4) throw DomainError("dis-rn supports k in [1, 4]");
  const DistortionEstimate e = estimate_distortion(EpcSpec::tmc_odd(k), budget, seed, true, threads);
  const double tol = k == 1 ? 5e-3 : 2e-2;
  return ResultRow::make("dis_rn", std::to_string(k), "dis_estimate", e.value, delta_k(k), tol, kDeltaNote);
}

std::vector<ResultRow> run_gh_upper_s1s3(std::uint64_t samples, std::uint64_t seed, int threads) {
  const double half = 0.5 * dis_gamma(1);
  const double cov = covering_radius(EpcSpec::tmc_odd(1), samples, seed, threads);
  std::vector<ResultRow> rows;
  rows.push_back(ResultRow::make("gh_upper_s1s3", "1", "gh_upper_bound", half + cov, 1.3293, 5e-3, kGhNote));
  rows.push_back(
      ResultRow::make("gh_upper_s1s3", "1", "half_dis_gamma", half, 0.5 * reference_dis_gamma()[0], 1e-3, kTableNote));
  rows.push_back(ResultRow::make("gh_upper_s1s3", "1", "covering_radius", cov, 0.9229, 5e-3, kCovNote));
  return rows;
}

Rho3Profile run_rho3_profile(int grid) {
  if (grid < 1000) throw DomainError("rho3 profile grid must be at least 1000");
  Rho3Profile p;
  const double a = kPi / 3.0;
  double asym = 0.0;
  p.curve.reserve(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) {
    const double th = std::min(a, -a + 2.0 * a * i / (grid - 1));
    p.curve.emplace_back(th, rho3(th));
  }
  for (int i = 0; i < grid; ++i)
    asym = std::max(asym, std::abs(p.curve[i].second - p.curve[grid - 1 - i].second));
  const Rho3Extrema e = rho3_extrema(grid);
  p.rows.push_back(ResultRow::make("rho3_profile", "1", "rho3_max", e.max_value, 0.9232, 1e-3, kRhoNote));
  p.rows.push_back(ResultRow::make("rho3_profile", "1", "rho3_argmax", e.argmax));
  p.rows.push_back(ResultRow::make("rho3_profile", "1", "rho3_min", e.min_value, 0.6476, 1e-3, kRhoNote));
  p.rows.push_back(ResultRow::make("rho3_profile", "1", "rho3_argmin", e.argmin));
  p.rows.push_back(ResultRow::make("rho3_profile", "1", "asymmetry", asym, 0.0, 1e-10));
  return p;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::string opt_num(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + "\"";
}

}  // namespace

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  std::set<std::string> seen;
  for (const auto& r : rows)
    if (r.reference && !r.note.empty() && seen.insert(r.note).second) os << "# " << r.note << '\n';
  os << "experiment,subject,metric,value,reference,tolerance,pass\n";
  for (const auto& r : rows) {
    os << csv_field(r.experiment) << ',' << csv_field(r.subject) << ',' << csv_field(r.metric) << ','
       << format_number(r.value) << ',' << opt_num(r.reference) << ',' << opt_num(r.tolerance) << ','
       << (r.pass ? (*r.pass ? "true" : "false") : "") << '\n';
  }
  return os.str();
}

std::string curve_to_csv(const std::vector<std::pair<double, double>>& curve, const std::string& x,
                         const std::string& y) {
  std::ostringstream os;
  os << x << ',' << y << '\n';
  for (const auto& [a, b] : curve) os << format_number(a) << ',' << format_number(b) << '\n';
  return os.str();
}

std::string content_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string recipe_hash(const ExperimentRecipe& recipe) {
  std::string s = recipe.name + '\n';
  for (const auto& [k, v] : recipe.parameters) s += k + '=' + v + '\n';
  return content_hash(s);
}

std::string rows_to_json(const std::vector<ResultRow>& rows, const ExperimentRecipe& recipe) {
  nlohmann::ordered_json j;
  j["recipe"] = recipe.name;
  j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : recipe.parameters) j["parameters"][k] = v;
  j["input_hash"] = recipe_hash(recipe);
  j["outputs"] = recipe.outputs;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["experiment"] = r.experiment;
    o["subject"] = r.subject;
    o["metric"] = r.metric;
    o["value"] = r.value;
    o["reference"] = r.reference ? nlohmann::ordered_json(*r.reference) : nlohmann::ordered_json(nullptr);
    o["tolerance"] = r.tolerance ? nlohmann::ordered_json(*r.tolerance) : nlohmann::ordered_json(nullptr);
    o["pass"] = r.pass ? nlohmann::ordered_json(*r.pass) : nlohmann::ordered_json(nullptr);
    if (!r.note.empty()) o["note"] = r.note;
    j["rows"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

}  // namespace epcgh
