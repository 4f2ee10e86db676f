#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace epcgh {

struct ResultRow {
  std::string experiment;
  std::string subject;  // k or spec name
  std::string metric;
  double value = 0.0;
  std::optional<double> reference;
  std::optional<double> tolerance;
  std::optional<bool> pass;
  std::string note;  // provenance of the reference value, if any

  /// Sets `pass` from |value - reference| <= tolerance when both are present.
  static ResultRow make(std::string experiment, std::string subject, std::string metric, double value,
                        std::optional<double> reference = std::nullopt,
                        std::optional<double> tolerance = std::nullopt, std::string note = {});
};

struct ExperimentRecipe {
  std::string name;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
};

/// Tabulated dis(gamma_{2k+1}) for k = 1..6, to four decimals.
const std::vector<double>& reference_dis_gamma();

std::vector<ResultRow> run_table_dis_gamma(int k_max);
ResultRow run_dis_rn(int k, std::uint64_t budget, std::uint64_t seed, int threads = 0);
/// Total first, then the two summands.
std::vector<ResultRow> run_gh_upper_s1s3(std::uint64_t samples = 1'000'000, std::uint64_t seed = 42,
                                         int threads = 0);

struct Rho3Profile {
  std::vector<ResultRow> rows;
  std::vector<std::pair<double, double>> curve;  // (theta, rho3(theta))
};
Rho3Profile run_rho3_profile(int grid);

/// 15 significant digits, shortest form.
std::string format_number(double v);

/// CSV with `# ` comment lines for each distinct provenance note, then a header row.
std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows, const ExperimentRecipe& recipe);
/// Two-column CSV of a sampled curve.
std::string curve_to_csv(const std::vector<std::pair<double, double>>& curve, const std::string& x,
                         const std::string& y);

/// SHA-1 of "blob <size>\0<content>", hex encoded.
std::string content_hash(const std::string& content);
/// Hash of the recipe name and its sorted parameters.
std::string recipe_hash(const ExperimentRecipe& recipe);

}  // namespace epcgh
