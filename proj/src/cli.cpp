#include "epcgh/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>

#include "epcgh/acceptance.hpp"
#include "epcgh/curves.hpp"
#include "epcgh/duality.hpp"
#include "epcgh/epc.hpp"
#include "epcgh/fiber3.hpp"
#include "epcgh/verifier.hpp"

namespace epcgh {

namespace {

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  int kmax = 6;
  int k = 1;
  double budget = 1e6;
  double samples = 1e6;
  std::string spec;
  int rho_grid = 20000;
  int fiber_grid = 1000;
  double zeta = 0.0;
  double theta = kPi;
  double slack = 1e-6;
  int max_depth = 50;
  std::vector<double> params;
  std::vector<int> criteria;
  std::string format = "csv";
  std::string out_dir;
  std::uint64_t seed = 42;
  int threads = 0;
};

using Handler = std::function<int(const Opts&, const CliConfig&, std::ostream&)>;

struct Subcommand {
  const char* name;
  const char* description;
  std::function<void(CLI::App&, Opts&)> flags;
  Handler run;
};

std::string fmt(double v) { return format_number(v); }

std::ofstream open_output(const CliConfig& c, const std::string& file) {
  std::error_code ec;
  std::filesystem::create_directories(c.output_dir, ec);
  if (ec || !std::filesystem::is_directory(c.output_dir))
    throw OutputError("cannot create output directory '" + c.output_dir + "'");
  const std::string path = (std::filesystem::path(c.output_dir) / file).string();
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw OutputError("cannot write '" + path + "'");
  return f;
}

std::string write_file(const CliConfig& c, const std::string& file, const std::string& content) {
  auto f = open_output(c, file);
  f << content;
  f.flush();
  if (!f) throw OutputError("write failed for '" + file + "'");
  return (std::filesystem::path(c.output_dir) / file).string();
}

int exit_for(const std::vector<ResultRow>& rows) {
  for (const auto& r : rows)
    if (r.pass && !*r.pass) return kExitCheckFailed;
  return kExitOk;
}

ExperimentRecipe recipe(const std::string& name, std::map<std::string, std::string> params) {
  return {name, std::move(params), {}};
}

int finish(std::vector<ResultRow> rows, ExperimentRecipe rec, const std::string& stem, const CliConfig& c,
           std::ostream& out) {
  emit(rows, rec, stem, c, out);
  return exit_for(rows);
}

std::uint64_t count(double v) { return static_cast<std::uint64_t>(std::llround(v)); }

// Reference distortion for a spec, where one is known or conjectured.
void attach_dis_reference(const EpcSpec& s, ResultRow& r) {
  std::optional<double> ref, tol;
  std::string note;
  switch (s.kind) {
    case EmbeddingKind::TmcOdd:
    case EmbeddingKind::TmcEven:
      ref = delta_k(s.k);
      tol = (s.kind == EmbeddingKind::TmcOdd && s.k == 1) ? 5e-3 : 2e-2;
      note = "reference: delta_k = 2 pi k / (2k+1), conjectured distortion of R_{2k+1} and R_{2k}";
      break;
    case EmbeddingKind::Alpha:
      ref = 2.0 * kPi / 3.0;
      tol = 1e-2;
      note = "reference: dis(R_alpha) = 2 pi / 3";
      break;
    case EmbeddingKind::Sigma:
      ref = zeta_m(2);
      tol = 2e-2;
      note = "reference: dis(R_sigma) = arccos(-1/3)";
      break;
    case EmbeddingKind::Equatorial:
      ref = kPi;
      tol = 2e-2;
      note = "reference: equatorial inclusion has distortion pi";
      break;
  }
  r = ResultRow::make(r.experiment, r.subject, r.metric, r.value, ref, tol, note);
}

void common_flags(CLI::App& app, Opts& o) {
  app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  app.add_option("--out-dir", o.out_dir, std::string("output directory (default: $") + kOutDirEnv + " or ./results)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads, 0 = hardware parallelism")
      ->check(CLI::Range(0, 1024))
      ->capture_default_str();
}

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> subs = {
      {"table-dis-gamma", "dis(gamma_{2k+1}) next to delta_k/2 and delta_k",
       [](CLI::App& a, Opts& o) { a.add_option("--kmax", o.kmax, "largest k")->check(CLI::Range(1, 8))->capture_default_str(); },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         return finish(run_table_dis_gamma(o.kmax), recipe("table-dis-gamma", {{"kmax", std::to_string(o.kmax)}}),
                       "table_dis_gamma", c, out);
       }},
      {"dis-rn", "sampled distortion of R_{2k+1}",
       [](CLI::App& a, Opts& o) {
         a.add_option("--k", o.k, "curve index")->check(CLI::Range(1, 4))->capture_default_str();
         a.add_option("--budget", o.budget, "sample budget")->check(CLI::Range(1e3, 1e9))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         const ResultRow r = run_dis_rn(o.k, count(o.budget), c.seed, c.threads);
         return finish({r},
                       recipe("dis-rn", {{"k", std::to_string(o.k)}, {"budget", fmt(o.budget)}, {"seed", std::to_string(c.seed)}}),
                       "dis_rn_k" + std::to_string(o.k), c, out);
       }},
      {"dis-epc", "sampled distortion of any embedding",
       [](CLI::App& a, Opts& o) {
         a.add_option("--spec", o.spec, "tmc-odd:K, tmc-even:K, alpha, sigma or equatorial:M:N")->required();
         a.add_option("--budget", o.budget, "sample budget")->check(CLI::Range(1e3, 1e9))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         const EpcSpec s = EpcSpec::parse(o.spec);
         const DistortionEstimate e = estimate_distortion(s, count(o.budget), c.seed, true, c.threads);
         ResultRow r = ResultRow::make("dis_epc", s.name, "dis_estimate", e.value);
         attach_dis_reference(s, r);
         std::vector<ResultRow> rows{r, ResultRow::make("dis_epc", s.name, "samples_used", double(e.samples_used))};
         std::string stem = "dis_epc_" + s.name;
         for (char& ch : stem)
           if (ch == ':' || ch == '-') ch = '_';
         return finish(rows,
                       recipe("dis-epc", {{"spec", s.name}, {"budget", fmt(o.budget)}, {"seed", std::to_string(c.seed)}}),
                       stem, c, out);
       }},
      {"cov-radius", "covering radius of gamma_{2k+1} in S^{2k+1}",
       [](CLI::App& a, Opts& o) {
         a.add_option("--k", o.k, "curve index")->check(CLI::Range(1, 4))->capture_default_str();
         a.add_option("--samples", o.samples, "uniform samples")->check(CLI::Range(1e3, 1e9))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         const double v = covering_radius(EpcSpec::tmc_odd(o.k), count(o.samples), c.seed, c.threads);
         ResultRow r = o.k == 1 ? ResultRow::make("cov_radius", "1", "covering_radius", v, 0.9229, 5e-3,
                                                  "reference: covering radius of gamma_3 in S^3, quoted as 0.9229")
                                : ResultRow::make("cov_radius", std::to_string(o.k), "covering_radius", v);
         return finish({r},
                       recipe("cov-radius", {{"k", std::to_string(o.k)}, {"samples", fmt(o.samples)}, {"seed", std::to_string(c.seed)}}),
                       "cov_radius_k" + std::to_string(o.k), c, out);
       }},
      {"gh-upper", "1/2 dis(gamma_3) + covering radius of gamma_3",
       [](CLI::App& a, Opts& o) {
         a.add_option("--samples", o.samples, "uniform samples")->check(CLI::Range(1e3, 1e9))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         return finish(run_gh_upper_s1s3(count(o.samples), c.seed, c.threads),
                       recipe("gh-upper", {{"samples", fmt(o.samples)}, {"seed", std::to_string(c.seed)}}), "gh_upper_s1s3",
                       c, out);
       }},
      {"rho3", "profile of rho_3 over the fiber boundary",
       [](CLI::App& a, Opts& o) {
         a.add_option("--grid", o.rho_grid, "profile points")->check(CLI::Range(1000, 10'000'000))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         const Rho3Profile p = run_rho3_profile(o.rho_grid);
         const std::string path = write_file(c, "rho3_curve.csv", curve_to_csv(p.curve, "theta", "rho3"));
         out << "wrote " << path << '\n';
         return finish(p.rows, recipe("rho3", {{"grid", std::to_string(o.rho_grid)}}), "rho3_profile", c, out);
       }},
      {"fiber3-boundary", "boundary of the Voronoi fiber of gamma_3(0)",
       [](CLI::App& a, Opts& o) {
         a.add_option("--grid", o.fiber_grid, "boundary points")->check(CLI::Range(10, 1'000'000))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         std::string csv = "theta,zeta,rho3,q0,q1,q2,q3\n";
         double norm_err = 0.0;
         int doubles = 0;
         for (int i = 0; i < o.fiber_grid; ++i) {
           const double th = -kPi / 3.0 + 2.0 * kPi / 3.0 * i / o.fiber_grid;
           const FiberBoundaryPoint p = fiber3_boundary(th);
           const auto q = p.ambient.coords();
           double n2 = 0.0;
           for (double x : q) n2 += x * x;
           norm_err = std::max(norm_err, std::abs(std::sqrt(n2) - 1.0));
           if (fiber3_has_double_max(p)) ++doubles;
           csv += fmt(th) + ',' + fmt(p.zeta) + ',' + fmt(rho3(th));
           for (double x : q) csv += ',' + fmt(x);
           csv += '\n';
         }
         out << "wrote " << write_file(c, "fiber3_boundary_points.csv", csv) << '\n';
         std::vector<ResultRow> rows{
             ResultRow::make("fiber3_boundary", "1", "max_norm_error", norm_err, 0.0, 1e-12),
             ResultRow::make("fiber3_boundary", "1", "double_max_fraction", double(doubles) / o.fiber_grid, 1.0, 0.0),
         };
         return finish(rows, recipe("fiber3-boundary", {{"grid", std::to_string(o.fiber_grid)}}), "fiber3_boundary", c,
                       out);
       }},
      {"classify-maxima", "global maxima of cos(zeta) cos t + sin(zeta) cos(3t - theta)",
       [](CLI::App& a, Opts& o) {
         a.add_option("--zeta", o.zeta, "zeta")->required()->check(CLI::Range(0.0, kPi));
         a.add_option("--theta", o.theta, "theta")->check(CLI::Range(-2.0 * kPi, 2.0 * kPi))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         const MaximaClass m = classify_maxima(o.zeta, o.theta);
         const bool closed = o.theta == kPi && o.zeta > zeta0() && o.zeta <= kPi / 2;
         std::vector<ResultRow> rows;
         rows.push_back(closed ? ResultRow::make("classify_maxima", "1", "count", m.count, 2.0, 0.0)
                               : ResultRow::make("classify_maxima", "1", "count", m.count));
         std::pair<double, double> ref{};
         if (closed) ref = double_max_locations(o.zeta);
         for (std::size_t i = 0; i < m.locations.size(); ++i) {
           const std::string metric = "location_" + std::to_string(i + 1);
           if (closed && m.count == 2)
             rows.push_back(ResultRow::make("classify_maxima", "1", metric, m.locations[i], i == 0 ? ref.first : ref.second,
                                            1e-8, "reference: closed-form maxima for theta = pi"));
           else
             rows.push_back(ResultRow::make("classify_maxima", "1", metric, m.locations[i]));
         }
         return finish(rows, recipe("classify-maxima", {{"zeta", fmt(o.zeta)}, {"theta", fmt(o.theta)}}),
                       "classify_maxima", c, out);
       }},
      {"verify-bstar", "certify the two inequalities behind dis(R_3) <= 2pi/3",
       [](CLI::App& a, Opts& o) {
         a.add_option("--slack", o.slack, "certification slack")->check(CLI::Range(1e-12, 1.0))->capture_default_str();
         a.add_option("--max-depth", o.max_depth, "subdivision depth limit")->check(CLI::Range(1, 60))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         VerifyOptions vo;
         vo.slack = o.slack;
         vo.max_depth = o.max_depth;
         vo.threads = c.threads;
         const auto [up, lo] = verify_Bstar_k1(vo);
         out << "wrote " << write_file(c, "verify_bstar_transcript.json", transcript_json(up, lo)) << '\n';
         std::vector<ResultRow> rows;
         for (const VerificationReport* r : {&up, &lo}) {
           rows.push_back(ResultRow::make("verify_bstar", r->condition, "certified", r->certified ? 1.0 : 0.0, 1.0, 0.0));
           rows.push_back(ResultRow::make("verify_bstar", r->condition, "sup_bound", r->sup_bound));
           rows.push_back(ResultRow::make("verify_bstar", r->condition, "boxes_processed", double(r->boxes_processed)));
           rows.push_back(ResultRow::make("verify_bstar", r->condition, "max_depth", r->max_depth));
         }
         return finish(rows,
                       recipe("verify-bstar", {{"slack", fmt(o.slack)}, {"max_depth", std::to_string(o.max_depth)}}),
                       "verify_bstar", c, out);
       }},
      {"disc-psi", "modulus of discontinuity of the closest-point projection",
       [](CLI::App& a, Opts& o) {
         a.add_option("--k", o.k, "curve index")->check(CLI::Range(1, 4))->capture_default_str();
         a.add_option("--budget", o.budget, "sample budget")->check(CLI::Range(1e3, 1e9))->capture_default_str();
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         const DiscEstimate d = disc_estimate_full(EpcSpec::tmc_odd(o.k), count(o.budget), c.seed, c.threads);
         const std::string kk = std::to_string(o.k);
         std::vector<ResultRow> rows;
         rows.push_back(o.k == 1 ? ResultRow::make("disc_psi", kk, "disc_estimate", d.value, 2.0 * kPi / 3.0, 1e-2,
                                                   "reference: disc(psi_3) = 2 pi / 3")
                                 : ResultRow::make("disc_psi", kk, "disc_estimate", d.value));
         rows.push_back(ResultRow::make("disc_psi", kk, "samples_used", double(d.samples_used)));
         return finish(rows,
                       recipe("disc-psi", {{"k", kk}, {"budget", fmt(o.budget)}, {"seed", std::to_string(c.seed)}}),
                       "disc_psi_k" + kk, c, out);
       }},
      {"duality", "empty-ball witness for a candidate face of Conv(gamma_{2k+1})",
       [](CLI::App& a, Opts& o) {
         a.add_option("--k", o.k, "curve index")->check(CLI::Range(1, 8))->capture_default_str();
         a.add_option("--params", o.params, "vertex parameters t1,t2,...")->required()->delimiter(',');
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         const DualityWitness w = duality_witness(FaceCandidate::make(o.k, o.params));
         const std::string kk = std::to_string(o.k);
         std::vector<ResultRow> rows{
             ResultRow::make("duality", kk, "witness_found", w.found ? 1.0 : 0.0),
             ResultRow::make("duality", kk, "radius", w.radius),
             ResultRow::make("duality", kk, "equidistance_error", w.equidistance_error),
             ResultRow::make("duality", kk, "min_curve_distance", w.min_curve_distance),
         };
         if (o.params.size() == 2) {
           const bool edge = edge_predicate(o.k + 1, o.params[0], o.params[1]);
           rows.push_back(ResultRow::make("duality", kk, "edge_predicate", edge ? 1.0 : 0.0));
           rows.push_back(ResultRow::make("duality", kk, "agreement", edge == w.found ? 1.0 : 0.0, 1.0, 0.0));
         }
         std::string ps;
         for (double p : o.params) ps += (ps.empty() ? "" : ",") + fmt(p);
         return finish(rows, recipe("duality", {{"k", kk}, {"params", ps}}), "duality", c, out);
       }},
      {"acceptance", "run the acceptance criteria",
       [](CLI::App& a, Opts& o) {
         a.add_option("--criteria", o.criteria, "subset to run, e.g. 1,3,9")->delimiter(',')->check(CLI::Range(1, kCriterionCount));
       },
       [](const Opts& o, const CliConfig& c, std::ostream& out) {
         AcceptanceOptions ao;
         ao.seed = c.seed;
         ao.threads = c.threads;
         ao.only = o.criteria;
         std::vector<ResultRow> rows;
         run_acceptance(ao, [&](const CriterionResult& r) {
           out << format_criterion(r) << '\n' << std::flush;
           rows.push_back(ResultRow::make("acceptance", std::to_string(r.id), "pass", r.pass ? 1.0 : 0.0, 1.0, 0.0));
         });
         std::string ids;
         for (int i : o.criteria) ids += (ids.empty() ? "" : ",") + std::to_string(i);
         return finish(rows, recipe("acceptance", {{"criteria", ids.empty() ? "all" : ids}, {"seed", std::to_string(c.seed)}}),
                       "acceptance", c, out);
       }},
  };
  return subs;
}

std::string default_out_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : "results";
}

}  // namespace

std::vector<std::string> cli_dispatch_names() {
  std::vector<std::string> v;
  for (const auto& s : subcommands()) v.emplace_back(s.name);
  return v;
}

std::string emit(const std::vector<ResultRow>& rows, const ExperimentRecipe& recipe, const std::string& stem,
                 const CliConfig& config, std::ostream& out) {
  ExperimentRecipe rec = recipe;
  const bool json = config.format == OutputFormat::Json;
  const std::string file = stem + (json ? ".json" : ".csv");
  rec.outputs.push_back(file);
  const std::string path = write_file(config, file, json ? rows_to_json(rows, rec) : rows_to_csv(rows));
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-16s %-20s %-20s %-12s %-9s %s\n", "experiment", "subject", "metric", "value",
                "reference", "tolerance", "pass");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-16s %-16s %-20s %-20s %-12s %-9s %s\n", r.experiment.c_str(), r.subject.c_str(),
                  r.metric.c_str(), fmt(r.value).c_str(), r.reference ? fmt(*r.reference).c_str() : "-",
                  r.tolerance ? fmt(*r.tolerance).c_str() : "-", r.pass ? (*r.pass ? "PASS" : "FAIL") : "-");
    out << line;
  }
  out << "wrote " << path << '\n';
  return path;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embedding-projection correspondences between spheres: experiments and verifier", "epcgh"};
  app.require_subcommand(1);
  Opts o;
  std::vector<std::pair<CLI::App*, const Subcommand*>> apps;
  for (const auto& s : subcommands()) {
    CLI::App* sub = app.add_subcommand(s.name, s.description);
    s.flags(*sub, o);
    common_flags(*sub, o);
    apps.emplace_back(sub, &s);
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitUsage;
  }

  CliConfig c;
  c.output_dir = o.out_dir.empty() ? default_out_dir() : o.out_dir;
  c.seed = o.seed;
  c.format = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  c.threads = o.threads;
  for (auto& [sub, s] : apps) {
    if (!sub->parsed()) continue;
    c.subcommand = s->name;
    try {
      return s->run(o, c, out);
    } catch (const OutputError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const DomainError& e) {
      err << "error: " << e.what() << '\n' << sub->help();
      return kExitUsage;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitCheckFailed;
    }
  }
  return kExitUsage;
}

}  // namespace epcgh
