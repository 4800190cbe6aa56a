#pragma once

// Experiment driver behind the `shadows` command: strict JSON configs, body
// files, one runner per subcommand, JSON/CSV reports and exit codes.

#include "shadows/john.hpp"
#include "shadows/kernel.hpp"
#include "shadows/minkowski_family.hpp"
#include "shadows/polytope.hpp"
#include "shadows/shadow_position.hpp"
#include "shadows/zonotope.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace shadows::harness {

using json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

enum ExitCode : int { kPass = 0, kAssertionFailure = 1, kConfigError = 2, kCapacityExceeded = 3 };

/// Bad config or input file. Line and column are 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

// ---------------------------------------------------------------------------
// JSON input
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte points one past the offending character
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                          std::string(e.what()) + ")",
                      line, col);
  }
}

inline double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": not finite");
  return v;
}

inline Mat matrix_at(const json& j, const std::string& where, int cols) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of rows");
  Mat m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string here = where + "/" + std::to_string(i);
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw ConfigError(here + ": expected " + std::to_string(cols) + " coordinates");
    for (int c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(i), c) = number_at(j[i][static_cast<std::size_t>(c)], here + "/" + std::to_string(c));
  }
  return m;
}

inline void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
}

inline int dimension_at(const json& j, const std::string& where) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ConfigError(where + "/n: expected an integer");
  const int n = j["n"].get<int>();
  if (n < 1) throw ConfigError(where + "/n: must be positive");
  return n;
}

}  // namespace detail

/// {"n": int, "directions": [[...]], "offsets": [...]}.
inline SymmetricHPolytope body_from_json(const json& j, const std::string& origin = "body") {
  detail::only_keys(j, {"n", "directions", "offsets"}, origin);
  const int n = detail::dimension_at(j, origin);
  if (!j.contains("directions")) throw ConfigError(origin + ": missing \"directions\"");
  if (!j.contains("offsets") || !j["offsets"].is_array()) throw ConfigError(origin + "/offsets: expected an array");
  const Mat dirs = detail::matrix_at(j["directions"], origin + "/directions", n);
  const json& offs = j["offsets"];
  if (offs.size() != static_cast<std::size_t>(dirs.rows()))
    throw ConfigError(origin + "/offsets: expected one offset per direction");
  Vec t(dirs.rows());
  for (std::size_t i = 0; i < offs.size(); ++i) {
    t[static_cast<Eigen::Index>(i)] = detail::number_at(offs[i], origin + "/offsets/" + std::to_string(i));
    if (!(t[static_cast<Eigen::Index>(i)] > 0.0))
      throw ConfigError(origin + "/offsets/" + std::to_string(i) + ": offsets must be positive");
  }
  try {
    return SymmetricHPolytope::from_nearly_unit(dirs, t);
  } catch (const InvalidArgument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline SymmetricHPolytope load_body(const std::string& path) {
  return body_from_json(detail::parse_text(detail::read_file(path), path), path);
}

inline json body_to_json(const SymmetricHPolytope& p) {
  json dirs = json::array();
  for (int i = 0; i < p.slabs(); ++i) {
    const Vec u = p.direction(i);
    dirs.push_back(std::vector<double>(u.data(), u.data() + u.size()));
  }
  return json{{"n", p.dim()},
              {"directions", dirs},
              {"offsets", std::vector<double>(p.offsets().data(), p.offsets().data() + p.slabs())}};
}

/// {"n": int, "generators": [[...]]}.
inline Zonotope zonotope_from_json(const json& j, const std::string& origin = "zonotope") {
  detail::only_keys(j, {"n", "generators"}, origin);
  const int n = detail::dimension_at(j, origin);
  if (!j.contains("generators")) throw ConfigError(origin + ": missing \"generators\"");
  return Zonotope(detail::matrix_at(j["generators"], origin + "/generators", n));
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::string experiment;
  int n = 3;
  int m = 6;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  int samples = 1000;
  int trials = 20;
  int seeds = 10;
  int n_max = 200;
  std::string body;      // path to a body file, empty for a random body
  std::string zonotope;  // path to a zonotope file
  double perturb_weights = 0.0;  // fault injection: scales decomposition weights by 1 + p

  json to_json() const {
    return json{{"experiment", experiment}, {"n", n},         {"m", m},         {"seed", seed},
                {"tolerance", tolerance},   {"samples", samples}, {"trials", trials}, {"seeds", seeds},
                {"n_max", n_max},           {"body", body},   {"zonotope", zonotope}, {"perturb_weights", perturb_weights}};
  }
};

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{"schema", "experiment", "n",     "m",    "seed",     "tolerance",      "samples",
                                          "trials", "seeds",      "n_max", "body", "zonotope", "perturb_weights"};
  return keys;
}

inline ExperimentConfig config_from_json(const json& j, const std::string& origin = "config") {
  detail::only_keys(j, config_keys(), origin);
  ExperimentConfig c;
  if (j.contains("schema") && j["schema"] != kReportSchema) throw ConfigError(origin + "/schema: only schema 1 is understood");
  auto integer = [&](const char* key, int& out, int lo, int hi) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) throw ConfigError(origin + "/" + key + ": expected an integer");
    const long long v = j[key].get<long long>();
    if (v < lo || v > hi)
      throw ConfigError(origin + "/" + key + ": " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    out = static_cast<int>(v);
  };
  auto text = [&](const char* key, std::string& out) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) throw ConfigError(origin + "/" + key + ": expected a string");
    out = j[key].get<std::string>();
  };
  text("experiment", c.experiment);
  text("body", c.body);
  text("zonotope", c.zonotope);
  integer("n", c.n, 1, 200);
  integer("m", c.m, 1, 1000);
  integer("samples", c.samples, 1, 100000000);
  integer("trials", c.trials, 1, 100000);
  integer("seeds", c.seeds, 1, 100000);
  integer("n_max", c.n_max, 2, 200);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError(origin + "/seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerance")) {
    c.tolerance = detail::number_at(j["tolerance"], origin + "/tolerance");
    if (!(c.tolerance > 0.0 && c.tolerance < 1.0)) throw ConfigError(origin + "/tolerance: must lie in (0, 1)");
  }
  if (j.contains("perturb_weights")) c.perturb_weights = detail::number_at(j["perturb_weights"], origin + "/perturb_weights");
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  return config_from_json(detail::parse_text(detail::read_file(path), path), path);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

/// Shortest text that reads back to the same double.
inline std::string format_number(double v) { return json(v).dump(); }

struct RunResult {
  json report;
  std::optional<Table> table;
  int exit_code = kPass;
};

namespace detail {

inline json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline json mat_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

class Checks {
 public:
  void expect(const std::string& name, bool pass, double value, double threshold, const std::string& detail = "") {
    json c{{"name", name}, {"pass", pass}, {"value", value}, {"threshold", threshold}};
    if (!detail.empty()) c["detail"] = detail;
    items_.push_back(std::move(c));
    all_ &= pass;
  }
  void fail(const std::string& name, const std::string& detail) {
    items_.push_back(json{{"name", name}, {"pass", false}, {"detail", detail}});
    all_ = false;
  }
  bool all() const { return all_; }
  const json& items() const { return items_; }

 private:
  json items_ = json::array();
  bool all_ = true;
};

// Per-component seed derivation: seed XOR a fixed constant per component.
enum : std::uint64_t {
  kBodyStream = 0x626f6479,
  kDecompositionStream = 0x64656373,
  kSamplingStream = 0x73616d70,
  kSolverStream = 0x736f6c76,
};

inline RandomSource stream(const ExperimentConfig& c, std::uint64_t component) { return RandomSource(c.seed ^ component); }

inline SymmetricHPolytope body_for(const ExperimentConfig& c) {
  if (!c.body.empty()) return load_body(c.body);
  RandomSource rng = stream(c, kBodyStream);
  return random_symmetric_polytope(c.n, c.m, rng);
}

inline RunResult finish(const std::string& name, const ExperimentConfig& c, json results, const Checks& checks,
                        std::optional<Table> table = std::nullopt) {
  json report{{"schema", kReportSchema},
              {"version", kLibraryVersion},
              {"experiment", name},
              {"config", c.to_json()},
              {"results", std::move(results)},
              {"assertions", checks.items()},
              {"pass", checks.all()}};
  return {std::move(report), std::move(table), checks.all() ? kPass : kAssertionFailure};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

inline RunResult run_shadow_position(const ExperimentConfig& c) {
  const SymmetricHPolytope body = detail::body_for(c);
  detail::Checks checks;
  json results{{"input", body_to_json(body)}};
  try {
    const ShadowPositionReport r = shadow_position(body, c.tolerance);
    JohnDecomposition john = r.john;
    john.weights *= 1.0 + c.perturb_weights;
    const JohnResidual res = john_residual(john);
    results["ratio"] = r.ratio;
    results["min_shadow"] = r.min_shadow;
    results["min_direction"] = detail::vec_json(r.min_direction);
    results["volume"] = r.volume;
    results["transform"] = detail::mat_json(r.transform);
    results["branch"] = r.branch;
    results["mvee_iterations"] = r.mvee_iterations;
    results["residuals"] = json{{"john_frobenius", res.frobenius},
                                {"john_trace_gap", res.trace_gap},
                                {"contact_shadow_spread", r.contact_shadow_spread}};
    results["body"] = body_to_json(r.body);
    checks.expect("ratio >= 1 - 1e-4", r.ratio >= 1.0 - 1e-4, r.ratio, 1.0 - 1e-4);
    const double det = std::abs(r.transform.determinant());
    checks.expect("|det transform| = 1", std::abs(det - 1.0) <= 1e-9, det, 1e-9);
    checks.expect("john frobenius residual", res.frobenius <= 1e-6, res.frobenius, 1e-6);
    checks.expect("john trace gap", res.trace_gap <= 1e-8, res.trace_gap, 1e-8);
    checks.expect("contact shadows equal the minimum", r.contact_shadow_spread <= 1e-4, r.contact_shadow_spread, 1e-4);
  } catch (const NumericalFailure& e) {
    checks.fail("shadow position", e.what());
  }
  return detail::finish("shadow-position", c, std::move(results), checks);
}

inline RunResult run_verify_t3(const ExperimentConfig& c) {
  RandomSource bodies = detail::stream(c, detail::kBodyStream);
  RandomSource decomps = detail::stream(c, detail::kDecompositionStream);
  detail::Checks checks;
  Table table{{"trial", "n", "m", "k", "lhs", "rhs", "ratio", "loomis_whitney_ratio"}, {}};
  int violations = 0;
  double worst = INFINITY;
  for (int trial = 0; trial < c.trials; ++trial) {
    const SymmetricHPolytope body = c.body.empty() ? random_symmetric_polytope(c.n, c.m, bodies) : load_body(c.body);
    const int n = body.dim();
    WeightedDirections wd = random_weighted_directions(n, n + 1 + trial % 3, decomps);
    wd.weights *= 1.0 + c.perturb_weights;
    const PolytopeGeometry g(body);
    try {
      const auto r = product_of_shadows_check(g, wd);
      const auto lw = loomis_whitney_check(g);
      if (!r.holds || !lw.holds) ++violations;
      worst = std::min({worst, r.ratio, lw.ratio});
      table.rows.push_back({std::to_string(trial), std::to_string(n), std::to_string(body.slabs()), std::to_string(wd.size()),
                            format_number(r.lhs), format_number(r.rhs), format_number(r.ratio), format_number(lw.ratio)});
    } catch (const InvalidArgument& e) {
      checks.fail("decomposition invariant (trial " + std::to_string(trial) + ")", e.what());
    }
  }
  checks.expect("no violations", violations == 0, violations, 0);
  json results{{"trials", c.trials}, {"violations", violations}, {"min_ratio", worst}};
  return detail::finish("verify-t3", c, std::move(results), checks, table);
}

inline RunResult run_zonotope(const ExperimentConfig& c) {
  detail::Checks checks;
  Table table{{"trial", "n", "m", "volume_exact", "volume_recursive", "relative_gap", "lower_bound_ratio"}, {}};
  RandomSource rng = detail::stream(c, detail::kBodyStream);
  double worst_gap = 0.0, worst_ratio = INFINITY;
  auto record = [&](int trial, const Zonotope& z, double lower_bound) {
    const auto f = volume_formula_check(z);
    worst_gap = std::max(worst_gap, f.relative_gap);
    table.rows.push_back({std::to_string(trial), std::to_string(z.dim()), std::to_string(z.size()), format_number(f.lhs),
                          format_number(f.rhs), format_number(f.relative_gap), format_number(lower_bound)});
  };
  if (!c.zonotope.empty()) {
    record(0, zonotope_from_json(detail::parse_text(detail::read_file(c.zonotope), c.zonotope), c.zonotope), NAN);
  } else {
    for (int trial = 0; trial < c.trials; ++trial) {
      const int n = 2 + trial % std::max(1, c.n - 1);
      const int m = std::max(n, std::min(c.m, n + 1 + trial % 4));
      WeightedDirections wd = random_weighted_directions(n, m, rng);
      wd.weights *= 1.0 + c.perturb_weights;
      Vec alphas(m);
      for (int i = 0; i < m; ++i) alphas[i] = rng.uniform(0.2, 2.0);
      try {
        const auto l4 = zonotope_volume_lower_bound(wd, alphas);
        worst_ratio = std::min(worst_ratio, l4.ratio);
        record(trial, Zonotope::from_directions(wd.directions, alphas), l4.ratio);
      } catch (const InvalidArgument& e) {
        checks.fail("decomposition invariant (trial " + std::to_string(trial) + ")", e.what());
      }
    }
    checks.expect("volume lower bound ratio >= 1 - 1e-9", worst_ratio >= 1.0 - 1e-9, worst_ratio, 1.0 - 1e-9);
  }
  checks.expect("volume formulas agree", worst_gap <= 1e-9, worst_gap, 1e-9);
  json results{{"max_relative_gap", worst_gap}};
  if (std::isfinite(worst_ratio)) results["min_lower_bound_ratio"] = worst_ratio;
  return detail::finish("zonotope", c, std::move(results), checks, table);
}

inline RunResult run_minkowski_solve(const ExperimentConfig& c) {
  RandomSource rng = detail::stream(c, detail::kBodyStream);
  Mat dirs(c.m, c.n);
  Vec gamma(c.m);
  for (int i = 0; i < c.m; ++i) {
    dirs.row(i) = sample_unit_sphere(c.n, rng).transpose();
    gamma[i] = rng.uniform(0.5, 1.5) / c.m;
  }
  const SlabFamilySpec spec{dirs, gamma};
  RandomSource starts = detail::stream(c, detail::kSolverStream);
  RandomSource sampler = detail::stream(c, detail::kSamplingStream);
  const double tol = std::clamp(c.tolerance, 1e-10, 1e-3);
  const auto ms = maximize_volume_multistart(spec, starts, 5, tol);
  const auto id = verify_projection_identity(ms.best.body, spec, c.samples, sampler);
  detail::Checks checks;
  checks.expect("kkt multiplier consistency", ms.best.kkt.max_relative_residual <= 1e-3, ms.best.kkt.max_relative_residual, 1e-3);
  checks.expect("projection identity", id.max_relative_error <= 1e-3, id.max_relative_error, 1e-3);
  checks.expect("multistart volume agreement", ms.volume_spread <= 1e-6, ms.volume_spread, 1e-6);
  json results{{"volume", ms.best.volume},
               {"offsets", detail::vec_json(ms.best.offsets)},
               {"iterations", ms.best.iterations},
               {"kkt_multiplier", ms.best.kkt.multiplier},
               {"kkt_residual", ms.best.kkt.max_relative_residual},
               {"multistart_volumes", ms.volumes},
               {"identity_max_relative_error", id.max_relative_error},
               {"body", body_to_json(ms.best.body)}};
  return detail::finish("minkowski-solve", c, std::move(results), checks);
}

inline RunResult run_pathological(const ExperimentConfig& c) {
  detail::Checks checks;
  Table table{{"seed", "n", "delta_hat", "vol_nth_root", "min_shadow", "ratio", "floor"}, {}};
  json runs = json::array();
  for (int s = 0; s < c.seeds; ++s) {
    const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(s);
    RandomSource rng(seed);
    try {
      const auto r = construct_pathological(c.n, rng);
      checks.expect("volume root >= sqrt 2 (seed " + std::to_string(seed) + ")", r.volume_root >= std::sqrt(2.0) - 1e-9,
                    r.volume_root, std::sqrt(2.0) - 1e-9);
      checks.expect("ratio >= floor (seed " + std::to_string(seed) + ")", r.ratio >= r.floor - 1e-6, r.ratio, r.floor - 1e-6);
      table.rows.push_back({std::to_string(seed), std::to_string(c.n), format_number(r.delta_hat), format_number(r.volume_root),
                            format_number(r.min_shadow), format_number(r.ratio), format_number(r.floor)});
      runs.push_back(json{{"seed", seed}, {"delta_branch", r.delta_branch}, {"kkt_residual", r.kkt.max_relative_residual}});
    } catch (const NumericalFailure& e) {
      checks.fail("seed " + std::to_string(seed), e.what());
    }
  }
  return detail::finish("pathological", c, json{{"runs", runs}}, checks, table);
}

inline RunResult run_ball_ratio(const ExperimentConfig& c) {
  detail::Checks checks;
  Table table{{"n", "ratio"}, {}};
  bool increasing = true;
  double prev = 0.0;
  for (int n = 2; n <= c.n_max; ++n) {
    const double r = ball_shadow_ratio(n);
    increasing &= r > prev;
    prev = r;
    table.rows.push_back({std::to_string(n), format_number(r)});
  }
  const double root_e = std::sqrt(std::exp(1.0));
  const double at2 = ball_shadow_ratio(2);
  checks.expect("strictly increasing", increasing, prev, 0.0);
  checks.expect("n=2 equals 2/sqrt(pi)", std::abs(at2 - 2.0 / std::sqrt(std::numbers::pi)) <= 1e-9, at2,
                2.0 / std::sqrt(std::numbers::pi));
  const double gap = std::abs(prev - root_e) / root_e;
  checks.expect("last row within 0.5% of sqrt e", gap <= 5e-3, gap, 5e-3);
  json results{{"n_max", c.n_max}, {"last", prev}, {"sqrt_e", root_e}, {"relative_gap", gap}};
  return detail::finish("ball-ratio", c, std::move(results), checks, table);
}

inline RunResult run_cauchy_check(const ExperimentConfig& c) {
  const SymmetricHPolytope body = c.body.empty() ? SymmetricHPolytope::cube(c.n) : load_body(c.body);
  RandomSource rng = detail::stream(c, detail::kSamplingStream);
  const auto r = cauchy_check(body, c.samples, rng);
  detail::Checks checks;
  checks.expect("cauchy estimate within 1%", r.relative_gap <= 1e-2, r.relative_gap, 1e-2);
  json results{{"surface_area", r.surface_area},
               {"mean_shadow", r.mean_shadow},
               {"cauchy_estimate", r.cauchy_estimate},
               {"relative_gap", r.relative_gap}};
  return detail::finish("cauchy-check", c, std::move(results), checks);
}

inline const std::map<std::string, std::function<RunResult(const ExperimentConfig&)>>& subcommands() {
  static const std::map<std::string, std::function<RunResult(const ExperimentConfig&)>> table{
      {"shadow-position", run_shadow_position}, {"verify-t3", run_verify_t3},     {"zonotope", run_zonotope},
      {"minkowski-solve", run_minkowski_solve}, {"pathological", run_pathological}, {"ball-ratio", run_ball_ratio},
      {"cauchy-check", run_cauchy_check}};
  return table;
}

/// Runs one subcommand and maps library errors onto exit codes; the report
/// then carries an "error" object instead of results.
inline RunResult run(const std::string& subcommand, ExperimentConfig config) {
  const auto it = subcommands().find(subcommand);
  if (it == subcommands().end()) throw ConfigError("unknown subcommand \"" + subcommand + "\"");
  config.experiment = subcommand;
  auto failure = [&](const char* kind, const std::string& message, int code) {
    json report{{"schema", kReportSchema},
                {"version", kLibraryVersion},
                {"experiment", subcommand},
                {"config", config.to_json()},
                {"error", json{{"kind", kind}, {"message", message}}},
                {"pass", false}};
    return RunResult{std::move(report), std::nullopt, code};
  };
  try {
    return it->second(config);
  } catch (const ConfigError& e) {
    return failure("config", e.what(), kConfigError);
  } catch (const CapacityError& e) {
    return failure("capacity", e.what(), kCapacityExceeded);
  } catch (const InvalidArgument& e) {
    return failure("invalid-argument", e.what(), kConfigError);
  } catch (const Error& e) {
    return failure("numerical", e.what(), kAssertionFailure);
  }
}

}  // namespace shadows::harness
