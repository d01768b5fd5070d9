#include "aremor/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "aremor/errors.hpp"
#include "aremor/rational_krylov.hpp"
#include "aremor/system_reduction.hpp"
#include "aremor/time_integration.hpp"

namespace aremor {
namespace {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::set<std::string> kKnownMethods = {"pod", "bt", "gark", "pgark"};

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"problem",
     {"epsilon", "gamma", "domain", "omega_b", "omega_c", "dx", "grid",
      "dimension"}},
    {"experiment", {"methods", "tol", "r_max", "seed", "reference_cutoff"}},
    {"krylov", {"use_b_variant", "candidate_points", "time_limit_s"}},
    {"pod", {"sweep", "horizon", "steps"}},
    {"bt", {"sweep"}},
    {"output", {"dir", "timings"}},
};

std::string trim(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

std::vector<std::string> split(const std::string& text, const char* delims) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(delims));
  for (auto& p : parts) p = trim(p);
  parts.erase(std::remove(parts.begin(), parts.end(), std::string()),
              parts.end());
  return parts;
}

double to_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
}

long long to_integer(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
}

bool to_bool(const std::string& text, const std::string& key) {
  const std::string v = boost::algorithm::to_lower_copy(text);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

Rect to_rect(const std::string& text, const std::string& key) {
  const auto parts = split(text, ",");
  if (parts.size() != 4) {
    throw ConfigError(key + ": expected x_min, x_max, y_min, y_max");
  }
  return Rect{to_double(parts[0], key), to_double(parts[1], key),
              to_double(parts[2], key), to_double(parts[3], key)};
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_value(*v) : std::string();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string grid_name(GridConvention g) {
  return g == GridConvention::kLattice ? "lattice" : "interior";
}

nlohmann::json rect_json(const Rect& r) {
  return {r.x_min, r.x_max, r.y_min, r.y_max};
}

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["problem"] = {{"epsilon", cfg.problem.epsilon},
                  {"gamma", cfg.problem.gamma},
                  {"domain", rect_json(cfg.problem.domain)},
                  {"omega_b", rect_json(cfg.problem.omega_b)},
                  {"omega_c", rect_json(cfg.problem.omega_c)},
                  {"dx", cfg.problem.dx},
                  {"grid", grid_name(cfg.problem.grid)},
                  {"dimension", cfg.problem.dimension}};
  j["methods"] = cfg.methods;
  j["tol"] = cfg.tol;
  j["r_max"] = cfg.r_max;
  j["pod_sweep"] = cfg.pod_sweep;
  j["bt_sweep"] = cfg.bt_sweep;
  j["snapshot_horizon"] = cfg.snapshot_horizon;
  j["snapshot_steps"] = cfg.snapshot_steps;
  j["use_b_variant"] = cfg.use_b_variant;
  j["candidate_points"] = cfg.candidate_points;
  j["time_limit_s"] = cfg.time_limit_s ? nlohmann::json(*cfg.time_limit_s)
                                       : nlohmann::json(nullptr);
  j["reference_cutoff"] = cfg.reference_cutoff;
  j["output_dir"] = cfg.output_dir;
  j["timings"] = cfg.timings;
  j["seed"] = cfg.seed;
  return j;
}

struct Reference {
  Matrix K;
  std::optional<H2ErrorEvaluator> h2;
};

void fill_metrics(const StateSpaceSystem& sys, const Reference* ref,
                  const ReducedModel& red, const Matrix& P_r,
                  IterationRecord& record) {
  if (ref == nullptr) return;
  record.gain_error = gain_error(lift_gain(red, P_r, sys.R), ref->K);
  record.h2_error = ref->h2->relative_error(red);
}

// POD and BT: one reduced ARE per sweep value.
MethodOutcome run_sweep_method(
    const std::string& method, const StateSpaceSystem& sys,
    const std::vector<Index>& sweep, const Reference* ref,
    const std::function<ReducedModel(Index)>& basis, const Clock::time_point start) {
  MethodOutcome outcome;
  outcome.method = method;
  outcome.status = "completed";
  for (const Index r : sweep) {
    ReducedModel red;
    try {
      red = basis(r);
    } catch (const RankError& e) {
      outcome.history.events.push_back(std::string("sweep stopped at r = ") +
                                       std::to_string(r) + ": " + e.what());
      break;
    }
    Matrix P_r;
    try {
      P_r = solve_dense_are(red.A_r, red.B_r, red.C_r, sys.R);
    } catch (const Error& e) {
      outcome.history.events.push_back("reduced ARE failed at r = " +
                                       std::to_string(r) + ": " + e.what());
      continue;
    }
    IterationRecord record;
    record.r = r;
    record.residual = relative_residual(sys, red, P_r);
    fill_metrics(sys, ref, red, P_r, record);
    record.elapsed_s =
        std::chrono::duration<double>(Clock::now() - start).count();
    outcome.history.add(record);
  }
  return outcome;
}

KrylovOptions krylov_options(const ExperimentConfig& cfg) {
  KrylovOptions options;
  options.tol = cfg.tol;
  options.r_max = cfg.r_max;
  options.shifts.use_b_variant = cfg.use_b_variant;
  options.shifts.candidate_points = cfg.candidate_points;
  options.time_limit_s = cfg.time_limit_s;
  return options;
}

std::string failure_status(KrylovFailure kind) {
  switch (kind) {
    case KrylovFailure::kBreakdown:
      return "breakdown";
    case KrylovFailure::kReducedAreFailed:
      return "unstable";
    case KrylovFailure::kTimeLimit:
      return "time_limit";
    case KrylovFailure::kNotConverged:
      break;
  }
  return "not_converged";
}

MethodOutcome run_krylov_method(const std::string& method,
                                const StateSpaceSystem& sys,
                                const ExperimentConfig& cfg,
                                const Reference* ref) {
  MethodOutcome outcome;
  outcome.method = method;
  const IterationHook hook = [&](const KrylovState&, const ReducedModel& red,
                                 const Matrix& P_r, IterationRecord& record) {
    fill_metrics(sys, ref, red, P_r, record);
  };
  try {
    KrylovResult result = method == "gark" ? gark(sys, krylov_options(cfg), hook)
                                           : pgark(sys, krylov_options(cfg), hook);
    outcome.status = "converged";
    outcome.history = std::move(result.history);
  } catch (const KrylovError& e) {
    outcome.status = failure_status(e.kind());
    outcome.message = e.what();
    outcome.history = e.history();
  }
  return outcome;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    problem.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  if (methods.empty()) throw ConfigError("methods must not be empty");
  std::set<std::string> seen;
  for (const auto& m : methods) {
    if (!kKnownMethods.count(m)) throw ConfigError("unknown method '" + m + "'");
    if (!seen.insert(m).second) throw ConfigError("method listed twice: " + m);
  }
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (r_max < 1) throw ConfigError("r_max must be positive");
  for (const auto* sweep : {&pod_sweep, &bt_sweep}) {
    for (std::size_t i = 0; i < sweep->size(); ++i) {
      if ((*sweep)[i] < 1) throw ConfigError("sweep values must be positive");
      if (i > 0 && (*sweep)[i] <= (*sweep)[i - 1]) {
        throw ConfigError("sweep values must be strictly increasing");
      }
    }
  }
  if (seen.count("pod") && pod_sweep.empty()) {
    throw ConfigError("pod needs a sweep");
  }
  if (seen.count("bt") && bt_sweep.empty()) throw ConfigError("bt needs a sweep");
  if (!(snapshot_horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (snapshot_steps < 1) throw ConfigError("steps must be positive");
  if (candidate_points < 1) throw ConfigError("candidate_points must be positive");
  if (time_limit_s && !(*time_limit_s > 0.0)) {
    throw ConfigError("time_limit_s must be positive");
  }
  if (output_dir.empty()) throw ConfigError("output dir must not be empty");
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> values;
  for (const auto& item : split(text, ",")) {
    const auto range = split(item, ":");
    if (range.size() == 1) {
      values.push_back(to_integer(range[0], "list"));
    } else if (range.size() == 3) {
      const long long first = to_integer(range[0], "range");
      const long long step = to_integer(range[1], "range");
      const long long last = to_integer(range[2], "range");
      if (step <= 0) throw ConfigError("range step must be positive: " + item);
      for (long long v = first; v <= last; v += step) values.push_back(v);
    } else {
      throw ConfigError("bad list item '" + item + "'");
    }
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& item : split(text, ",")) values.push_back(to_double(item, "list"));
  if (values.empty()) throw ConfigError("empty list");
  return values;
}

std::vector<std::string> parse_method_list(const std::string& text) {
  std::vector<std::string> methods;
  for (const auto& item : split(text, ",")) {
    methods.push_back(boost::algorithm::to_lower_copy(item));
  }
  return methods;
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end()) {
      throw ConfigError("unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      (void)value;
      if (!known->second.count(key)) {
        throw ConfigError("unknown key " + section + "." + key);
      }
    }
  }
  const auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(path)) return trim(*v);
    return std::nullopt;
  };

  ExperimentConfig cfg;
  PdeConfig& p = cfg.problem;
  if (auto v = get("problem.epsilon")) p.epsilon = to_double(*v, "epsilon");
  if (auto v = get("problem.gamma")) p.gamma = to_double(*v, "gamma");
  if (auto v = get("problem.domain")) p.domain = to_rect(*v, "domain");
  if (auto v = get("problem.omega_b")) p.omega_b = to_rect(*v, "omega_b");
  if (auto v = get("problem.omega_c")) p.omega_c = to_rect(*v, "omega_c");
  if (auto v = get("problem.dx")) p.dx = to_double(*v, "dx");
  if (auto v = get("problem.grid")) {
    if (*v == "lattice") {
      p.grid = GridConvention::kLattice;
    } else if (*v == "interior") {
      p.grid = GridConvention::kInterior;
    } else {
      throw ConfigError("grid: expected lattice or interior");
    }
  }
  if (auto v = get("problem.dimension")) {
    p.dimension = static_cast<int>(to_integer(*v, "dimension"));
  }
  if (auto v = get("experiment.methods")) cfg.methods = parse_method_list(*v);
  if (auto v = get("experiment.tol")) cfg.tol = to_double(*v, "tol");
  if (auto v = get("experiment.r_max")) cfg.r_max = to_integer(*v, "r_max");
  if (auto v = get("experiment.seed")) {
    cfg.seed = static_cast<std::uint64_t>(to_integer(*v, "seed"));
  }
  if (auto v = get("experiment.reference_cutoff")) {
    cfg.reference_cutoff = to_integer(*v, "reference_cutoff");
  }
  if (auto v = get("krylov.use_b_variant")) {
    cfg.use_b_variant = to_bool(*v, "use_b_variant");
  }
  if (auto v = get("krylov.candidate_points")) {
    cfg.candidate_points = to_integer(*v, "candidate_points");
  }
  if (auto v = get("krylov.time_limit_s")) {
    cfg.time_limit_s = to_double(*v, "time_limit_s");
  }
  if (auto v = get("pod.sweep")) cfg.pod_sweep = parse_index_list(*v);
  if (auto v = get("pod.horizon")) cfg.snapshot_horizon = to_double(*v, "horizon");
  if (auto v = get("pod.steps")) cfg.snapshot_steps = to_integer(*v, "steps");
  if (auto v = get("bt.sweep")) cfg.bt_sweep = parse_index_list(*v);
  if (auto v = get("output.dir")) cfg.output_dir = *v;
  if (auto v = get("output.timings")) cfg.timings = to_bool(*v, "timings");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_config(in);
}

std::string format_history_csv(const ConvergenceHistory& history, bool timings) {
  std::string out = "r,R_P,E_K,E_G,elapsed_s\n";
  for (const auto& rec : history.records) {
    out += std::to_string(rec.r) + ',' + format_value(rec.residual) + ',' +
           format_optional(rec.gain_error) + ',' +
           format_optional(rec.h2_error) + ',' +
           (timings ? format_value(rec.elapsed_s) : std::string()) + '\n';
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto run_start = Clock::now();
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);

  ExperimentResult result;
  nlohmann::json manifest;
  manifest["config"] = config_json(cfg);
  manifest["versions"] = {
      {"aremor", kVersion},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__}};

  const StateSpaceSystem sys = assemble_system(cfg.problem);
  result.n = sys.n();
  manifest["n"] = sys.n();

  std::optional<Reference> reference;
  if (sys.n() <= cfg.reference_cutoff) {
    const auto t0 = Clock::now();
    try {
      const Matrix P = solve_dense_are(sys.dense_A(), sys.B, sys.C, sys.R);
      Reference ref;
      ref.K = sys.R.llt().solve(sys.B.transpose() * P);
      ref.h2.emplace(sys);
      reference = std::move(ref);
      manifest["reference"] = {
          {"status", "ok"},
          {"h2_norm", reference->h2->full_norm()},
          {"seconds",
           std::chrono::duration<double>(Clock::now() - t0).count()}};
    } catch (const Error& e) {
      manifest["reference"] = {{"status", "failed"}, {"message", e.what()}};
    }
  } else {
    manifest["reference"] = {{"status", "skipped"}};
  }
  result.has_reference = reference.has_value();
  const Reference* ref = reference ? &*reference : nullptr;

  nlohmann::json methods = nlohmann::json::array();
  for (const auto& method : cfg.methods) {
    const auto t0 = Clock::now();
    MethodOutcome outcome;
    try {
      if (method == "pod") {
        const PodReduction pod(integrate_adjoint(
            sys, cfg.snapshot_horizon, static_cast<int>(cfg.snapshot_steps)));
        outcome = run_sweep_method(
            method, sys, cfg.pod_sweep, ref,
            [&](Index r) { return pod.basis(sys, r); }, t0);
      } else if (method == "bt") {
        const BalancedTruncation bt(sys);
        outcome = run_sweep_method(
            method, sys, cfg.bt_sweep, ref,
            [&](Index r) { return bt.basis(sys, r); }, t0);
      } else {
        outcome = run_krylov_method(method, sys, cfg, ref);
      }
    } catch (const Error& e) {
      outcome.method = method;
      outcome.status = "failed";
      outcome.message = e.what();
    }
    outcome.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
    write_text(out_dir / (method + ".csv"),
               format_history_csv(outcome.history, cfg.timings));

    const bool ok = outcome.status == "converged" || outcome.status == "completed";
    if (!ok) result.exit_code = kExitSolverFailure;
    nlohmann::json entry = {{"method", method},
                            {"status", outcome.status},
                            {"message", outcome.message},
                            {"events", outcome.history.events},
                            {"rows", outcome.history.records.size()},
                            {"wall_s", outcome.wall_s}};
    if (!outcome.history.empty()) {
      entry["final_r"] = outcome.history.back().r;
      entry["final_R_P"] = outcome.history.back().residual;
    }
    methods.push_back(entry);
    result.outcomes.push_back(std::move(outcome));
  }
  manifest["methods"] = methods;
  manifest["exit_code"] = result.exit_code;
  manifest["total_wall_s"] =
      std::chrono::duration<double>(Clock::now() - run_start).count();
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

std::vector<SweepRow> scaling_sweep(const ExperimentConfig& cfg,
                                    const std::vector<double>& dx_list) {
  cfg.validate();
  if (dx_list.empty()) throw ConfigError("dx list must not be empty");
  const fs::path out_dir(cfg.output_dir);
  fs::create_directories(out_dir);

  std::vector<std::string> methods;
  for (const auto& m : cfg.methods) {
    if (m == "gark" || m == "pgark") methods.push_back(m);
  }
  if (methods.empty()) throw ConfigError("sweep needs gark or pgark");

  KrylovOptions options = krylov_options(cfg);
  if (!options.time_limit_s) options.time_limit_s = 600.0;

  std::vector<SweepRow> rows;
  for (const double dx : dx_list) {
    ExperimentConfig sized = cfg;
    sized.problem.dx = dx;
    std::optional<StateSpaceSystem> sys;
    std::string setup_error;
    try {
      sys = assemble_system(sized.problem);
    } catch (const Error& e) {
      setup_error = e.what();
    }
    for (const auto& method : methods) {
      SweepRow row;
      row.method = method;
      row.dx = dx;
      if (!sys) {
        row.status = "failed: " + setup_error;
        rows.push_back(row);
        continue;
      }
      row.n = sys->n();
      const auto t0 = Clock::now();
      try {
        const KrylovResult res =
            method == "gark" ? gark(*sys, options) : pgark(*sys, options);
        row.r = res.model.order();
        row.iterations = static_cast<Index>(res.history.records.size());
        row.residual = res.solution.relative_residual_norm;
        row.status = "converged";
      } catch (const KrylovError& e) {
        if (!e.history().empty()) {
          row.r = e.history().back().r;
          row.residual = e.history().back().residual;
        }
        row.iterations = static_cast<Index>(e.history().records.size());
        row.status = failure_status(e.kind());
      } catch (const Error& e) {
        row.status = std::string("failed: ") + e.what();
      }
      row.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
      rows.push_back(row);
    }
  }

  std::string csv = "method,dx,n,r,iterations,R_P,elapsed_s,status\n";
  for (const auto& row : rows) {
    std::string status = row.status;
    std::replace(status.begin(), status.end(), ',', ';');
    csv += row.method + ',' + format_value(row.dx) + ',' + std::to_string(row.n) +
           ',' + std::to_string(row.r) + ',' + std::to_string(row.iterations) +
           ',' + format_value(row.residual) + ',' +
           (cfg.timings ? format_value(row.elapsed_s) : std::string()) + ',' +
           status + '\n';
  }
  write_text(out_dir / "sweep.csv", csv);
  return rows;
}

}  // namespace aremor
