#include "dikin/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "dikin/barrier.hpp"
#include "dikin/center.hpp"
#include "dikin/dikin.hpp"

namespace dikin::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kParseError;
    case ErrorCode::Unbounded: return kUnbounded;
    case ErrorCode::NoInteriorFound: return kNoInterior;
    case ErrorCode::InvalidArgument:
    case ErrorCode::EpsilonOutOfRange: return kUsageError;
    default: return kNumericalError;
  }
}

Json base_report(std::string_view command, std::uint64_t seed) {
  Json r;
  r["schema_version"] = kSchemaVersion;
  r["version"] = kVersion;
  r["command"] = std::string(command);
  r["instance_digest"] = nullptr;
  r["seed"] = seed;
  r["status"] = "ok";
  r["exit_code"] = 0;
  r["results"] = nullptr;
  r["timings"] = Json::object();
  return r;
}

void set_error(RunOutcome& out, int exit_code, std::string_view code,
               const std::string& message, int index = -1) {
  out.exit_code = exit_code;
  out.report["status"] = "error";
  out.report["exit_code"] = exit_code;
  Json e;
  e["code"] = std::string(code);
  e["message"] = message;
  e["index"] = index;
  out.report["error"] = std::move(e);
}

Json violations_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) {
    Json j;
    j["kind"] = std::string(to_string(v.kind));
    j["index"] = v.index;
    j["message"] = v.message;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json validation_json(const ValidationReport& rep) {
  Json j;
  j["ok"] = rep.ok();
  j["violations"] = violations_json(rep.failures());
  j["notes"] = violations_json(rep.notes());
  return j;
}

Json center_json(const CenterResult& cr, const VectorXd& start) {
  Json j;
  j["center"] = to_json(cr.center);
  j["newton_decrement"] = cr.newton_decrement;
  j["iterations"] = cr.iterations;
  j["barrier_value"] = cr.barrier_value;
  j["hessian_at_center"] = to_json(cr.hessian_at_center.matrix());
  j["start"] = to_json(start);
  Json trace = Json::array();
  for (double v : cr.value_trace) trace.push_back(v);
  j["value_trace"] = std::move(trace);
  return j;
}

Json containment_json(const ContainmentReport& rep, const VectorXd& center) {
  Json j;
  j["center"] = to_json(center);
  j["inner_ok"] = rep.inner.ok;
  j["inner_min_slacks"] = to_json(rep.inner.min_slacks);
  j["empirical_outer_radius"] = rep.empirical_outer_radius;
  j["corrected_bound"] = rep.corrected_bound;
  j["old_bound"] = rep.old_bound;
  j["outer_ok"] = rep.outer_ok;
  j["old_bound_violated"] = rep.old_bound_violated;
  j["bound_gap"] = rep.bound_gap;
  j["witness_point"] = to_json(rep.witness_point);
  j["points_checked"] = rep.points_checked;
  j["bound_violations"] = rep.bound_violations;
  return j;
}

Json range_json(const RangeEstimate& r) {
  Json j;
  j["method"] = std::string(to_string(r.method));
  j["z_min_hat"] = r.z_min_hat;
  j["z_max_hat"] = r.z_max_hat;
  j["argmin_hat"] = to_json(r.argmin_hat);
  j["argmax_hat"] = to_json(r.argmax_hat);
  j["samples_used"] = r.samples_used;
  j["grid_checked"] = r.grid_checked;
  return j;
}

Json certificate_json(const ApproxCertificate& c, OracleMode mode) {
  Json j;
  j["solution"] = to_json(c.solution);
  j["objective_value"] = c.objective_value;
  j["m"] = c.m;
  j["c_of_m"] = c.c_of_m;
  j["epsilon"] = c.epsilon;
  j["theorem_bound"] = c.theorem_bound;
  j["exact_trs_path"] = c.exact_trs_path;
  j["center"] = to_json(c.center.center);
  j["center_objective"] = c.center_objective;
  j["min_slack"] = c.min_slack;
  j["oracle"] = std::string(to_string(mode));
  if (c.range) j["range"] = range_json(*c.range);
  if (c.ratio_estimate) j["ratio_estimate"] = *c.ratio_estimate;
  if (c.ratio_note) j["ratio_note"] = *c.ratio_note;
  return j;
}

// Shared front half of center, dikin and solve: parse, validate, clamp,
// boundedness, start point. Returns nullopt after recording the failure.
struct Prepared {
  ProblemInstance problem;
  VectorXd start;
};

std::optional<Prepared> prepare(const fs::path& path, const CenterFlags& flags,
                                RunOutcome& out) {
  auto t0 = Clock::now();
  ProblemInstance problem = read_instance(path);
  out.report["instance_digest"] = instance_digest(problem);
  const ValidationReport rep = validate(problem);
  if (!rep.ok()) {
    set_error(out, kValidationFailure, "ValidationFailure",
              "instance failed validation");
    out.report["error"]["violations"] = violations_json(rep.failures());
    return std::nullopt;
  }
  std::vector<EllipsoidConstraint> cons;
  for (const auto& con : problem.feasible_set.constraints()) {
    cons.push_back(clamp_psd(con));
  }
  problem.feasible_set = Intersection(std::move(cons));
  out.report["timings"]["parse_ms"] = ms_since(t0);

  t0 = Clock::now();
  const Boundedness b = check_boundedness(problem.feasible_set);
  if (const auto* dir = std::get_if<UnboundedDirection>(&b)) {
    set_error(out, kUnbounded, to_string(ErrorCode::Unbounded),
              "feasible set is unbounded along the witness direction");
    out.report["error"]["witness_direction"] = to_json(dir->direction);
    return std::nullopt;
  }
  VectorXd start;
  if (flags.start) {
    if (flags.start->size() != problem.feasible_set.dim()) {
      throw Error(ErrorCode::InvalidArgument,
                  "--start has the wrong dimension");
    }
    if (!(problem.feasible_set.min_slack(*flags.start) > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "--start is not strictly feasible");
    }
    start = *flags.start;
  } else {
    start = interior_start(problem, flags.seed);
  }
  out.report["timings"]["phase1_ms"] = ms_since(t0);
  return Prepared{std::move(problem), std::move(start)};
}

CenterOptions center_options(const CenterFlags& flags) {
  CenterOptions o;
  o.decrement_tol = flags.tol;
  o.max_iterations = flags.max_iter;
  o.check();
  return o;
}

template <class Body>
RunOutcome guarded(std::string_view command, std::uint64_t seed, Body&& body) {
  RunOutcome out;
  out.report = base_report(command, seed);
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const Error& e) {
    set_error(out, exit_code_for(e.code()), to_string(e.code()), e.what(),
              e.index());
  } catch (const std::exception& e) {
    set_error(out, kNumericalError, "Internal", e.what());
  }
  out.report["timings"]["total_ms"] = ms_since(t0);
  return out;
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("DIKIN_QCQP_SEED"); env && *env) {
    const std::string s(env);
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || s.front() == '-') {
      throw Error(ErrorCode::InvalidArgument,
                  "DIKIN_QCQP_SEED must be an unsigned integer");
    }
    return v;
  }
  return 1;
}

VectorXd parse_vector(const std::string& text) {
  std::vector<double> vals;
  try {
    if (!text.empty() && text.front() == '[') {
      for (const auto& v : nlohmann::json::parse(text)) {
        vals.push_back(v.get<double>());
      }
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        vals.push_back(std::stod(item, &pos));
        if (item.find_first_not_of(" \t", pos) != std::string::npos) {
          throw std::invalid_argument(item);
        }
      }
    }
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse vector: " + text);
  }
  if (vals.empty()) throw Error(ErrorCode::InvalidArgument, "empty vector");
  return Eigen::Map<VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

RunOutcome cmd_validate(const fs::path& path) {
  return guarded("validate", 0, [&](RunOutcome& out) {
    const ProblemInstance problem = read_instance(path);
    out.report["instance_digest"] = instance_digest(problem);
    const ValidationReport rep = validate(problem);
    out.report["results"] = validation_json(rep);
    if (!rep.ok()) {
      set_error(out, kValidationFailure, "ValidationFailure",
                "instance failed validation");
    }
  });
}

RunOutcome cmd_center(const fs::path& path, const CenterFlags& flags) {
  return guarded("center", flags.seed, [&](RunOutcome& out) {
    const CenterOptions opts = center_options(flags);
    auto prep = prepare(path, flags, out);
    if (!prep) return;
    const auto t0 = Clock::now();
    const CenterResult cr =
        analytic_center(prep->problem.feasible_set, prep->start, opts);
    out.report["timings"]["center_ms"] = ms_since(t0);
    out.report["results"] = center_json(cr, prep->start);
  });
}

RunOutcome cmd_dikin(const fs::path& path, const DikinFlags& flags) {
  return guarded("dikin", flags.center.seed, [&](RunOutcome& out) {
    const CenterOptions opts = center_options(flags.center);
    if (flags.samples < 0) {
      throw Error(ErrorCode::InvalidArgument, "--samples must be >= 0");
    }
    auto prep = prepare(path, flags.center, out);
    if (!prep) return;
    const auto& set = prep->problem.feasible_set;
    auto t0 = Clock::now();
    const CenterResult cr = analytic_center(set, prep->start, opts);
    out.report["timings"]["center_ms"] = ms_since(t0);
    t0 = Clock::now();
    OuterOptions oo;
    oo.samples = flags.samples;
    oo.seed = flags.center.seed;
    const ContainmentReport rep = containment_report(set, cr, oo);
    out.report["timings"]["containment_ms"] = ms_since(t0);
    out.report["results"] = containment_json(rep, cr.center);
  });
}

RunOutcome cmd_solve(const fs::path& path, const SolveFlags& flags) {
  return guarded("solve", flags.center.seed, [&](RunOutcome& out) {
    ApproxOptions ao;
    ao.center = center_options(flags.center);
    ao.epsilon = flags.epsilon;
    ao.oracle = flags.oracle;
    ao.samples = flags.samples;
    ao.seed = flags.center.seed;
    if (flags.samples < 0) {
      throw Error(ErrorCode::InvalidArgument, "--samples must be >= 0");
    }
    auto prep = prepare(path, flags.center, out);
    if (!prep) return;
    if (flags.center.start) prep->problem.interior_hint = prep->start;
    const ApproxCertificate cert = approx_minimize(prep->problem, ao);
    out.report["timings"]["center_ms"] = cert.ms_center;
    out.report["timings"]["trs_ms"] = cert.ms_trs;
    out.report["timings"]["oracle_ms"] = cert.ms_oracle;
    out.report["results"] = certificate_json(cert, flags.oracle);
  });
}

RunOutcome cmd_counterexample() {
  return guarded("counterexample", 42, [&](RunOutcome& out) {
    const CounterexampleReport rep = counterexample_report();
    out.report["instance_digest"] = instance_digest(example1_instance());
    Json j;
    j["center"] = to_json(rep.center.center);
    j["hessian"] = rep.hessian;
    j["inner_min_slack"] = rep.containment.inner.min_slacks.minCoeff();
    j["empirical_outer_radius"] = rep.containment.empirical_outer_radius;
    j["witness_point"] = to_json(rep.containment.witness_point);
    j["old_bound"] = rep.containment.old_bound;
    j["corrected_bound"] = rep.containment.corrected_bound;
    j["min_slack_at_corrected"] = rep.min_slack_at_corrected;
    j["verdicts"]["inner_contained"] = rep.inner_contained;
    j["verdicts"]["contained_in_old_bound"] = rep.contained_in_old_bound;
    j["verdicts"]["tight_at_corrected_bound"] = rep.tight_at_corrected_bound;
    j["matches_expected"] = rep.matches_expected;
    out.report["results"] = std::move(j);
    if (!rep.matches_expected) {
      set_error(out, kCounterexampleMismatch, "CounterexampleMismatch",
                "a verdict differs from the expected counterexample outcome");
    }
  });
}

std::string cmd_gen(const GeneratorOptions& opts, bool example1_preset) {
  return serialize_instance(example1_preset ? example1_instance()
                                            : generate_instance(opts));
}

namespace {

std::string fmt9(double v) { return format_double(v, 9); }

}  // namespace

std::string bench_row(const fs::path& path, const BenchFlags& flags) {
  std::vector<std::string> cols(14);
  cols[0] = path.filename().string();
  try {
    ProblemInstance problem = read_instance(path);
    const auto& set0 = problem.feasible_set;
    cols[1] = std::to_string(set0.dim());
    cols[2] = std::to_string(set0.size());
    const ValidationReport rep = validate(problem);
    if (!rep.ok()) throw Error(ErrorCode::InvalidArgument, "validation");
    std::vector<EllipsoidConstraint> cons;
    for (const auto& con : set0.constraints()) cons.push_back(clamp_psd(con));
    problem.feasible_set = Intersection(std::move(cons));
    const auto& set = problem.feasible_set;
    if (std::holds_alternative<UnboundedDirection>(check_boundedness(set))) {
      throw Error(ErrorCode::Unbounded, "unbounded");
    }

    auto t0 = Clock::now();
    const CenterResult cr =
        analytic_center(set, interior_start(problem, flags.seed));
    const double ms_center = ms_since(t0);
    cols[3] = std::to_string(cr.iterations);
    cols[4] = fmt9(cr.newton_decrement);

    OuterOptions oo;
    oo.samples = flags.samples;
    oo.seed = flags.seed;
    const ContainmentReport cont = containment_report(set, cr, oo);
    cols[5] = cont.inner.ok ? "true" : "false";
    cols[6] = fmt9(cont.empirical_outer_radius);
    cols[7] = fmt9(cont.corrected_bound);

    ApproxOptions ao;
    ao.epsilon = flags.epsilon;
    ao.samples = flags.samples;
    ao.seed = flags.seed;
    ao.precomputed_center = cr;
    const ApproxCertificate cert = approx_minimize(problem, ao);
    if (cert.ratio_estimate) cols[8] = fmt9(*cert.ratio_estimate);
    if (!cert.exact_trs_path) cols[9] = fmt9(cert.theorem_bound);
    if (flags.timings) {
      cols[10] = fmt9(ms_center);
      cols[11] = fmt9(cert.ms_trs);
      cols[12] = fmt9(cert.ms_oracle);
    }
  } catch (const Error& e) {
    for (std::size_t i = 3; i < 13; ++i) cols[i].clear();
    cols[13] = e.code() == ErrorCode::InvalidArgument &&
                       std::string_view(e.what()) == "validation"
                   ? "ValidationFailure"
                   : std::string(to_string(e.code()));
  } catch (const std::exception&) {
    for (std::size_t i = 3; i < 13; ++i) cols[i].clear();
    cols[13] = "Internal";
  }
  std::string row;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) row += ',';
    row += cols[i];
  }
  return row;
}

std::string cmd_bench(const fs::path& dir, const BenchFlags& flags) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::InvalidArgument,
                "not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });

  std::vector<std::string> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      rows[i] = bench_row(files[i], flags);
    }
  };
  unsigned jobs = flags.jobs > 0 ? static_cast<unsigned>(flags.jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, files.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) csv += r + "\n";
  return csv;
}

namespace {

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out_path);
  f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Analytic centers, Dikin ellipsoids and the Dikin-ellipsoid "
               "approximation for quadratic programs over ellipsoids"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string instance;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  CenterFlags cf;
  std::string start_text;
  int samples = 2000;
  double epsilon = 0.05;
  std::string oracle = "grid";

  auto add_center_flags = [&](CLI::App* sub) {
    sub->add_option("instance", instance, "instance JSON file")->required();
    sub->add_option("--tol", cf.tol, "Newton decrement tolerance")
        ->capture_default_str();
    sub->add_option("--max-iter", cf.max_iter, "Newton iteration limit")
        ->capture_default_str();
    sub->add_option("--start", start_text,
                    "strictly feasible start, e.g. 0.1,0.2");
    sub->add_option("--seed", seed, "seed (default: $DIKIN_QCQP_SEED or 1)");
    sub->add_option("--out", out_path, "write the report here");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check an instance");
  validate_cmd->add_option("instance", instance, "instance JSON file")
      ->required();
  validate_cmd->add_option("--out", out_path, "write the report here");

  auto* center_cmd = app.add_subcommand("center", "analytic center");
  add_center_flags(center_cmd);

  auto* dikin_cmd =
      app.add_subcommand("dikin", "inner and outer Dikin containment");
  add_center_flags(dikin_cmd);
  dikin_cmd->add_option("--samples", samples, "hit-and-run samples")
      ->capture_default_str();

  auto* solve_cmd =
      app.add_subcommand("solve", "Dikin-ellipsoid approximation");
  add_center_flags(solve_cmd);
  solve_cmd->add_option("--samples", samples, "oracle samples")
      ->capture_default_str();
  solve_cmd->add_option("--epsilon", epsilon, "reported epsilon")
      ->capture_default_str();
  solve_cmd->add_option("--oracle", oracle, "range oracle")
      ->check(CLI::IsMember({"grid", "sampling", "off"}))
      ->capture_default_str();

  auto* cex_cmd = app.add_subcommand(
      "counterexample", "reproduce the one-dimensional counterexample");
  cex_cmd->add_option("--out", out_path, "write the report here");

  GeneratorOptions go;
  std::string kind = "balls";
  std::string preset;
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance");
  gen_cmd->add_option("--n", go.n, "dimension")->capture_default_str();
  gen_cmd->add_option("--m", go.m, "number of constraints")
      ->capture_default_str();
  gen_cmd->add_option("--seed", seed, "seed (default: $DIKIN_QCQP_SEED or 1)");
  gen_cmd->add_option("--kind", kind, "instance family")
      ->check(CLI::IsMember({"balls", "mixed", "halfspace-capped"}))
      ->capture_default_str();
  gen_cmd->add_option("--cond", go.cond, "eigenvalue spread of each ball")
      ->capture_default_str();
  gen_cmd->add_option("--preset", preset, "fixed instance")
      ->check(CLI::IsMember({"example1"}));
  gen_cmd->add_option("--out", out_path, "write the instance here");

  BenchFlags bf;
  bool no_timings = false;
  std::string dir;
  auto* bench_cmd = app.add_subcommand("bench", "CSV summary of a directory");
  bench_cmd->add_option("dir", dir, "directory of instance files")->required();
  bench_cmd->add_option("--jobs", bf.jobs, "worker threads (0: all cores)")
      ->capture_default_str();
  bench_cmd->add_option("--seed", seed, "seed (default: $DIKIN_QCQP_SEED or 1)");
  bench_cmd->add_option("--samples", bf.samples, "samples per instance")
      ->capture_default_str();
  bench_cmd->add_option("--epsilon", bf.epsilon, "reported epsilon")
      ->capture_default_str();
  bench_cmd->add_flag("--no-timings", no_timings,
                      "leave timing columns empty");
  bench_cmd->add_option("--out", out_path, "write the CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsageError;
  }

  try {
    cf.seed = resolve_seed(seed);
    if (!start_text.empty()) cf.start = parse_vector(start_text);

    RunOutcome result;
    if (*validate_cmd) {
      result = cmd_validate(instance);
    } else if (*center_cmd) {
      result = cmd_center(instance, cf);
    } else if (*dikin_cmd) {
      result = cmd_dikin(instance, DikinFlags{cf, samples});
    } else if (*solve_cmd) {
      SolveFlags sf{cf, epsilon, OracleMode::Grid, samples};
      if (oracle == "sampling") sf.oracle = OracleMode::Sampling;
      if (oracle == "off") sf.oracle = OracleMode::Off;
      result = cmd_solve(instance, sf);
    } else if (*cex_cmd) {
      result = cmd_counterexample();
    } else if (*gen_cmd) {
      go.seed = cf.seed;
      go.kind = *parse_instance_kind(kind);
      emit(cmd_gen(go, preset == "example1"), out_path, out);
      return kOk;
    } else if (*bench_cmd) {
      bf.seed = cf.seed;
      bf.timings = !no_timings;
      emit(cmd_bench(dir, bf), out_path, out);
      return kOk;
    }
    emit(write_json(result.report), out_path, out);
    if (result.exit_code != kOk && result.report.contains("error")) {
      err << "error: " << result.report["error"]["message"].get<std::string>()
          << "\n";
    }
    return result.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalError;
  }
}

}  // namespace dikin::cli
