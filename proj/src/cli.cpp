#include "cone_fixpoint/cli.hpp"

#include <cstdint>
#include <optional>

#include <CLI11.hpp>

#include "cone_fixpoint/certificate.hpp"
#include "cone_fixpoint/engine.hpp"
#include "cone_fixpoint/error.hpp"
#include "cone_fixpoint/io.hpp"
#include "cone_fixpoint/problems.hpp"

namespace cone_fixpoint {

namespace {

struct ProblemSource {
  std::string file;
  std::string builtin;
};

struct LoadedProblem {
  std::string label;
  ContractionSpec spec;
  Vector x0;
  RunParameters run;
  nlohmann::ordered_json echo;
};

struct RunOptions {
  std::string rule;
  double eps = 1e-10;
  std::size_t count = 0;
  std::size_t max_iterations = kDefaultMaxIterations;
};

void add_source_options(CLI::App& cmd, ProblemSource& source) {
  auto* file = cmd.add_option("--problem", source.file, "Problem file (JSON)");
  auto* builtin = cmd.add_option("--builtin", source.builtin, "Builtin problem name");
  file->excludes(builtin);
}

void add_run_options(CLI::App& cmd, RunOptions& opts) {
  cmd.add_option("--rule", opts.rule, "Stopping rule: apriori, aposteriori or fixed")
      ->check(CLI::IsMember({"apriori", "aposteriori", "fixed"}));
  cmd.add_option("--eps", opts.eps, "Target distance to the fixed point")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--count", opts.count, "Number of steps for --rule fixed");
  cmd.add_option("--max-iter", opts.max_iterations, "Iteration guard")
      ->check(CLI::PositiveNumber);
}

LoadedProblem load(const ProblemSource& source) {
  if (source.file.empty() == source.builtin.empty()) {
    throw Error(ErrorKind::kInvalidInput, "exactly one of --problem or --builtin is required");
  }
  if (!source.builtin.empty()) {
    ProblemInstance p = builtin_problem(source.builtin);
    auto echo = problem_to_json(p.spec, p.x0);
    echo["builtin"] = p.name;
    return {p.name, p.spec, p.x0, {}, echo};
  }
  ProblemFile f = load_problem(source.file);
  auto echo = problem_to_json(f.spec, f.x0);
  return {source.file, f.spec, f.x0, f.run, echo};
}

// Flags given on the command line win over the problem file, which wins over
// the defaults.
StoppingRule resolve_rule(const CLI::App& cmd, const RunOptions& opts, const RunParameters& file) {
  StoppingRule rule;
  rule.kind = file.rule.value_or(StoppingRule::Kind::kAPriori);
  if (cmd.count("--rule") > 0) rule.kind = parse_rule_kind(opts.rule);
  rule.eps = cmd.count("--eps") > 0 ? opts.eps : file.eps.value_or(opts.eps);
  rule.count = cmd.count("--count") > 0 ? opts.count : file.count.value_or(opts.count);
  rule.max_iterations = cmd.count("--max-iter") > 0
                            ? opts.max_iterations
                            : file.max_iterations.value_or(opts.max_iterations);
  if (rule.kind == StoppingRule::Kind::kFixedCount && cmd.count("--count") == 0 && !file.count) {
    throw Error(ErrorKind::kInvalidInput, "--rule fixed needs --count");
  }
  return rule;
}

void print_summary(std::ostream& out, const LoadedProblem& problem, const IterationTrace& trace) {
  const auto old_precision = out.precision(17);
  out << "problem: " << problem.label << " (" << family_name(problem.spec.map())
      << ", m=" << problem.spec.dimension() << ")\n"
      << "lambda: " << problem.spec.lambda() << "\n"
      << "d: " << trace.d << "\n"
      << "N: " << trace.steps() << "\n"
      << "t*: " << trace.limit_t() << "\n"
      << "final x: " << format_vector(trace.final_point().x()) << "\n"
      << "final t: " << trace.final_point().t() << "\n"
      << "final bound lambda^N d/(1-lambda): " << trace.stopping_bound() << "\n"
      << "stop: " << to_string(trace.stop_reason) << "\n";
  out.precision(old_precision);
}

void warn_conditioning(std::ostream& err, const IterationTrace& trace) {
  if (trace.conditioning_warning) {
    err << "warning: 1 - lambda < " << kConditioningThreshold
        << "; d/(1-lambda) amplifies rounding\n";
  }
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kNotAContraction:
    case ErrorKind::kEstimation:
      return kExitNumerical;
    case ErrorKind::kInvalidWitness:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

int cmd_solve(const CLI::App& cmd, const ProblemSource& source, const RunOptions& opts,
              const std::string& trace_path, std::ostream& out, std::ostream& err) {
  const LoadedProblem problem = load(source);
  validate_contraction(problem.spec);
  const StoppingRule rule = resolve_rule(cmd, opts, problem.run);
  const IterationTrace trace = run(problem.spec, problem.x0, rule);

  write_file_atomic(trace_path, trace_to_csv(trace));
  print_summary(out, problem, trace);
  out << "trace: " << trace_path << "\n";
  warn_conditioning(err, trace);
  if (trace.stop_reason == StopReason::kMaxIterations) {
    err << "error: stopping rule not met within " << rule.max_iterations
        << " iterations; partial trace written\n";
    return kExitNumerical;
  }
  return kExitOk;
}

struct CertifyOptions {
  std::size_t omega_samples = kDefaultOmegaSamples;
  std::uint64_t seed = 0;
  std::string certificate_path = "certificate.json";
  std::string verify_path;
  std::string trace_path;
  bool full = false;
};

int cmd_certify(const CLI::App& cmd, const ProblemSource& source, const RunOptions& opts,
                const CertifyOptions& copts, std::ostream& out, std::ostream& err) {
  const LoadedProblem problem = load(source);
  validate_contraction(problem.spec);
  const TolerancePolicy tol = TolerancePolicy::from_environment();
  const std::uint64_t seed =
      cmd.count("--seed") > 0 ? copts.seed : problem.run.seed.value_or(copts.seed);

  std::optional<IterationTrace> trace;
  std::optional<StopReason> stop_reason;
  if (!copts.verify_path.empty()) {
    trace = trace_from_points(problem.spec, parse_trace_csv(read_file(copts.verify_path)));
  } else {
    trace = run(problem.spec, problem.x0, resolve_rule(cmd, opts, problem.run));
    stop_reason = trace->stop_reason;
    if (!copts.trace_path.empty()) write_file_atomic(copts.trace_path, trace_to_csv(*trace));
    warn_conditioning(err, *trace);
    if (trace->stop_reason == StopReason::kMaxIterations) {
      err << "warning: stopping rule not met; certifying the truncated trace\n";
    }
  }

  const OmegaSpec om = make_omega_spec(problem.spec, trace->points.front().x());
  std::vector<AugmentedPoint> witnesses{canonical_omega_witness(om)};
  if (copts.omega_samples > 0) {
    auto samples = sample_omega(om, copts.omega_samples, seed);
    witnesses.insert(witnesses.end(), samples.begin(), samples.end());
  }

  const ConvergenceCertificate cert = verify_certificate(*trace, witnesses, tol);
  const auto doc = certificate_to_json(cert, {problem.echo, seed, stop_reason, copts.full});
  write_file_atomic(copts.certificate_path, doc.dump(2) + "\n");

  const auto old_precision = out.precision(17);
  out << "problem: " << problem.label << "\n"
      << "N: " << cert.steps << "\n"
      << "d: " << cert.d << "\n"
      << "t*: " << cert.t_star << "\n"
      << "limit x: " << format_vector(cert.limit_point->x()) << "\n"
      << "witnesses: " << witnesses.size() << "\n"
      << "verdict: " << (cert.pass ? "pass" : "fail") << "\n";
  out.precision(old_precision);
  if (cert.first_failure) out << "first failure: " << cert.first_failure->describe() << "\n";
  out << "certificate: " << copts.certificate_path << "\n";
  return cert.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_omega(const ProblemSource& source, const std::vector<double>& x, double t,
              std::ostream& out) {
  const LoadedProblem problem = load(source);
  validate_contraction(problem.spec);
  if (x.size() != problem.spec.dimension()) {
    throw Error(ErrorKind::kInvalidInput, "--x has " + std::to_string(x.size()) +
                                              " coordinates, problem dimension is " +
                                              std::to_string(problem.spec.dimension()));
  }
  const OmegaSpec om = make_omega_spec(problem.spec, problem.x0);
  const AugmentedPoint point(Vector(x), t);
  const OmegaBounds bounds = omega_bounds(om, point.x());
  const bool member = omega_contains(om, point, TolerancePolicy::from_environment());

  const auto old_precision = out.precision(17);
  out << "point: x=" << format_vector(point.x()) << " t=" << t << "\n"
      << "bound ||x - x0||: " << bounds.distance_bound << "\n"
      << "bound (d + ||f(x) - x||)/(1 - lambda): " << bounds.residual_bound << "\n"
      << "member: " << (member ? "yes" : "no") << "\n";
  out.precision(old_precision);
  return member ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed-point solver with Lorentz-cone convergence certificates", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  ProblemSource solve_source;
  RunOptions solve_opts;
  std::string trace_path = "trace.csv";
  auto* solve = app.add_subcommand("solve", "Run the augmented Picard iteration");
  add_source_options(*solve, solve_source);
  add_run_options(*solve, solve_opts);
  solve->add_option("--trace", trace_path, "Trace CSV output path")->capture_default_str();

  ProblemSource certify_source;
  RunOptions certify_opts;
  CertifyOptions copts;
  auto* certify = app.add_subcommand("certify", "Build and verify a convergence certificate");
  add_source_options(*certify, certify_source);
  add_run_options(*certify, certify_opts);
  certify->add_option("--omega-samples", copts.omega_samples, "Sampled Omega witnesses");
  certify->add_option("--seed", copts.seed, "Seed for witness sampling");
  certify->add_option("--certificate", copts.certificate_path, "Certificate output path");
  certify->add_option("--verify", copts.verify_path, "Verify an existing trace CSV instead of solving");
  certify->add_option("--trace", copts.trace_path, "Also write the trace CSV");
  certify->add_flag("--full", copts.full, "Include per-step residual arrays");

  ProblemSource omega_source;
  std::vector<double> omega_x;
  double omega_t = 0.0;
  auto* omega = app.add_subcommand("omega", "Test membership of (x, t) in Omega");
  add_source_options(*omega, omega_source);
  omega->add_option("--x", omega_x, "Point coordinates (space or comma separated)")
      ->required()
      ->delimiter(',');
  omega->add_option("--t", omega_t, "Augmented coordinate t")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(*solve, solve_source, solve_opts, trace_path, out, err);
    if (certify->parsed()) return cmd_certify(*certify, certify_source, certify_opts, copts, out, err);
    return cmd_omega(omega_source, omega_x, omega_t, out);
  } catch (const InvalidWitnessError& e) {
    err << "internal error (please report): " << e.what() << "\n";
    return kExitInternal;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cone_fixpoint
