#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cone_fixpoint/certificate.hpp"
#include "cone_fixpoint/contraction.hpp"
#include "cone_fixpoint/engine.hpp"

namespace cone_fixpoint {

inline constexpr const char* kToolName = "cone_fixpoint";
inline constexpr const char* kToolVersion = "1.0.0";

/// Optional run parameters carried by a problem file.
struct RunParameters {
  std::optional<StoppingRule::Kind> rule;
  std::optional<double> eps;
  std::optional<std::size_t> count;
  std::optional<std::size_t> max_iterations;
  std::optional<std::uint64_t> seed;
};

struct ProblemFile {
  ContractionSpec spec;
  Vector x0;
  RunParameters run;
};

/// Parses the JSON problem format:
///
///   {"dimension": 2, "lambda": 0.5,
///    "map": {"kind": "scaled_rotation", "theta": 1.5707963267948966,
///            "scale": 0.5, "b": [1, 0]},
///    "x0": [0, 0]}
///
/// Map kinds and their parameters: constant {c}, affine {A (rows), b},
/// scaled_rotation {theta (radians), scale, b}, kepler {e, M}. Optional
/// top-level keys: rule ("apriori" | "aposteriori" | "fixed"), eps, count,
/// max_iterations, seed. Unknown keys are an error. Throws kParse with a
/// message naming the offending field; does not check the contraction factor.
ProblemFile parse_problem(std::string_view text);
ProblemFile load_problem(const std::filesystem::path& path);

nlohmann::ordered_json problem_to_json(const ContractionSpec& spec, const Vector& x0);

StoppingRule::Kind parse_rule_kind(std::string_view name);
const char* rule_kind_name(StoppingRule::Kind kind);

/// Trace CSV: header `n,x_0,...,x_{m-1},t,step_norm,t_increment,mono_residual`,
/// one row per iterate, every real printed with 17 significant digits.
/// Row 0 has no predecessor and carries zeros in the last three columns.
std::string trace_to_csv(const IterationTrace& trace);

/// Reads the points back. The derived columns are ignored; the verifier
/// recomputes them. Throws kParse on malformed input.
std::vector<AugmentedPoint> parse_trace_csv(std::string_view text);

/// Wraps loaded points as a trace of `spec`. d is recomputed from the first
/// point; the stop reason is reported as kFixedCountReached.
IterationTrace trace_from_points(const ContractionSpec& spec, std::vector<AugmentedPoint> points);

struct CertificateContext {
  nlohmann::ordered_json problem;
  std::uint64_t seed = 0;
  std::optional<StopReason> stop_reason;
  bool full = false;
};

nlohmann::ordered_json certificate_to_json(const ConvergenceCertificate& cert,
                                           const CertificateContext& context);

std::string read_file(const std::filesystem::path& path);

/// Writes to `path.tmp` and renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace cone_fixpoint
