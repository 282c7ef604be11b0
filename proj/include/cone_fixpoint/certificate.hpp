#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cone_fixpoint/cone_order.hpp"
#include "cone_fixpoint/contraction.hpp"
#include "cone_fixpoint/engine.hpp"

namespace cone_fixpoint {

/// Data defining the upper-bound set
///   Omega = {(x, t) : t >= ||x - x0||, t >= (d + ||f(x) - x||) / (1 - lambda)}.
struct OmegaSpec {
  ContractionSpec spec;
  Vector x0;
  double d;
};

/// Computes d = ||f(x0) - x0|| exactly as run() does.
OmegaSpec make_omega_spec(const ContractionSpec& spec, const Vector& x0);

struct OmegaBounds {
  double distance_bound;  // ||x - x0||
  double residual_bound;  // (d + ||f(x) - x||) / (1 - lambda)
  double floor() const { return distance_bound > residual_bound ? distance_bound : residual_bound; }
};

OmegaBounds omega_bounds(const OmegaSpec& om, const Vector& x);

bool omega_contains(const OmegaSpec& om, const AugmentedPoint& candidate,
                    const TolerancePolicy& tol = {});

/// (x0, 2d / (1 - lambda)); meets the second constraint with equality.
AugmentedPoint canonical_omega_witness(const OmegaSpec& om);

/// Radius multiplier and t-offset range of the constructive sampler.
inline constexpr double kOmegaRadiusFactor = 10.0;
inline constexpr double kOmegaMaxOffset = 5.0;
inline constexpr std::size_t kDefaultOmegaSamples = 32;

/// Seeded samples built as x = x0 + r u, t = max(bounds) + s, so each one is
/// a member of Omega by construction.
std::vector<AugmentedPoint> sample_omega(const OmegaSpec& om, std::size_t count,
                                         std::uint64_t seed);

/// The canonical witness followed by kDefaultOmegaSamples samples.
std::vector<AugmentedPoint> default_witnesses(const OmegaSpec& om, std::uint64_t seed);

enum class CheckKind {
  kMonotone,           // (x^n, t^n) <=_L (x^{n+1}, t^{n+1})
  kBounded,            // (x^n, t^n) <=_L w for every witness w
  kLowerBound,         // (x*, t*) <=_L w for every witness w
  kFixedPointResidual, // ||f(x*) - x*|| <= (1 + lambda) lambda^N d / (1 - lambda)
  kPicardConsistency,  // x^{n+1} = f(x^n)
  kTRecurrence,        // t^0 = 0, t^{n+1} = lambda t^n + d
};

const char* to_string(CheckKind kind);

struct CheckFailure {
  CheckKind check;
  /// Step n for per-step checks, witness index for kLowerBound.
  std::size_t index;
  /// Witness index for kBounded (index then holds the step).
  std::optional<std::size_t> witness;
  double residual;
  double allowed;

  std::string describe() const;
};

struct WitnessRecord {
  AugmentedPoint point;
  /// t - t^n - ||x - x^n|| for n = 0..N.
  std::vector<double> bound_residuals;
};

/// Residual lists follow one sign convention: an entry passes when it is
/// >= -slack. The consistency lists are nonpositive and exactly zero on an
/// untampered trace.
struct ConvergenceCertificate {
  std::size_t steps = 0;
  double d = 0.0;
  double lambda = 0.0;
  std::optional<AugmentedPoint> final_point;
  double t_star = 0.0;
  double stopping_bound = 0.0;
  std::optional<AugmentedPoint> limit_point;
  TolerancePolicy tolerance;

  std::vector<double> monotone_residuals;
  std::vector<WitnessRecord> witnesses;
  std::vector<double> lower_bound_residuals;
  double fixed_point_residual = 0.0;  // ||f(x*) - x*||
  double fixed_point_allowance = 0.0;
  std::vector<double> picard_residuals;
  std::vector<double> recurrence_residuals;

  bool pass = false;
  std::optional<CheckFailure> first_failure;
};

/// Checks the trace against the witnesses using only the raw points and the
/// spec: d, t*, and every norm are recomputed here. Throws
/// InvalidWitnessError if a witness is outside Omega.
ConvergenceCertificate verify_certificate(const IterationTrace& trace,
                                          const std::vector<AugmentedPoint>& witnesses,
                                          const TolerancePolicy& tol = {});

/// As above with default_witnesses(seed).
ConvergenceCertificate verify_certificate(const IterationTrace& trace, std::uint64_t seed,
                                          const TolerancePolicy& tol = {});

}  // namespace cone_fixpoint
