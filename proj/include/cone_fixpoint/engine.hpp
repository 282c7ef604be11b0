#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cone_fixpoint/cone_order.hpp"
#include "cone_fixpoint/contraction.hpp"

namespace cone_fixpoint {

enum class StopReason {
  kAPrioriReached,
  kAPosterioriReached,
  kFixedCountReached,
  kMaxIterations,
  kExactFixedPoint,
};

const char* to_string(StopReason reason);

inline constexpr std::size_t kDefaultMaxIterations = 1'000'000;

/// Runs with 1 - lambda below this carry a conditioning warning.
inline constexpr double kConditioningThreshold = 1e-6;

struct StoppingRule {
  enum class Kind { kAPriori, kAPosteriori, kFixedCount };

  Kind kind = Kind::kAPriori;
  double eps = 1e-10;
  std::size_t count = 0;
  std::size_t max_iterations = kDefaultMaxIterations;

  static StoppingRule a_priori(double eps, std::size_t max_iterations = kDefaultMaxIterations);
  static StoppingRule a_posteriori(double eps,
                                   std::size_t max_iterations = kDefaultMaxIterations);
  static StoppingRule fixed_count(std::size_t count,
                                  std::size_t max_iterations = kDefaultMaxIterations);

  /// Throws kInvalidInput unless eps > 0 (for the eps rules) and
  /// max_iterations >= 1.
  void validate() const;
};

/// The recorded sequence (x^n, t^n), n = 0..N, of the augmented iteration.
///
/// points[0] = (x0, 0), points[n+1] = (f(x^n), lambda t^n + d) with
/// d = ||x^1 - x^0|| fixed after the first evaluation.
struct IterationTrace {
  ContractionSpec spec;
  Vector x0;
  double d = 0.0;
  std::vector<AugmentedPoint> points;
  StopReason stop_reason = StopReason::kExactFixedPoint;
  bool conditioning_warning = false;

  std::size_t steps() const { return points.size() - 1; }
  const AugmentedPoint& final_point() const { return points.back(); }
  /// t* = d / (1 - lambda).
  double limit_t() const;
  /// lambda^N d / (1 - lambda): certified distance from x^N to the fixed point.
  double stopping_bound() const;
};

/// One step (x, t) -> (f(x), lambda t + d).
AugmentedPoint augmented_step(const ContractionSpec& spec, const AugmentedPoint& current,
                              double d);

/// Validates the spec, then iterates from (x0, 0) until the rule is met.
/// Exhausting max_iterations returns the partial trace flagged
/// kMaxIterations rather than throwing.
IterationTrace run(const ContractionSpec& spec, const Vector& x0, const StoppingRule& rule);

/// d (1 - lambda^n) / (1 - lambda), the unrolled t-recurrence.
double t_closed_form(double d, double lambda, std::uint64_t n);

/// lambda^n d / (1 - lambda) = t* - t^n, the a-priori distance bound.
double a_priori_bound(double d, double lambda, std::uint64_t n);

/// Smallest n >= 0 with a_priori_bound(d, lambda, n) <= eps.
std::uint64_t a_priori_iterations(double d, double lambda, double eps);

}  // namespace cone_fixpoint
