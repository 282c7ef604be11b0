#include "cone_fixpoint/engine.hpp"

#include <cmath>
#include <limits>

#include "cone_fixpoint/error.hpp"

namespace cone_fixpoint {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kAPrioriReached: return "APrioriReached";
    case StopReason::kAPosterioriReached: return "APosterioriReached";
    case StopReason::kFixedCountReached: return "FixedCountReached";
    case StopReason::kMaxIterations: return "MaxIterations";
    case StopReason::kExactFixedPoint: return "ExactFixedPoint";
  }
  return "unknown";
}

StoppingRule StoppingRule::a_priori(double eps, std::size_t max_iterations) {
  return {Kind::kAPriori, eps, 0, max_iterations};
}

StoppingRule StoppingRule::a_posteriori(double eps, std::size_t max_iterations) {
  return {Kind::kAPosteriori, eps, 0, max_iterations};
}

StoppingRule StoppingRule::fixed_count(std::size_t count, std::size_t max_iterations) {
  return {Kind::kFixedCount, 0.0, count, max_iterations};
}

void StoppingRule::validate() const {
  if (max_iterations < 1) throw Error(ErrorKind::kInvalidInput, "max_iterations must be >= 1");
  if (kind != Kind::kFixedCount && !(eps > 0.0 && std::isfinite(eps))) {
    throw Error(ErrorKind::kInvalidInput, "eps must be positive and finite");
  }
}

double IterationTrace::limit_t() const { return d / (1.0 - spec.lambda()); }

double IterationTrace::stopping_bound() const {
  return a_priori_bound(d, spec.lambda(), steps());
}

AugmentedPoint augmented_step(const ContractionSpec& spec, const AugmentedPoint& current,
                              double d) {
  if (!(d >= 0.0)) throw Error(ErrorKind::kInvalidInput, "d must be nonnegative");
  return {evaluate(spec, current.x()), spec.lambda() * current.t() + d};
}

IterationTrace run(const ContractionSpec& spec, const Vector& x0, const StoppingRule& rule) {
  validate_contraction(spec);
  rule.validate();
  if (x0.dim() != spec.dimension()) {
    throw Error(ErrorKind::kInvalidInput, "x0 has dimension " + std::to_string(x0.dim()) +
                                              ", expected " +
                                              std::to_string(spec.dimension()));
  }

  const double lambda = spec.lambda();
  const double d = distance(evaluate(spec, x0), x0);
  IterationTrace trace{spec, x0, d, {AugmentedPoint(x0, 0.0)}, StopReason::kExactFixedPoint,
                       (1.0 - lambda) < kConditioningThreshold};
  if (d == 0.0) return trace;

  std::uint64_t target = 0;
  if (rule.kind == StoppingRule::Kind::kAPriori) {
    target = a_priori_iterations(d, lambda, rule.eps);
  } else if (rule.kind == StoppingRule::Kind::kFixedCount) {
    target = rule.count;
  }
  const double aposteriori_factor = lambda / (1.0 - lambda);

  while (true) {
    const std::size_t n = trace.steps();
    if (rule.kind == StoppingRule::Kind::kAPriori && n == target) {
      trace.stop_reason = StopReason::kAPrioriReached;
      break;
    }
    if (rule.kind == StoppingRule::Kind::kFixedCount && n == target) {
      trace.stop_reason = StopReason::kFixedCountReached;
      break;
    }
    if (n >= rule.max_iterations) {
      trace.stop_reason = StopReason::kMaxIterations;
      break;
    }
    trace.points.push_back(augmented_step(spec, trace.points.back(), d));
    if (rule.kind == StoppingRule::Kind::kAPosteriori) {
      const auto& last = trace.points[n + 1];
      const auto& prev = trace.points[n];
      if (aposteriori_factor * distance(last.x(), prev.x()) <= rule.eps) {
        trace.stop_reason = StopReason::kAPosterioriReached;
        break;
      }
    }
  }
  return trace;
}

double t_closed_form(double d, double lambda, std::uint64_t n) {
  if (d == 0.0 || n == 0) return 0.0;
  // 1 - lambda^n via expm1/log1p keeps full relative accuracy for small n
  // and lambda close to 1.
  const double one_minus_power =
      -std::expm1(static_cast<double>(n) * std::log1p(-(1.0 - lambda)));
  return d * one_minus_power / (1.0 - lambda);
}

double a_priori_bound(double d, double lambda, std::uint64_t n) {
  return std::pow(lambda, static_cast<double>(n)) * d / (1.0 - lambda);
}

std::uint64_t a_priori_iterations(double d, double lambda, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::kInvalidInput, "eps must be positive");
  if (a_priori_bound(d, lambda, 0) <= eps) return 0;

  const double estimate = std::ceil(std::log(eps * (1.0 - lambda) / d) / std::log(lambda));
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t n = 1;
  if (estimate >= static_cast<double>(kMax)) {
    n = kMax;
  } else if (estimate > 1.0) {
    n = static_cast<std::uint64_t>(estimate);
  }
  // The logarithm can be off by one in either direction; settle against the
  // bound itself so the result agrees with what run() stops on.
  for (int guard = 0; guard < 64 && n > 1 && a_priori_bound(d, lambda, n - 1) <= eps; ++guard) {
    --n;
  }
  for (int guard = 0; guard < 64 && n < kMax && a_priori_bound(d, lambda, n) > eps; ++guard) {
    ++n;
  }
  return n;
}

}  // namespace cone_fixpoint
