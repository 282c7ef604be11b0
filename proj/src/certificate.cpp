#include "cone_fixpoint/certificate.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cone_fixpoint/error.hpp"

namespace cone_fixpoint {

const char* to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::kMonotone: return "monotone";
    case CheckKind::kBounded: return "bounded";
    case CheckKind::kLowerBound: return "lower_bound";
    case CheckKind::kFixedPointResidual: return "fixed_point_residual";
    case CheckKind::kPicardConsistency: return "picard_consistency";
    case CheckKind::kTRecurrence: return "t_recurrence";
  }
  return "unknown";
}

std::string CheckFailure::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << to_string(check) << " check failed at ";
  if (witness) {
    out << "witness " << *witness << ", step n=" << index;
  } else if (check == CheckKind::kLowerBound) {
    out << "witness " << index;
  } else {
    out << "step n=" << index;
  }
  out << " (residual " << residual << ", allowed " << -allowed << ")";
  return out.str();
}

OmegaSpec make_omega_spec(const ContractionSpec& spec, const Vector& x0) {
  return {spec, x0, distance(evaluate(spec, x0), x0)};
}

OmegaBounds omega_bounds(const OmegaSpec& om, const Vector& x) {
  require_same_dim(x, om.x0, "Omega bounds");
  const double residual = distance(evaluate(om.spec, x), x);
  return {distance(x, om.x0), (om.d + residual) / (1.0 - om.spec.lambda())};
}

bool omega_contains(const OmegaSpec& om, const AugmentedPoint& candidate,
                    const TolerancePolicy& tol) {
  const OmegaBounds bounds = omega_bounds(om, candidate.x());
  const double t = candidate.t();
  return tol.accepts(t - bounds.distance_bound, t) && tol.accepts(t - bounds.residual_bound, t);
}

AugmentedPoint canonical_omega_witness(const OmegaSpec& om) {
  return {om.x0, 2.0 * om.d / (1.0 - om.spec.lambda())};
}

std::vector<AugmentedPoint> sample_omega(const OmegaSpec& om, std::size_t count,
                                         std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::kInvalidInput, "sample count must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double max_radius =
      kOmegaRadiusFactor * std::max(1.0, om.d / (1.0 - om.spec.lambda()));
  std::uniform_real_distribution<double> radius(0.0, max_radius);
  std::uniform_real_distribution<double> offset(0.0, kOmegaMaxOffset);

  const auto dim = static_cast<Eigen::Index>(om.x0.dim());
  std::vector<AugmentedPoint> samples;
  samples.reserve(count);
  while (samples.size() < count) {
    Eigen::VectorXd direction(dim);
    for (Eigen::Index i = 0; i < dim; ++i) direction[i] = gauss(rng);
    const double len = direction.norm();
    if (len == 0.0) continue;
    const double r = radius(rng);
    const Vector x = om.x0 + Vector(Eigen::VectorXd(direction * (r / len)));
    const double s = offset(rng);
    samples.emplace_back(x, omega_bounds(om, x).floor() + s);
  }
  return samples;
}

std::vector<AugmentedPoint> default_witnesses(const OmegaSpec& om, std::uint64_t seed) {
  std::vector<AugmentedPoint> witnesses{canonical_omega_witness(om)};
  auto samples = sample_omega(om, kDefaultOmegaSamples, seed);
  witnesses.insert(witnesses.end(), samples.begin(), samples.end());
  return witnesses;
}

namespace {

// Records a residual and keeps the first one that falls below its slack.
class FailureTracker {
 public:
  void observe(double residual, double slack, CheckKind check, std::size_t index,
               std::optional<std::size_t> witness = std::nullopt) {
    if (first_ || residual >= -slack) return;
    first_ = CheckFailure{check, index, witness, residual, slack};
  }

  const std::optional<CheckFailure>& first() const { return first_; }

 private:
  std::optional<CheckFailure> first_;
};

}  // namespace

ConvergenceCertificate verify_certificate(const IterationTrace& trace,
                                          const std::vector<AugmentedPoint>& witnesses,
                                          const TolerancePolicy& tol) {
  if (trace.points.empty()) throw Error(ErrorKind::kInvalidInput, "trace has no points");
  const ContractionSpec& spec = trace.spec;
  const auto& pts = trace.points;
  const std::size_t steps = pts.size() - 1;
  for (const auto& p : pts) require_same_dim(p.x(), pts[0].x(), "trace point");

  const double lambda = spec.lambda();
  const OmegaSpec om = make_omega_spec(spec, pts[0].x());
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    if (witnesses[i].dim() != om.x0.dim() || !omega_contains(om, witnesses[i], tol)) {
      throw InvalidWitnessError("witness " + std::to_string(i) + " is not a member of Omega", i);
    }
  }

  ConvergenceCertificate cert;
  cert.steps = steps;
  cert.d = om.d;
  cert.lambda = lambda;
  cert.final_point = pts.back();
  cert.t_star = om.d / (1.0 - lambda);
  cert.stopping_bound = a_priori_bound(om.d, lambda, steps);
  cert.limit_point = AugmentedPoint(pts.back().x(), cert.t_star);
  cert.tolerance = tol;

  FailureTracker failures;

  cert.monotone_residuals.reserve(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    const double r = order_residual(pts[n], pts[n + 1]);
    cert.monotone_residuals.push_back(r);
    failures.observe(r, tol.slack(pts[n + 1].t() - pts[n].t()), CheckKind::kMonotone, n);
  }

  cert.witnesses.reserve(witnesses.size());
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    WitnessRecord record{witnesses[w], {}};
    record.bound_residuals.reserve(pts.size());
    for (std::size_t n = 0; n < pts.size(); ++n) {
      const double r = order_residual(pts[n], witnesses[w]);
      record.bound_residuals.push_back(r);
      failures.observe(r, tol.slack(witnesses[w].t() - pts[n].t()), CheckKind::kBounded, n, w);
    }
    cert.witnesses.push_back(std::move(record));
  }

  // x^N stands in for x*, so the comparison is loosened by the certified
  // distance lambda^N d / (1 - lambda) between them.
  const AugmentedPoint& limit = *cert.limit_point;
  cert.lower_bound_residuals.reserve(witnesses.size());
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    const double r = order_residual(limit, witnesses[w]);
    cert.lower_bound_residuals.push_back(r);
    failures.observe(r, tol.slack(witnesses[w].t() - limit.t()) + cert.stopping_bound,
                     CheckKind::kLowerBound, w);
  }

  const Vector& x_final = pts.back().x();
  cert.fixed_point_residual = distance(evaluate(spec, x_final), x_final);
  cert.fixed_point_allowance = (1.0 + lambda) * cert.stopping_bound;
  failures.observe(cert.fixed_point_allowance - cert.fixed_point_residual,
                   tol.slack(x_final.norm()), CheckKind::kFixedPointResidual, steps);

  cert.picard_residuals.reserve(steps);
  for (std::size_t n = 0; n < steps; ++n) {
    const double r = -distance(pts[n + 1].x(), evaluate(spec, pts[n].x()));
    cert.picard_residuals.push_back(r);
    failures.observe(r, tol.slack(pts[n + 1].x().norm()), CheckKind::kPicardConsistency, n);
  }

  cert.recurrence_residuals.reserve(pts.size());
  cert.recurrence_residuals.push_back(-std::abs(pts[0].t()));
  failures.observe(cert.recurrence_residuals.back(), tol.slack(0.0), CheckKind::kTRecurrence, 0);
  for (std::size_t n = 0; n < steps; ++n) {
    const double r = -std::abs(pts[n + 1].t() - (lambda * pts[n].t() + om.d));
    cert.recurrence_residuals.push_back(r);
    failures.observe(r, tol.slack(pts[n + 1].t()), CheckKind::kTRecurrence, n + 1);
  }

  cert.first_failure = failures.first();
  cert.pass = !cert.first_failure.has_value();
  return cert;
}

ConvergenceCertificate verify_certificate(const IterationTrace& trace, std::uint64_t seed,
                                          const TolerancePolicy& tol) {
  if (trace.points.empty()) throw Error(ErrorKind::kInvalidInput, "trace has no points");
  const OmegaSpec om = make_omega_spec(trace.spec, trace.points[0].x());
  return verify_certificate(trace, default_witnesses(om, seed), tol);
}

}  // namespace cone_fixpoint
