#include "cone_fixpoint/cone_order.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "cone_fixpoint/error.hpp"

namespace cone_fixpoint {

double euclidean_norm(std::span<const double> values) {
  double largest = 0.0;
  for (double v : values) largest = std::max(largest, std::abs(v));
  if (largest == 0.0) return 0.0;
  if (!std::isfinite(largest)) return largest;
  const int exponent = std::ilogb(largest);
  double sum = 0.0;
  for (double v : values) {
    const double scaled = std::ldexp(v, -exponent);
    sum += scaled * scaled;
  }
  return std::ldexp(std::sqrt(sum), exponent);
}

namespace {

void require_finite(const Eigen::VectorXd& values) {
  if (values.size() < 1) {
    throw Error(ErrorKind::kInvalidInput, "vector must have dimension >= 1");
  }
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::kInvalidInput,
                  "vector coordinate " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

Vector::Vector(std::vector<double> coords)
    : values_(Eigen::Map<const Eigen::VectorXd>(coords.data(),
                                                static_cast<Eigen::Index>(coords.size()))) {
  require_finite(values_);
}

Vector::Vector(std::initializer_list<double> coords)
    : Vector(std::vector<double>(coords)) {}

Vector::Vector(Eigen::VectorXd values) : values_(std::move(values)) {
  require_finite(values_);
}

Vector Vector::zeros(std::size_t dim) {
  return Vector(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)));
}

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("dimension mismatch in ") + what + ": " +
                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "vector sum");
  return Vector(Eigen::VectorXd(a.values_ + b.values_));
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_dim(a, b, "vector difference");
  return Vector(Eigen::VectorXd(a.values_ - b.values_));
}

Vector operator-(const Vector& a) { return Vector(Eigen::VectorXd(-a.values_)); }

Vector operator*(double s, const Vector& a) { return Vector(Eigen::VectorXd(s * a.values_)); }

bool operator==(const Vector& a, const Vector& b) {
  return a.dim() == b.dim() && a.values_ == b.values_;
}

double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }

AugmentedPoint::AugmentedPoint(Vector x, double t) : x_(std::move(x)), t_(t) {
  if (!std::isfinite(t_)) {
    throw Error(ErrorKind::kInvalidInput, "augmented coordinate t is not finite");
  }
}

AugmentedPoint operator+(const AugmentedPoint& a, const AugmentedPoint& b) {
  return {a.x_ + b.x_, a.t_ + b.t_};
}

AugmentedPoint operator-(const AugmentedPoint& a, const AugmentedPoint& b) {
  return {a.x_ - b.x_, a.t_ - b.t_};
}

AugmentedPoint operator-(const AugmentedPoint& a) { return {-a.x_, -a.t_}; }

AugmentedPoint operator*(double s, const AugmentedPoint& a) { return {s * a.x_, s * a.t_}; }

bool operator==(const AugmentedPoint& a, const AugmentedPoint& b) {
  return a.t_ == b.t_ && a.x_ == b.x_;
}

TolerancePolicy TolerancePolicy::with(double atol, double rtol) {
  if (!(atol >= 0.0) || !(rtol >= 0.0) || !std::isfinite(atol) || !std::isfinite(rtol)) {
    throw Error(ErrorKind::kInvalidInput, "tolerances must be finite and nonnegative");
  }
  return {atol, rtol, false};
}

TolerancePolicy TolerancePolicy::from_environment() {
  const char* raw = std::getenv("CONE_FIXPOINT_TOL");
  if (raw == nullptr || *raw == '\0') return {};
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0') {
    throw Error(ErrorKind::kInvalidInput,
                std::string("CONE_FIXPOINT_TOL is not a number: ") + raw);
  }
  return with(value, value);
}

double TolerancePolicy::slack(double scale) const {
  if (strict) return 0.0;
  return atol + rtol * std::max(1.0, std::abs(scale));
}

double lorentz_residual(const AugmentedPoint& point) { return point.t() - point.x().norm(); }

double order_residual(const AugmentedPoint& a, const AugmentedPoint& b) {
  return lorentz_residual(b - a);
}

bool lorentz_contains(const AugmentedPoint& point, const TolerancePolicy& tol) {
  return tol.accepts(lorentz_residual(point), point.t());
}

bool leq_lorentz(const AugmentedPoint& a, const AugmentedPoint& b, const TolerancePolicy& tol) {
  require_same_dim(a.x(), b.x(), "Lorentz order comparison");
  return lorentz_contains(b - a, tol);
}

std::string format_vector(const Vector& v) {
  std::ostringstream out;
  out.precision(17);
  out << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i > 0) out << ", ";
    out << v[i];
  }
  out << ')';
  return out.str();
}

}  // namespace cone_fixpoint
