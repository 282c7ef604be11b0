#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cone_fixpoint {

/// Euclidean norm as a power-of-two scaled sum of squares. The scaling is
/// exact, so inputs whose squares are exactly representable (small integers)
/// get a correctly rounded result, and nothing overflows before the final
/// rescale.
double euclidean_norm(std::span<const double> values);

/// A point of R^m. Immutable; every coordinate is finite and m >= 1.
class Vector {
 public:
  explicit Vector(std::vector<double> coords);
  Vector(std::initializer_list<double> coords);
  explicit Vector(Eigen::VectorXd values);

  static Vector zeros(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  std::span<const double> coords() const { return {values_.data(), dim()}; }
  const Eigen::VectorXd& values() const { return values_; }
  std::vector<double> to_std() const { return {values_.data(), values_.data() + dim()}; }

  double norm() const { return euclidean_norm(coords()); }

  friend Vector operator+(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a, const Vector& b);
  friend Vector operator-(const Vector& a);
  friend Vector operator*(double s, const Vector& a);
  friend bool operator==(const Vector& a, const Vector& b);

 private:
  Eigen::VectorXd values_;
};

/// ||a - b||, dimension-checked.
double distance(const Vector& a, const Vector& b);

/// Throws kInvalidInput if the dimensions differ. `what` names the operands.
void require_same_dim(const Vector& a, const Vector& b, const char* what);

/// An element (x, t) of R^m x R, the ordered space of dimension p = m + 1.
class AugmentedPoint {
 public:
  AugmentedPoint(Vector x, double t);

  const Vector& x() const { return x_; }
  double t() const { return t_; }
  std::size_t dim() const { return x_.dim(); }
  std::size_t ambient_dim() const { return x_.dim() + 1; }

  friend AugmentedPoint operator+(const AugmentedPoint& a, const AugmentedPoint& b);
  friend AugmentedPoint operator-(const AugmentedPoint& a, const AugmentedPoint& b);
  friend AugmentedPoint operator-(const AugmentedPoint& a);
  friend AugmentedPoint operator*(double s, const AugmentedPoint& a);
  friend bool operator==(const AugmentedPoint& a, const AugmentedPoint& b);

 private:
  Vector x_;
  double t_;
};

/// Slack allowed in cone predicates: a residual r passes when
/// r >= -(atol + rtol * max(1, |scale|)). Strict mode allows no slack.
struct TolerancePolicy {
  double atol = 1e-12;
  double rtol = 1e-12;
  bool strict = false;

  static TolerancePolicy strict_policy() { return {0.0, 0.0, true}; }
  static TolerancePolicy with(double atol, double rtol);

  /// Default policy, or atol = rtol = value of CONE_FIXPOINT_TOL when set.
  /// A malformed value throws kInvalidInput.
  static TolerancePolicy from_environment();

  double slack(double scale) const;
  bool accepts(double residual, double scale) const { return residual >= -slack(scale); }
};

/// t - ||x||; nonnegative exactly on L.
double lorentz_residual(const AugmentedPoint& point);

/// (b.t - a.t) - ||b.x - a.x||; nonnegative exactly when a <=_L b.
double order_residual(const AugmentedPoint& a, const AugmentedPoint& b);

/// Membership in the Lorentz cone L = {(x, t) : t >= ||x||}.
bool lorentz_contains(const AugmentedPoint& point, const TolerancePolicy& tol = {});

/// a <=_L b, i.e. b - a lies in L.
bool leq_lorentz(const AugmentedPoint& a, const AugmentedPoint& b,
                 const TolerancePolicy& tol = {});

std::string format_vector(const Vector& v);

}  // namespace cone_fixpoint
