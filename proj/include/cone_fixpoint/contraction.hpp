#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "cone_fixpoint/cone_order.hpp"

namespace cone_fixpoint {

/// f(x) = c.
struct ConstantMap {
  Vector c;
};

/// f(x) = A x + b.
struct AffineMap {
  Eigen::MatrixXd A;
  Vector b;
};

/// f(x) = scale * R(theta) x + b on R^2, theta in radians.
struct ScaledRotationMap {
  double theta;
  double scale;
  Vector b;
};

/// f(x) = M + e sin(x) on R^1 (Kepler's equation in fixed-point form).
struct KeplerScalarMap {
  double e;
  double M;
};

using MapFamily = std::variant<ConstantMap, AffineMap, ScaledRotationMap, KeplerScalarMap>;

const char* family_name(const MapFamily& map);

/// A declared lambda-contraction from one of the closed families above.
///
/// Construction checks shapes and finiteness only. Whether the declared
/// lambda is actually a contraction factor is the job of
/// validate_contraction().
class ContractionSpec {
 public:
  ContractionSpec(std::size_t dimension, double lambda, MapFamily map);

  static ContractionSpec constant(double lambda, Vector c);
  static ContractionSpec affine(double lambda, Eigen::MatrixXd A, Vector b);
  static ContractionSpec scaled_rotation(double lambda, double theta, double scale, Vector b);
  static ContractionSpec kepler(double lambda, double e, double M);

  std::size_t dimension() const { return dimension_; }
  double lambda() const { return lambda_; }
  const MapFamily& map() const { return map_; }

 private:
  std::size_t dimension_;
  double lambda_;
  MapFamily map_;
};

/// f(x) for the spec's family. Deterministic: repeated calls agree bit for bit.
Vector evaluate(const ContractionSpec& spec, const Vector& x);

struct ValidationReport {
  double declared_lambda;
  double true_factor;
  /// lambda - true_factor; may be slightly negative within the slack.
  double margin;
  std::string method;
};

/// Allowed excess of the computed factor over the declared lambda.
inline constexpr double kContractionSlack = 1e-9;

/// Confirms the family's exact Lipschitz factor does not exceed lambda.
/// Throws kInvalidSpec when lambda is outside (0, 1) and kNotAContraction
/// when the factor exceeds lambda + kContractionSlack.
ValidationReport validate_contraction(const ContractionSpec& spec);

struct PowerIterationSettings {
  double tol = 1e-12;
  std::size_t max_iterations = 10000;
};

/// Largest singular value of a square matrix by power iteration on A^T A,
/// started from a deterministically perturbed all-ones vector. Throws
/// EstimationError (carrying the last estimate) if the relative change
/// does not drop below tol within the cap.
double spectral_norm(const Eigen::MatrixXd& A, double tol = 1e-12);
double spectral_norm(const Eigen::MatrixXd& A, const PowerIterationSettings& settings);

/// Radius of the ball (centered at the origin) sampled by empirical_lipschitz.
inline constexpr double kLipschitzSampleRadius = 10.0;

/// Largest observed ||f(u) - f(v)|| / ||u - v|| over sample_count seeded
/// random pairs drawn uniformly from the sampling ball.
double empirical_lipschitz(const ContractionSpec& spec, std::size_t sample_count,
                           std::uint64_t seed);

}  // namespace cone_fixpoint
