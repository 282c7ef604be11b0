#include "cone_fixpoint/contraction.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "cone_fixpoint/error.hpp"

namespace cone_fixpoint {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(const Vector& v, std::size_t dim, const char* what) {
  if (v.dim() != dim) {
    throw Error(ErrorKind::kInvalidInput,
                std::string(what) + " has dimension " + std::to_string(v.dim()) +
                    ", expected " + std::to_string(dim));
  }
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kInvalidInput, std::string(what) + " is not finite");
  }
}

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

const char* family_name(const MapFamily& map) {
  return std::visit(Overloaded{
                        [](const ConstantMap&) { return "constant"; },
                        [](const AffineMap&) { return "affine"; },
                        [](const ScaledRotationMap&) { return "scaled_rotation"; },
                        [](const KeplerScalarMap&) { return "kepler"; },
                    },
                    map);
}

ContractionSpec::ContractionSpec(std::size_t dimension, double lambda, MapFamily map)
    : dimension_(dimension), lambda_(lambda), map_(std::move(map)) {
  if (dimension_ < 1) throw Error(ErrorKind::kInvalidSpec, "dimension must be >= 1");
  if (!std::isfinite(lambda_)) throw Error(ErrorKind::kInvalidSpec, "lambda is not finite");
  std::visit(Overloaded{
                 [&](const ConstantMap& m) { require_dim(m.c, dimension_, "constant c"); },
                 [&](const AffineMap& m) {
                   const auto n = static_cast<Eigen::Index>(dimension_);
                   if (m.A.rows() != n || m.A.cols() != n) {
                     throw Error(ErrorKind::kInvalidInput,
                                 "affine matrix A must be " + std::to_string(dimension_) +
                                     "x" + std::to_string(dimension_));
                   }
                   if (!m.A.allFinite()) {
                     throw Error(ErrorKind::kInvalidInput, "affine matrix A is not finite");
                   }
                   require_dim(m.b, dimension_, "affine offset b");
                 },
                 [&](const ScaledRotationMap& m) {
                   if (dimension_ != 2) {
                     throw Error(ErrorKind::kInvalidSpec, "scaled_rotation requires dimension 2");
                   }
                   require_finite(m.theta, "rotation angle theta");
                   require_finite(m.scale, "rotation scale");
                   require_dim(m.b, 2, "rotation offset b");
                 },
                 [&](const KeplerScalarMap& m) {
                   if (dimension_ != 1) {
                     throw Error(ErrorKind::kInvalidSpec, "kepler requires dimension 1");
                   }
                   require_finite(m.e, "kepler eccentricity e");
                   require_finite(m.M, "kepler mean anomaly M");
                 },
             },
             map_);
}

ContractionSpec ContractionSpec::constant(double lambda, Vector c) {
  const auto dim = c.dim();
  return {dim, lambda, ConstantMap{std::move(c)}};
}

ContractionSpec ContractionSpec::affine(double lambda, Eigen::MatrixXd A, Vector b) {
  const auto dim = b.dim();
  return {dim, lambda, AffineMap{std::move(A), std::move(b)}};
}

ContractionSpec ContractionSpec::scaled_rotation(double lambda, double theta, double scale,
                                                 Vector b) {
  return {2, lambda, ScaledRotationMap{theta, scale, std::move(b)}};
}

ContractionSpec ContractionSpec::kepler(double lambda, double e, double M) {
  return {1, lambda, KeplerScalarMap{e, M}};
}

Vector evaluate(const ContractionSpec& spec, const Vector& x) {
  require_dim(x, spec.dimension(), "argument x");
  return std::visit(
      Overloaded{
          [](const ConstantMap& m) { return m.c; },
          [&](const AffineMap& m) {
            return Vector(Eigen::VectorXd(m.A * x.values() + m.b.values()));
          },
          [&](const ScaledRotationMap& m) {
            const Eigen::Vector2d rotated = rotation(m.theta) * x.values();
            return Vector(Eigen::VectorXd(m.scale * rotated + m.b.values()));
          },
          [&](const KeplerScalarMap& m) { return Vector{m.M + m.e * std::sin(x[0])}; },
      },
      spec.map());
}

ValidationReport validate_contraction(const ContractionSpec& spec) {
  const double lambda = spec.lambda();
  if (!(lambda > 0.0 && lambda < 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lambda must lie in (0, 1), got " << lambda;
    throw Error(ErrorKind::kInvalidSpec, msg.str());
  }

  ValidationReport report{lambda, 0.0, 0.0, ""};
  std::visit(Overloaded{
                 [&](const ConstantMap&) {
                   report.true_factor = 0.0;
                   report.method = "constant map";
                 },
                 [&](const AffineMap& m) {
                   report.true_factor = spectral_norm(m.A);
                   report.method = "spectral norm of A (power iteration)";
                 },
                 [&](const ScaledRotationMap& m) {
                   report.true_factor = std::abs(m.scale);
                   report.method = "|scale| (rotation is an isometry)";
                 },
                 [&](const KeplerScalarMap& m) {
                   report.true_factor = std::abs(m.e);
                   report.method = "|e| (sup of |e cos x|)";
                 },
             },
             spec.map());
  report.margin = lambda - report.true_factor;

  if (report.true_factor > lambda + kContractionSlack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << family_name(spec.map()) << " map has Lipschitz factor " << report.true_factor
        << " > declared lambda " << lambda;
    throw Error(ErrorKind::kNotAContraction, msg.str());
  }
  return report;
}

double spectral_norm(const Eigen::MatrixXd& A, double tol) {
  return spectral_norm(A, PowerIterationSettings{tol, 10000});
}

double spectral_norm(const Eigen::MatrixXd& A, const PowerIterationSettings& settings) {
  if (!(settings.tol > 0.0)) throw Error(ErrorKind::kInvalidInput, "tol must be positive");
  if (!A.allFinite()) throw Error(ErrorKind::kInvalidInput, "matrix has non-finite entries");
  if (A.size() == 0) return 0.0;
  if (A.isZero(0.0)) return 0.0;

  const Eigen::MatrixXd gram = A.transpose() * A;
  const Eigen::Index n = gram.cols();

  // All-ones seed, tilted so it is not orthogonal to a dominant singular
  // vector of a structured matrix.
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = 1.0 + 0.1 * static_cast<double>(i + 1) / static_cast<double>(n + 1);
  }
  v.normalize();

  Eigen::VectorXd w = gram * v;
  if (w.norm() == 0.0) {
    // The seed fell in the null space; the largest column of A is a
    // direction that A does not annihilate.
    Eigen::Index col = 0;
    A.colwise().norm().maxCoeff(&col);
    v.setZero();
    v[col] = 1.0;
    w = gram * v;
  }

  double estimate = v.dot(w);
  for (std::size_t k = 0; k < settings.max_iterations; ++k) {
    v = w / w.norm();
    w = gram * v;
    const double next = v.dot(w);
    if (std::abs(next - estimate) <= settings.tol * std::abs(next)) {
      return std::sqrt(std::max(next, 0.0));
    }
    estimate = next;
  }
  throw EstimationError("spectral norm power iteration did not converge",
                        std::sqrt(std::max(estimate, 0.0)));
}

namespace {

Vector sample_ball(std::mt19937_64& rng, std::size_t dim, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd direction(static_cast<Eigen::Index>(dim));
  double len = 0.0;
  while (len == 0.0) {
    for (Eigen::Index i = 0; i < direction.size(); ++i) direction[i] = gauss(rng);
    len = direction.norm();
  }
  const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(dim));
  return Vector(Eigen::VectorXd(direction * (r / len)));
}

}  // namespace

double empirical_lipschitz(const ContractionSpec& spec, std::size_t sample_count,
                           std::uint64_t seed) {
  if (sample_count < 1) throw Error(ErrorKind::kInvalidInput, "sample_count must be >= 1");
  std::mt19937_64 rng(seed);
  double best = 0.0;
  std::size_t taken = 0;
  while (taken < sample_count) {
    const Vector u = sample_ball(rng, spec.dimension(), kLipschitzSampleRadius);
    const Vector v = sample_ball(rng, spec.dimension(), kLipschitzSampleRadius);
    const double gap = distance(u, v);
    if (gap == 0.0) continue;
    best = std::max(best, distance(evaluate(spec, u), evaluate(spec, v)) / gap);
    ++taken;
  }
  return best;
}

}  // namespace cone_fixpoint
