#include "cone_fixpoint/problems.hpp"

#include <cmath>
#include <numbers>

#include "cone_fixpoint/error.hpp"

namespace cone_fixpoint {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vector solve_affine(const Eigen::MatrixXd& A, const Vector& b) {
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(A.rows(), A.cols()) - A;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::kUnsupportedInstance, "I - A is singular");
  }
  return Vector(Eigen::VectorXd(lu.solve(b.values())));
}

// Root of x - M - e sin x on [M - |e|, M + |e|], halving until the bracket
// cannot shrink further in double precision.
double kepler_bisection(double e, double M) {
  auto g = [&](double x) { return x - M - e * std::sin(x); };
  double lo = M - std::abs(e);
  double hi = M + std::abs(e);
  if (g(lo) == 0.0) return lo;
  if (g(hi) == 0.0) return hi;
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = g(mid);
    if (value == 0.0) return mid;
    if (value < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

Eigen::MatrixXd scalar_matrix(double a) {
  Eigen::MatrixXd m(1, 1);
  m(0, 0) = a;
  return m;
}

ProblemInstance make(std::string name, ContractionSpec spec, Vector x0, std::string provenance) {
  ProblemInstance p{std::move(name), std::move(spec), std::move(x0), std::nullopt,
                    std::move(provenance)};
  p.reference = reference_fixed_point(p.spec);
  return p;
}

}  // namespace

Vector reference_fixed_point(const ContractionSpec& spec) {
  return std::visit(
      Overloaded{
          [](const ConstantMap& m) { return m.c; },
          [](const AffineMap& m) { return solve_affine(m.A, m.b); },
          [](const ScaledRotationMap& m) {
            Eigen::MatrixXd A(2, 2);
            A << std::cos(m.theta), -std::sin(m.theta), std::sin(m.theta), std::cos(m.theta);
            return solve_affine(m.scale * A, m.b);
          },
          [](const KeplerScalarMap& m) { return Vector{kepler_bisection(m.e, m.M)}; },
      },
      spec.map());
}

Vector reference_fixed_point(const ProblemInstance& problem) {
  if (problem.reference) return *problem.reference;
  return reference_fixed_point(problem.spec);
}

std::vector<ProblemInstance> builtin_catalog() {
  std::vector<ProblemInstance> catalog;
  catalog.push_back(make("AFFINE_1D",
                         ContractionSpec::affine(0.5, scalar_matrix(0.5), Vector{1.0}),
                         Vector{0.0}, "f(x) = 0.5x + 1; x* = 2 by direct elimination"));
  catalog.push_back(make("CONSTANT", ContractionSpec::constant(0.5, Vector{3.0, 7.0}),
                         Vector{0.0, 0.0}, "f(x) = (3, 7); x* = c"));
  catalog.push_back(make("ROTATION_2D",
                         ContractionSpec::scaled_rotation(0.5, std::numbers::pi / 2.0, 0.5,
                                                          Vector{1.0, 0.0}),
                         Vector{0.0, 0.0},
                         "f(x) = 0.5 R(90 deg) x + (1, 0); x* = (0.8, 0.4) by 2x2 elimination"));
  catalog.push_back(make("KEPLER", ContractionSpec::kepler(0.5, 0.5, 1.0), Vector{0.0},
                         "f(x) = 1 + 0.5 sin x; x* by bisection"));
  catalog.push_back(make("FIXED_START",
                         ContractionSpec::affine(0.5, scalar_matrix(0.5), Vector{1.0}),
                         Vector{2.0}, "AFFINE_1D started at its fixed point, d = 0"));
  catalog.push_back(make("NEAR_ONE",
                         ContractionSpec::affine(0.999, scalar_matrix(0.999), Vector{1.0}),
                         Vector{0.0}, "f(x) = 0.999x + 1; x* = 1 / (1 - 0.999) by elimination"));
  return catalog;
}

ProblemInstance builtin_problem(const std::string& name) {
  std::string known;
  for (auto& p : builtin_catalog()) {
    if (p.name == name) return p;
    known += (known.empty() ? "" : ", ") + p.name;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown builtin problem '" + name + "' (known: " + known + ")");
}

}  // namespace cone_fixpoint
