// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Residuals are recomputed here with Eigen norms rather than read from the
// certificate.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cone_fixpoint/certificate.hpp"
#include "cone_fixpoint/cli.hpp"
#include "cone_fixpoint/cone_order.hpp"
#include "cone_fixpoint/engine.hpp"
#include "cone_fixpoint/io.hpp"
#include "cone_fixpoint/problems.hpp"
#include "test_support.hpp"

namespace cf = cone_fixpoint;

namespace {

constexpr std::uint64_t kSeed = 20240601;
constexpr int kRandomInstances = 100;
constexpr std::size_t kWitnessCount = 32;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Instance {
  std::string name;
  cf::ContractionSpec spec;
  cf::Vector x0;
};

double gap(const cf::Vector& a, const cf::Vector& b) { return (a.values() - b.values()).norm(); }

std::vector<Instance> all_instances() {
  std::vector<Instance> out;
  for (const auto& p : cf::builtin_catalog()) out.push_back({p.name, p.spec, p.x0});
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::size_t> dim(1, 8);
  std::uniform_real_distribution<double> lambda(0.1, 0.95);
  std::uniform_real_distribution<double> start(-1.0, 1.0);
  for (int i = 0; i < kRandomInstances; ++i) {
    const std::size_t m = dim(rng);
    const double l = lambda(rng);
    auto spec = cf::testing::random_affine(rng, m, l);
    std::vector<double> x0(m);
    for (auto& v : x0) v = start(rng);
    out.push_back({"random_affine_" + std::to_string(i), std::move(spec), cf::Vector(std::move(x0))});
  }
  return out;
}

struct SolvedInstance {
  Instance instance;
  cf::IterationTrace trace;
  std::vector<cf::AugmentedPoint> witnesses;
};

const std::vector<SolvedInstance>& solved_instances() {
  static const std::vector<SolvedInstance> solved = [] {
    std::vector<SolvedInstance> out;
    std::uint64_t seed = kSeed;
    for (auto& inst : all_instances()) {
      auto trace = cf::run(inst.spec, inst.x0, cf::StoppingRule::a_priori(1e-10));
      const auto om = cf::make_omega_spec(inst.spec, inst.x0);
      auto witnesses = cf::sample_omega(om, kWitnessCount, ++seed);
      out.push_back({std::move(inst), std::move(trace), std::move(witnesses)});
    }
    return out;
  }();
  return solved;
}

Outcome monotonicity() {
  std::size_t checked = 0, violations = 0;
  double worst = 0.0;
  for (const auto& s : solved_instances()) {
    const auto& pts = s.trace.points;
    for (std::size_t n = 0; n + 1 < pts.size(); ++n) {
      const double lhs = pts[n + 1].t() - pts[n].t();
      const double rhs = gap(pts[n + 1].x(), pts[n].x()) - 1e-10 * (1.0 + pts[n + 1].t());
      worst = std::min(worst, lhs - gap(pts[n + 1].x(), pts[n].x()));
      ++checked;
      if (lhs < rhs) ++violations;
    }
  }
  std::ostringstream d;
  d << checked << " steps over " << solved_instances().size() << " instances, " << violations
    << " violations, worst raw residual " << worst;
  return {violations == 0, d.str()};
}

Outcome boundedness() {
  std::size_t checked = 0, violations = 0;
  for (const auto& s : solved_instances()) {
    for (const auto& w : s.witnesses) {
      for (const auto& p : s.trace.points) {
        ++checked;
        if (w.t() - p.t() < gap(w.x(), p.x()) - 1e-9 * (1.0 + w.t())) ++violations;
      }
    }
  }
  std::ostringstream d;
  d << checked << " (witness, n) pairs, " << violations << " violations";
  return {violations == 0, d.str()};
}

Outcome lower_bound() {
  std::size_t checked = 0, violations = 0, failed_certs = 0;
  for (const auto& s : solved_instances()) {
    const double lambda = s.instance.spec.lambda();
    const cf::Vector x0 = s.trace.points.front().x();
    const double d = gap(cf::evaluate(s.instance.spec, x0), x0);
    const double t_star = d / (1.0 - lambda);
    const cf::Vector& x_star = s.trace.final_point().x();
    for (const auto& w : s.witnesses) {
      ++checked;
      if (w.t() - t_star < gap(w.x(), x_star) - (1e-9 * (1.0 + w.t()) + 1e-10)) ++violations;
    }
    if (!cf::verify_certificate(s.trace, s.witnesses).pass) ++failed_certs;
  }
  std::ostringstream d;
  d << checked << " witnesses, " << violations << " violations; " << failed_certs
    << " certificates failed";
  return {violations == 0 && failed_certs == 0, d.str()};
}

Outcome error_bound() {
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -0.5, 0.5, 0;
  const std::vector<std::pair<std::string, cf::Vector>> oracles{
      {"AFFINE_1D", cf::Vector{2.0}},
      {"ROTATION_2D", cf::testing::qr_fixed_point(rot, cf::Vector{1, 0})},
      {"KEPLER", cf::Vector{cf::testing::kepler_newton(0.5, 1.0)}},
  };
  std::size_t checked = 0, violations = 0;
  for (const auto& [name, star] : oracles) {
    const auto p = cf::builtin_problem(name);
    const auto trace = cf::run(p.spec, p.x0, cf::StoppingRule::fixed_count(100));
    const double lambda = p.spec.lambda();
    for (std::size_t n = 0; n < trace.points.size(); ++n) {
      ++checked;
      const double bound = std::pow(lambda, static_cast<double>(n)) * trace.d / (1.0 - lambda);
      if (gap(trace.points[n].x(), star) > bound + 1e-12) ++violations;
    }
  }
  const auto affine = cf::builtin_problem("AFFINE_1D");
  const auto trace = cf::run(affine.spec, affine.x0, cf::StoppingRule::fixed_count(3));
  const double actual = gap(trace.points[3].x(), cf::Vector{2.0});
  const double bound = std::pow(0.5, 3) * trace.d / 0.5;
  const bool equality = std::abs(actual - bound) <= 1e-12 && std::abs(actual - 0.25) <= 1e-12;
  std::ostringstream d;
  d << checked << " iterates, " << violations << " violations; AFFINE_1D n=3: |x-x*|=" << actual
    << " bound=" << bound;
  return {violations == 0 && equality, d.str()};
}

Outcome closed_form() {
  constexpr std::size_t kSteps = 10000;
  std::size_t checked = 0, violations = 0;
  double worst = 0.0;
  auto compare = [&](double iterated, double d, double lambda, std::size_t n) {
    const double closed = cf::t_closed_form(d, lambda, n);
    const double err = std::abs(iterated - closed);
    const double scale = std::max(std::abs(iterated), std::abs(closed));
    ++checked;
    if (scale > 0.0) worst = std::max(worst, err / scale);
    if (err > 1e-12 * scale) ++violations;
  };
  for (const auto& p : cf::builtin_catalog()) {
    const auto trace = cf::run(p.spec, p.x0, cf::StoppingRule::fixed_count(kSteps));
    for (std::size_t n = 0; n < trace.points.size(); ++n) {
      compare(trace.points[n].t(), trace.d, p.spec.lambda(), n);
    }
    // Drive the step directly as well, so d = 0 instances also reach 10^4.
    const double d = gap(cf::evaluate(p.spec, p.x0), p.x0);
    cf::AugmentedPoint point(p.x0, 0.0);
    for (std::size_t n = 1; n <= kSteps; ++n) {
      point = cf::augmented_step(p.spec, point, d);
      compare(point.t(), d, p.spec.lambda(), n);
    }
  }
  std::ostringstream d;
  d << checked << " comparisons, worst relative error " << worst << ", " << violations
    << " violations";
  return {violations == 0, d.str()};
}

Outcome oracle_convergence() {
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -0.5, 0.5, 0;
  const std::vector<std::pair<std::string, cf::Vector>> oracles{
      {"AFFINE_1D", cf::Vector{2.0}},
      {"ROTATION_2D", cf::testing::qr_fixed_point(rot, cf::Vector{1, 0})},
      {"KEPLER", cf::Vector{cf::testing::kepler_newton(0.5, 1.0)}},
  };
  bool ok = true;
  std::ostringstream d;
  d.precision(3);
  for (const auto& [name, star] : oracles) {
    const auto p = cf::builtin_problem(name);
    const auto trace = cf::run(p.spec, p.x0, cf::StoppingRule::a_priori(1e-8));
    const double err = gap(trace.final_point().x(), star);
    ok = ok && err <= 1e-8 && trace.stop_reason == cf::StopReason::kAPrioriReached;
    d << name << " err=" << err << "; ";
  }
  const auto n = cf::a_priori_iterations(1.0, 0.5, 1e-6);
  const auto enumerated = cf::testing::enumerate_a_priori(1.0, 0.5, 1e-6);
  ok = ok && n == 21 && enumerated == 21;
  d << "a_priori_iterations(1, 0.5, 1e-6)=" << n << " (enumeration " << enumerated << ")";
  return {ok, d.str()};
}

Outcome cone_axioms() {
  constexpr int kSamples = 10000;
  const auto strict = cf::TolerancePolicy::strict_policy();
  cf::testing::LatticeGenerator gen(kSeed);
  std::size_t closure = 0, pointed = 0, reflexive = 0, transitive = 0, antisymmetric = 0,
              compatible = 0;
  for (int i = 0; i < kSamples; ++i) {
    const auto m = gen.dim(6);
    const auto u = gen.cone_member(m);
    const auto v = gen.cone_member(m);
    const double s = static_cast<double>(gen.integer(0, 9));
    const double t = static_cast<double>(gen.integer(0, 9));
    if (!cf::lorentz_contains(s * u + t * v, strict)) ++closure;

    const auto small = i % 7 == 0 ? cf::AugmentedPoint(cf::Vector::zeros(m), 0.0)
                                  : gen.cone_member(m, 2);
    if (cf::lorentz_contains(small, strict) && cf::lorentz_contains(-small, strict) &&
        !(small == cf::AugmentedPoint(cf::Vector::zeros(m), 0.0))) {
      ++pointed;
    }

    const auto a = gen.point(m);
    if (!cf::leq_lorentz(a, a, strict)) ++reflexive;
    const auto b = a + u;
    const auto c = b + v;
    if (!(cf::leq_lorentz(a, b, strict) && cf::leq_lorentz(b, c, strict) &&
          cf::leq_lorentz(a, c, strict))) {
      ++transitive;
    }
    if (cf::leq_lorentz(b, a, strict) && !(a == b)) ++antisymmetric;
    const auto other = gen.point(m, 2);
    if (cf::leq_lorentz(a, other, strict) && cf::leq_lorentz(other, a, strict) && !(a == other)) {
      ++antisymmetric;
    }

    const auto z = gen.point(m);
    const double mu = static_cast<double>(gen.integer(0, 12));
    if (!cf::leq_lorentz(mu * a + z, mu * b + z, strict)) ++compatible;
  }
  const std::size_t total = closure + pointed + reflexive + transitive + antisymmetric + compatible;
  std::ostringstream d;
  d << kSamples << " samples; violations: closure " << closure << ", pointed " << pointed
    << ", reflexive " << reflexive << ", transitive " << transitive << ", antisymmetric "
    << antisymmetric << ", compatibility " << compatible;
  return {total == 0, d.str()};
}

Outcome tamper_detection() {
  constexpr int kTrials = 100;
  constexpr double kMagnitude = 1e-6;
  const auto p = cf::builtin_problem("AFFINE_1D");
  const auto honest = cf::run(p.spec, p.x0, cf::StoppingRule::a_priori(1e-10));
  if (!cf::verify_certificate(honest, kSeed).pass) return {false, "honest trace failed"};

  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<std::size_t> index(0, honest.points.size() - 1);
  std::bernoulli_distribution coin(0.5);
  int caught = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    auto trace = honest;
    const std::size_t n = index(rng);
    const double delta = coin(rng) ? kMagnitude : -kMagnitude;
    const auto& pt = trace.points[n];
    trace.points[n] = coin(rng) ? cf::AugmentedPoint(cf::Vector{pt.x()[0] + delta}, pt.t())
                                : cf::AugmentedPoint(pt.x(), pt.t() + delta);
    if (!cf::verify_certificate(trace, kSeed + static_cast<std::uint64_t>(trial)).pass) ++caught;
  }
  std::ostringstream d;
  d << caught << "/" << kTrials << " perturbations of a " << honest.points.size()
    << "-point trace detected";
  return {caught == kTrials, d.str()};
}

Outcome round_trip() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cone_fixpoint_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream sink;
  auto cli = [&](std::vector<std::string> args) {
    args.insert(args.begin(), "cone_fixpoint");
    return cf::run_cli(args, sink, sink);
  };

  bool ok = true;
  std::ostringstream d;
  for (const auto& p : cf::builtin_catalog()) {
    const std::string trace = (dir / (p.name + ".csv")).string();
    const std::string cert = (dir / (p.name + ".json")).string();
    const int solved = cli({"solve", "--builtin", p.name, "--eps", "1e-8", "--trace", trace});
    const int verified =
        cli({"certify", "--builtin", p.name, "--verify", trace, "--certificate", cert});
    const bool pass = solved == 0 && verified == 0 &&
                      nlohmann::json::parse(cf::read_file(cert))["verdict"]["pass"] == true;
    ok = ok && pass;
    if (!pass) d << p.name << " round trip failed; ";

    const std::string first = (dir / (p.name + ".1.json")).string();
    const std::string second = (dir / (p.name + ".2.json")).string();
    cli({"certify", "--builtin", p.name, "--seed", "7", "--certificate", first});
    cli({"certify", "--builtin", p.name, "--seed", "7", "--certificate", second});
    if (cf::read_file(first) != cf::read_file(second)) {
      ok = false;
      d << p.name << " certificates differ; ";
    }
  }
  fs::remove_all(dir);
  d << "solve -> CSV -> certify --verify on " << cf::builtin_catalog().size()
    << " builtins; same-seed certificates compared byte for byte";
  return {ok, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 monotonicity: t^{n+1}-t^n >= |x^{n+1}-x^n| - 1e-10(1+t^{n+1})", monotonicity},
      {"C2 boundedness: t-t^n >= |x-x^n| - 1e-9(1+t) for 32 Omega witnesses", boundedness},
      {"C3 limit is a lower bound: t-t* >= |x-x*| - (1e-9(1+t)+1e-10)", lower_bound},
      {"C4 error bound: |x^n-x*| <= lambda^n d/(1-lambda) + 1e-12", error_bound},
      {"C5 closed form: t^n vs d(1-lambda^n)/(1-lambda) to 1e-12 rel, n <= 1e4", closed_form},
      {"C6 oracle convergence: APriori(1e-8) within 1e-8", oracle_convergence},
      {"C7 cone/order axioms on 1e4 strict samples", cone_axioms},
      {"C8 tamper detection: 100 perturbations of size 1e-6", tamper_detection},
      {"C9 round trip and byte-identical certificates", round_trip},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << "\n       " << outcome.detail
              << " (" << seconds << " s)\n";
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : "acceptance criteria failed: ")
            << (failures == 0 ? "" : std::to_string(failures)) << "\n";
  return failures == 0 ? 0 : 1;
}
