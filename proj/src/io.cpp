#include "cone_fixpoint/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cone_fixpoint/error.hpp"

namespace cone_fixpoint {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_error(const std::string& field, const std::string& message) {
  throw Error(ErrorKind::kParse, "problem field '" + field + "': " + message);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed,
                         const std::string& prefix) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) parse_error(prefix + key, "unknown key");
  }
}

const json& require(const json& object, const std::string& key, const std::string& field) {
  auto it = object.find(key);
  if (it == object.end()) parse_error(field, "missing");
  return *it;
}

double as_real(const json& value, const std::string& field) {
  if (!value.is_number()) parse_error(field, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) parse_error(field, "not finite");
  return v;
}

std::uint64_t as_count(const json& value, const std::string& field) {
  if (!value.is_number_unsigned()) parse_error(field, "expected a nonnegative integer");
  return value.get<std::uint64_t>();
}

Vector as_vector(const json& value, const std::string& field, std::size_t dim) {
  if (!value.is_array()) parse_error(field, "expected an array of numbers");
  if (value.size() != dim) {
    parse_error(field, "expected " + std::to_string(dim) + " entries, got " +
                           std::to_string(value.size()));
  }
  std::vector<double> coords;
  for (std::size_t i = 0; i < value.size(); ++i) {
    coords.push_back(as_real(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return Vector(std::move(coords));
}

Eigen::MatrixXd as_matrix(const json& value, const std::string& field, std::size_t dim) {
  if (!value.is_array() || value.size() != dim) {
    parse_error(field, "expected " + std::to_string(dim) + " rows");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd A(n, n);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    const Vector row = as_vector(value[r], row_field, dim);
    for (std::size_t c = 0; c < dim; ++c) {
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return A;
}

MapFamily parse_map(const json& map, std::size_t dim) {
  if (!map.is_object()) parse_error("map", "expected an object");
  const json& kind_value = require(map, "kind", "map.kind");
  if (!kind_value.is_string()) parse_error("map.kind", "expected a string");
  const auto kind = kind_value.get<std::string>();

  if (kind == "constant") {
    reject_unknown_keys(map, {"kind", "c"}, "map.");
    return ConstantMap{as_vector(require(map, "c", "map.c"), "map.c", dim)};
  }
  if (kind == "affine") {
    reject_unknown_keys(map, {"kind", "A", "b"}, "map.");
    return AffineMap{as_matrix(require(map, "A", "map.A"), "map.A", dim),
                     as_vector(require(map, "b", "map.b"), "map.b", dim)};
  }
  if (kind == "scaled_rotation") {
    reject_unknown_keys(map, {"kind", "theta", "scale", "b"}, "map.");
    if (dim != 2) parse_error("dimension", "scaled_rotation requires dimension 2");
    return ScaledRotationMap{as_real(require(map, "theta", "map.theta"), "map.theta"),
                             as_real(require(map, "scale", "map.scale"), "map.scale"),
                             as_vector(require(map, "b", "map.b"), "map.b", dim)};
  }
  if (kind == "kepler") {
    reject_unknown_keys(map, {"kind", "e", "M"}, "map.");
    if (dim != 1) parse_error("dimension", "kepler requires dimension 1");
    return KeplerScalarMap{as_real(require(map, "e", "map.e"), "map.e"),
                           as_real(require(map, "M", "map.M"), "map.M")};
  }
  parse_error("map.kind", "unknown map kind '" + kind + "'");
}

std::string fmt17(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

ordered_json to_json(const Vector& v) {
  ordered_json out = ordered_json::array();
  for (double c : v.coords()) out.push_back(c);
  return out;
}

ordered_json to_json(const AugmentedPoint& p) {
  return ordered_json{{"x", to_json(p.x())}, {"t", p.t()}};
}

ordered_json summarize(const std::vector<double>& residuals, bool passed) {
  ordered_json out;
  out["count"] = residuals.size();
  if (residuals.empty()) {
    out["min_residual"] = nullptr;
    out["argmin"] = nullptr;
  } else {
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < residuals.size(); ++i) {
      if (residuals[i] < residuals[argmin]) argmin = i;
    }
    out["min_residual"] = residuals[argmin];
    out["argmin"] = argmin;
  }
  out["passed"] = passed;
  return out;
}

bool failed(const ConvergenceCertificate& cert, CheckKind kind) {
  return cert.first_failure && cert.first_failure->check == kind;
}

}  // namespace

StoppingRule::Kind parse_rule_kind(std::string_view name) {
  if (name == "apriori") return StoppingRule::Kind::kAPriori;
  if (name == "aposteriori") return StoppingRule::Kind::kAPosteriori;
  if (name == "fixed") return StoppingRule::Kind::kFixedCount;
  throw Error(ErrorKind::kParse, "unknown stopping rule '" + std::string(name) +
                                     "' (expected apriori, aposteriori or fixed)");
}

const char* rule_kind_name(StoppingRule::Kind kind) {
  switch (kind) {
    case StoppingRule::Kind::kAPriori: return "apriori";
    case StoppingRule::Kind::kAPosteriori: return "aposteriori";
    case StoppingRule::Kind::kFixedCount: return "fixed";
  }
  return "unknown";
}

ProblemFile parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::kParse, "problem file must be a JSON object");
  reject_unknown_keys(doc, {"dimension", "lambda", "map", "x0", "rule", "eps", "count",
                            "max_iterations", "seed"},
                      "");

  const auto dim = as_count(require(doc, "dimension", "dimension"), "dimension");
  if (dim < 1) parse_error("dimension", "must be >= 1");
  const double lambda = as_real(require(doc, "lambda", "lambda"), "lambda");
  MapFamily map = parse_map(require(doc, "map", "map"), dim);
  Vector x0 = as_vector(require(doc, "x0", "x0"), "x0", dim);

  RunParameters run;
  if (auto it = doc.find("rule"); it != doc.end()) {
    if (!it->is_string()) parse_error("rule", "expected a string");
    try {
      run.rule = parse_rule_kind(it->get<std::string>());
    } catch (const Error& e) {
      parse_error("rule", e.what());
    }
  }
  if (auto it = doc.find("eps"); it != doc.end()) {
    run.eps = as_real(*it, "eps");
    if (!(*run.eps > 0.0)) parse_error("eps", "must be positive");
  }
  if (auto it = doc.find("count"); it != doc.end()) run.count = as_count(*it, "count");
  if (auto it = doc.find("max_iterations"); it != doc.end()) {
    run.max_iterations = as_count(*it, "max_iterations");
    if (*run.max_iterations < 1) parse_error("max_iterations", "must be >= 1");
  }
  if (auto it = doc.find("seed"); it != doc.end()) run.seed = as_count(*it, "seed");

  try {
    return {ContractionSpec(dim, lambda, std::move(map)), std::move(x0), run};
  } catch (const Error& e) {
    parse_error("map", e.what());
  }
}

ProblemFile load_problem(const std::filesystem::path& path) { return parse_problem(read_file(path)); }

ordered_json problem_to_json(const ContractionSpec& spec, const Vector& x0) {
  ordered_json map;
  map["kind"] = family_name(spec.map());
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantMap>) {
          map["c"] = to_json(m.c);
        } else if constexpr (std::is_same_v<T, AffineMap>) {
          ordered_json rows = ordered_json::array();
          for (Eigen::Index r = 0; r < m.A.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (Eigen::Index c = 0; c < m.A.cols(); ++c) row.push_back(m.A(r, c));
            rows.push_back(row);
          }
          map["A"] = rows;
          map["b"] = to_json(m.b);
        } else if constexpr (std::is_same_v<T, ScaledRotationMap>) {
          map["theta"] = m.theta;
          map["scale"] = m.scale;
          map["b"] = to_json(m.b);
        } else {
          map["e"] = m.e;
          map["M"] = m.M;
        }
      },
      spec.map());

  ordered_json out;
  out["dimension"] = spec.dimension();
  out["lambda"] = spec.lambda();
  out["map"] = map;
  out["x0"] = to_json(x0);
  return out;
}

std::string trace_to_csv(const IterationTrace& trace) {
  const std::size_t m = trace.x0.dim();
  std::string out = "n";
  for (std::size_t i = 0; i < m; ++i) out += ",x_" + std::to_string(i);
  out += ",t,step_norm,t_increment,mono_residual\n";

  const auto& pts = trace.points;
  for (std::size_t n = 0; n < pts.size(); ++n) {
    out += std::to_string(n);
    for (double c : pts[n].x().coords()) out += "," + fmt17(c);
    out += "," + fmt17(pts[n].t());
    double step = 0.0;
    double increment = 0.0;
    if (n > 0) {
      step = distance(pts[n].x(), pts[n - 1].x());
      increment = pts[n].t() - pts[n - 1].t();
    }
    out += "," + fmt17(step) + "," + fmt17(increment) + "," + fmt17(increment - step) + "\n";
  }
  return out;
}

std::vector<AugmentedPoint> parse_trace_csv(std::string_view text) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  auto number = [](const std::string& cell, std::size_t line_no) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0' || !std::isfinite(v)) {
      throw Error(ErrorKind::kParse, "trace line " + std::to_string(line_no) +
                                         ": bad number '" + cell + "'");
    }
    return v;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "trace is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  constexpr std::size_t kFixedColumns = 5;  // n, t, step_norm, t_increment, mono_residual
  if (header.size() < kFixedColumns + 1 || header.front() != "n") {
    throw Error(ErrorKind::kParse, "trace header is malformed: " + line);
  }
  const std::size_t m = header.size() - kFixedColumns;
  for (std::size_t i = 0; i < m; ++i) {
    if (header[1 + i] != "x_" + std::to_string(i)) {
      throw Error(ErrorKind::kParse, "trace header column " + std::to_string(1 + i) +
                                         " should be x_" + std::to_string(i));
    }
  }
  const std::vector<std::string> tail{"t", "step_norm", "t_increment", "mono_residual"};
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (header[1 + m + i] != tail[i]) {
      throw Error(ErrorKind::kParse, "trace header column " + std::to_string(1 + m + i) +
                                         " should be " + tail[i]);
    }
  }

  std::vector<AugmentedPoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::kParse, "trace line " + std::to_string(line_no) + " has " +
                                         std::to_string(cells.size()) + " columns, expected " +
                                         std::to_string(header.size()));
    }
    if (cells[0] != std::to_string(points.size())) {
      throw Error(ErrorKind::kParse, "trace line " + std::to_string(line_no) +
                                         ": expected n=" + std::to_string(points.size()));
    }
    std::vector<double> x;
    for (std::size_t i = 0; i < m; ++i) x.push_back(number(cells[1 + i], line_no));
    points.emplace_back(Vector(std::move(x)), number(cells[1 + m], line_no));
  }
  if (points.empty()) throw Error(ErrorKind::kParse, "trace has no rows");
  return points;
}

IterationTrace trace_from_points(const ContractionSpec& spec, std::vector<AugmentedPoint> points) {
  if (points.empty()) throw Error(ErrorKind::kInvalidInput, "trace has no points");
  if (points[0].dim() != spec.dimension()) {
    throw Error(ErrorKind::kInvalidInput, "trace dimension " + std::to_string(points[0].dim()) +
                                              " does not match problem dimension " +
                                              std::to_string(spec.dimension()));
  }
  Vector x0 = points[0].x();
  const double d = distance(evaluate(spec, x0), x0);
  return {spec, std::move(x0), d, std::move(points), StopReason::kFixedCountReached,
          (1.0 - spec.lambda()) < kConditioningThreshold};
}

ordered_json certificate_to_json(const ConvergenceCertificate& cert,
                                 const CertificateContext& context) {
  ordered_json out;
  out["tool"] = kToolName;
  out["version"] = kToolVersion;
  out["problem"] = context.problem;
  out["seed"] = context.seed;
  out["tolerance"] = {{"atol", cert.tolerance.atol},
                      {"rtol", cert.tolerance.rtol},
                      {"strict", cert.tolerance.strict}};
  out["lambda"] = cert.lambda;
  out["d"] = cert.d;
  out["N"] = cert.steps;
  out["t_star"] = cert.t_star;
  out["stopping_bound"] = cert.stopping_bound;
  if (context.stop_reason) out["stop_reason"] = to_string(*context.stop_reason);
  out["final_point"] = to_json(*cert.final_point);
  out["limit_point"] = to_json(*cert.limit_point);

  ordered_json checks;
  checks["monotone"] = summarize(cert.monotone_residuals, !failed(cert, CheckKind::kMonotone));

  {
    ordered_json bounded;
    std::size_t count = 0;
    std::optional<std::pair<std::size_t, std::size_t>> argmin;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < cert.witnesses.size(); ++w) {
      const auto& r = cert.witnesses[w].bound_residuals;
      for (std::size_t n = 0; n < r.size(); ++n, ++count) {
        if (r[n] < best) {
          best = r[n];
          argmin = {w, n};
        }
      }
    }
    bounded["count"] = count;
    if (argmin) {
      bounded["min_residual"] = best;
      bounded["argmin"] = {{"witness", argmin->first}, {"n", argmin->second}};
    } else {
      bounded["min_residual"] = nullptr;
      bounded["argmin"] = nullptr;
    }
    bounded["passed"] = !failed(cert, CheckKind::kBounded);
    checks["bounded"] = bounded;
  }

  checks["lower_bound"] =
      summarize(cert.lower_bound_residuals, !failed(cert, CheckKind::kLowerBound));
  checks["fixed_point_residual"] = {
      {"residual", cert.fixed_point_residual},
      {"allowance", cert.fixed_point_allowance},
      {"passed", !failed(cert, CheckKind::kFixedPointResidual)}};
  checks["picard_consistency"] =
      summarize(cert.picard_residuals, !failed(cert, CheckKind::kPicardConsistency));
  checks["t_recurrence"] =
      summarize(cert.recurrence_residuals, !failed(cert, CheckKind::kTRecurrence));
  out["checks"] = checks;

  ordered_json witnesses = ordered_json::array();
  for (const auto& w : cert.witnesses) witnesses.push_back(to_json(w.point));
  out["witnesses"] = witnesses;

  if (context.full) {
    ordered_json residuals;
    residuals["monotone"] = cert.monotone_residuals;
    ordered_json bounded = ordered_json::array();
    for (const auto& w : cert.witnesses) bounded.push_back(w.bound_residuals);
    residuals["bounded"] = bounded;
    residuals["lower_bound"] = cert.lower_bound_residuals;
    residuals["picard_consistency"] = cert.picard_residuals;
    residuals["t_recurrence"] = cert.recurrence_residuals;
    out["residuals"] = residuals;
  }

  ordered_json verdict;
  verdict["pass"] = cert.pass;
  if (cert.first_failure) {
    const auto& f = *cert.first_failure;
    verdict["first_failure"] = {{"check", to_string(f.check)},
                                {"index", f.index},
                                {"witness", f.witness ? ordered_json(*f.witness) : ordered_json()},
                                {"residual", f.residual},
                                {"message", f.describe()}};
  } else {
    verdict["first_failure"] = nullptr;
  }
  out["verdict"] = verdict;
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace cone_fixpoint
