#include "fvbem/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fvbem/expression.hpp"

namespace fvbem {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(std::istringstream& in, const std::string& what) {
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ConfigError("domain: bad number '" + token + "' in " + what);
    }
  }
  return values;
}

DomainDescriptor parse_domain(const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  const auto v = parse_numbers(in, kind);
  if (kind == "square") {
    if (v.size() != 3) throw ConfigError("domain: square needs <cx> <cy> <halfwidth>");
    return DomainDescriptor::square(Point(v[0], v[1]), v[2]);
  }
  if (kind == "rectangle") {
    if (v.size() != 4 && v.size() != 6)
      throw ConfigError("domain: rectangle needs <x0> <y0> <x1> <y1> [<nx> <ny>]");
    const int nx = v.size() == 6 ? static_cast<int>(v[4]) : 2;
    const int ny = v.size() == 6 ? static_cast<int>(v[5]) : 2;
    return DomainDescriptor::rectangle(Point(v[0], v[1]), Point(v[2], v[3]), nx, ny);
  }
  if (kind == "lshape") {
    if (v.size() > 1) throw ConfigError("domain: lshape takes at most <halfwidth>");
    return DomainDescriptor::lshape(v.empty() ? 0.25 : v[0]);
  }
  throw ConfigError("domain: unsupported kind '" + kind + "'");
}

double domain_diameter(const DomainDescriptor& d) { return (d.upper - d.lower).norm(); }

ScalarFunction scalar(const Expression& e) {
  return [e](const Point& x) { return e(x.x(), x.y()); };
}

/// Central-difference gradient for exact solutions given as expressions.
VectorFunction numeric_gradient(const Expression& e) {
  return [e](const Point& x) -> Eigen::Vector2d {
    const double h = 1e-6 * (1.0 + x.norm());
    return Eigen::Vector2d((e(x.x() + h, x.y()) - e(x.x() - h, x.y())) / (2.0 * h),
                           (e(x.x(), x.y() + h) - e(x.x(), x.y() - h)) / (2.0 * h));
  };
}

}  // namespace

ProblemSpec parse_problem_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }

  static const std::vector<std::string> known{
      "name", "domain", "rescale", "A", "A11", "A12", "A22", "A_piecewise", "b1", "b2", "r",
      "f", "u0", "t0", "radiation", "upwind", "exact_u", "exact_ue"};
  for (const auto& [key, value] : kv)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key '" + key + "'");

  auto expr = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    try {
      Expression e = Expression::parse(it == kv.end() ? fallback : it->second);
      if (e.uses_normal() && key != "t0")
        throw ConfigError(key + ": n1/n2 are only available in t0");
      return e;
    } catch (const ExpressionError& err) {
      throw ConfigError(key + ": " + err.what());
    }
  };

  ProblemSpec spec;
  spec.name = kv.count("name") ? kv["name"] : "user";
  if (!kv.count("domain")) throw ConfigError("missing key 'domain'");
  try {
    spec.domain = parse_domain(kv["domain"]);
  } catch (const MeshError& err) {
    throw ConfigError(std::string("domain: ") + err.what());
  }
  if (kv.count("rescale")) {
    double factor = 0.0;
    try {
      factor = std::stod(kv["rescale"]);
    } catch (const std::exception&) {
      throw ConfigError("rescale: not a number");
    }
    if (!(factor > 0.0)) throw ConfigError("rescale: factor must be positive");
    spec.domain.lower *= factor;
    spec.domain.upper *= factor;
  }

  const std::string radiation = kv.count("radiation") ? kv["radiation"] : "log";
  if (radiation == "log") spec.radiation = Radiation::LogGrowth;
  else if (radiation == "ainf") spec.radiation = Radiation::ConstantAtInfinity;
  else throw ConfigError("radiation: expected 'log' or 'ainf'");
  if (spec.radiation == Radiation::LogGrowth && !(domain_diameter(spec.domain) < 1.0))
    throw ConfigError(
        "log-growth radiation needs diam(domain) < 1; set 'rescale' or use radiation = ainf");

  try {
    spec.upwind = parse_upwind(kv.count("upwind") ? kv["upwind"] : "none");
  } catch (const ModelError& err) {
    throw ConfigError(err.what());
  }

  MatrixFunction a;
  if (kv.count("A")) {
    if (kv.count("A11") || kv.count("A12") || kv.count("A22"))
      throw ConfigError("give either A or A11/A12/A22");
    const Expression e = expr("A", "1");
    a = [e](const Point& x) -> Eigen::Matrix2d {
      return e(x.x(), x.y()) * Eigen::Matrix2d::Identity();
    };
  } else {
    const Expression a11 = expr("A11", "1"), a12 = expr("A12", "0"), a22 = expr("A22", "1");
    a = [a11, a12, a22](const Point& x) -> Eigen::Matrix2d {
      Eigen::Matrix2d m;
      const double off = a12(x.x(), x.y());
      m << a11(x.x(), x.y()), off, off, a22(x.x(), x.y());
      return m;
    };
  }
  const std::string piecewise = kv.count("A_piecewise") ? kv["A_piecewise"] : "false";
  if (piecewise != "true" && piecewise != "false")
    throw ConfigError("A_piecewise: expected true or false");
  spec.diffusion = piecewise == "true" ? CoefficientField::piecewise_constant(a)
                                       : CoefficientField::smooth(a);

  const Expression b1 = expr("b1", "0"), b2 = expr("b2", "0");
  spec.velocity.b = [b1, b2](const Point& x) {
    return Eigen::Vector2d(b1(x.x(), x.y()), b2(x.x(), x.y()));
  };
  if (b1.is_constant() && b2.is_constant())
    spec.velocity.divergence = [](const Point&) { return 0.0; };
  spec.reaction = scalar(expr("r", "0"));
  spec.source = SourceField::smooth(scalar(expr("f", "0")));
  spec.jumps.u0 = scalar(expr("u0", "0"));
  const Expression t0 = expr("t0", "0");
  spec.jumps.t0 = [t0](const Point& x, const Eigen::Vector2d& n) {
    return t0(ExpressionVariables{x.x(), x.y(), n.x(), n.y()});
  };

  if (kv.count("exact_u") != kv.count("exact_ue"))
    throw ConfigError("exact_u and exact_ue must be given together");
  if (kv.count("exact_u")) {
    const Expression u = expr("exact_u", "0"), ue = expr("exact_ue", "0");
    ExactSolution ex;
    ex.u = scalar(u);
    ex.grad_u = numeric_gradient(u);
    ex.u_e = scalar(ue);
    ex.grad_ue = numeric_gradient(ue);
    spec.exact = ex;
  }
  return spec;
}

ProblemSpec load_problem_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_problem_config(in);
}

}  // namespace fvbem
