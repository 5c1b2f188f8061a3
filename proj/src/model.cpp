#include "fvbem/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fvbem {

CoefficientField CoefficientField::smooth(MatrixFunction f) {
  CoefficientField c;
  c.kind_ = Kind::Smooth;
  c.f_ = std::move(f);
  return c;
}

CoefficientField CoefficientField::piecewise_constant(MatrixFunction at_cell_center) {
  CoefficientField c;
  c.kind_ = Kind::PiecewiseConstant;
  c.f_ = std::move(at_cell_center);
  return c;
}

CoefficientField CoefficientField::isotropic(double value) {
  return smooth([value](const Point&) -> Eigen::Matrix2d {
    return value * Eigen::Matrix2d::Identity();
  });
}

SourceField SourceField::smooth(ScalarFunction f) {
  SourceField s;
  s.f = std::move(f);
  return s;
}

SourceField SourceField::rectangle_indicator(const Point& lower, const Point& upper,
                                             double value) {
  SourceField s;
  s.f = [lower, upper, value](const Point& x) {
    const bool inside = x.x() >= lower.x() && x.x() <= upper.x() && x.y() >= lower.y() &&
                        x.y() <= upper.y();
    return inside ? value : 0.0;
  };
  s.indicator = Indicator{lower, upper, value};
  return s;
}

std::string to_string(UpwindKind kind) {
  switch (kind) {
    case UpwindKind::None: return "none";
    case UpwindKind::Full: return "full";
    case UpwindKind::Steered: return "steered";
  }
  return "none";
}

UpwindKind parse_upwind(const std::string& text) {
  if (text == "none") return UpwindKind::None;
  if (text == "full") return UpwindKind::Full;
  if (text == "steered") return UpwindKind::Steered;
  throw ModelError("unknown upwind scheme '" + text + "'");
}

double divergence(const VelocityField& b, const Point& x, double scale) {
  if (b.divergence) return (*b.divergence)(x);
  const double step = 1e-6 * scale;
  const Point ex(step, 0.0), ey(0.0, step);
  return (b(x + ex).x() - b(x - ex).x() + b(x + ey).y() - b(x - ey).y()) / (2.0 * step);
}

double gamma(const ProblemSpec& spec, const Point& x) {
  return 0.5 * divergence(spec.velocity, x) + spec.reaction(x);
}

std::vector<Point> sample_points(const PrimalMesh& mesh) {
  std::vector<Point> pts = mesh.nodes();
  const auto& rule = triangle_rule_degree5();
  for (const auto& tri : mesh.triangles()) {
    for (const auto& l : rule.barycentric)
      pts.push_back(l[0] * mesh.nodes()[tri[0]] + l[1] * mesh.nodes()[tri[1]] +
                    l[2] * mesh.nodes()[tri[2]]);
  }
  return pts;
}

void check_gamma(const ProblemSpec& spec, const PrimalMesh& mesh, double tol) {
  for (const auto& x : sample_points(mesh)) {
    const double g = gamma(spec, x);
    if (!(g >= -tol)) {
      std::ostringstream os;
      os << "gamma = div b / 2 + r is negative (" << g << ") at (" << x.x() << ", " << x.y()
         << ")";
      throw ModelError(os.str());
    }
  }
}

int select_beta(const ProblemSpec& spec, const PrimalMesh& mesh, double tol) {
  for (const auto& x : sample_points(mesh))
    if (std::abs(gamma(spec, x)) > tol) return 0;
  return 1;
}

EigenvalueReport min_eigenvalue_report(const CoefficientField& a, const PrimalMesh& mesh) {
  EigenvalueReport report{std::numeric_limits<double>::infinity(), Point::Zero(), false};
  const auto& rule = triangle_rule_degree5();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point g = mesh.centroid(t);
    std::vector<Point> pts{mesh.nodes()[tri[0]], mesh.nodes()[tri[1]], mesh.nodes()[tri[2]]};
    for (const auto& l : rule.barycentric)
      pts.push_back(l[0] * mesh.nodes()[tri[0]] + l[1] * mesh.nodes()[tri[1]] +
                    l[2] * mesh.nodes()[tri[2]]);
    for (const auto& x : pts) {
      const Eigen::Matrix2d m = a(x, g);
      if (!m.allFinite()) throw ModelError("diffusion matrix is not finite");
      const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
      if (std::abs(m(0, 1) - m(1, 0)) > 1e-14 * scale) {
        std::ostringstream os;
        os << "diffusion matrix is not symmetric at (" << x.x() << ", " << x.y() << ")";
        throw ModelError(os.str());
      }
      const double mean = 0.5 * (m(0, 0) + m(1, 1));
      const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
      const double lambda = mean - std::hypot(half_diff, m(0, 1));
      if (lambda < report.lambda_min) {
        report.lambda_min = lambda;
        report.where = x;
      }
    }
  }
  report.warning = report.lambda_min <= 0.25;
  return report;
}

double manufactured_defect(const ProblemSpec& spec, const PrimalMesh& mesh) {
  if (!spec.exact) throw ModelError("problem has no exact solution");
  const auto& ex = *spec.exact;
  const auto& gauss = gauss_legendre(4);
  double defect = 0.0;
  for (int k = 0; k < mesh.num_boundary_edges(); ++k) {
    const auto& be = mesh.boundary_edges()[k];
    const Point a = mesh.nodes()[be.nodes[0]], b = mesh.nodes()[be.nodes[1]];
    const Eigen::Vector2d n = mesh.boundary_normal(k);
    const Point g = mesh.centroid(be.triangle);
    for (double s : gauss.nodes) {
      const Point x = a + s * (b - a);
      defect = std::max(defect, std::abs(ex.u(x) - ex.u_e(x) - spec.jumps.u0(x)));
      const Eigen::Vector2d bx = spec.velocity(x);
      double conormal = (spec.diffusion(x, g) * ex.grad_u(x)).dot(n);
      if (bx.dot(n) < 0.0) conormal -= bx.dot(n) * ex.u(x);
      defect = std::max(defect, std::abs(conormal - ex.phi(x, n) - spec.jumps.t0(x, n)));
    }
  }
  return defect;
}

namespace {

/// Jumps u0 = u - u_e and t0 = conormal(u) - phi built from an exact pair.
JumpData jumps_from_exact(const ExactSolution& ex, const CoefficientField& a,
                          const VelocityField& b) {
  JumpData j;
  j.u0 = [ex](const Point& x) { return ex.u(x) - ex.u_e(x); };
  j.t0 = [ex, a, b](const Point& x, const Eigen::Vector2d& n) {
    const Eigen::Vector2d bx = b(x);
    // smooth coefficients only, so the cell center argument is irrelevant
    double conormal = (a(x, x) * ex.grad_u(x)).dot(n);
    if (bx.dot(n) < 0.0) conormal -= bx.dot(n) * ex.u(x);
    return conormal - ex.phi(x, n);
  };
  return j;
}

ExactSolution log_exterior(ExactSolution ex, const Point& center) {
  ex.u_e = [center](const Point& x) { return std::log((x - center).norm()); };
  ex.grad_ue = [center](const Point& x) -> Eigen::Vector2d {
    const Eigen::Vector2d d = x - center;
    return d / d.squaredNorm();
  };
  return ex;
}

}  // namespace

ProblemSpec mexican_hat_problem(double off_diagonal) {
  ProblemSpec spec;
  spec.name = off_diagonal == 160.0 ? "mexican_hat" : "mexican_hat_" + std::to_string(static_cast<int>(off_diagonal));
  spec.domain = DomainDescriptor::square(Point(0.0, 0.0), 0.25);

  const double c = off_diagonal;
  auto a_of = [c](const Point& x) -> Eigen::Matrix2d {
    Eigen::Matrix2d m;
    m << 10.0 + std::cos(x.x()), c * x.x() * x.y(), c * x.x() * x.y(), 10.0 + std::sin(x.y());
    return m;
  };
  spec.diffusion = CoefficientField::smooth(a_of);
  spec.velocity.b = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
  spec.velocity.divergence = [](const Point&) { return 0.0; };
  spec.reaction = [](const Point&) { return 0.0; };

  // u = (1 - 100 q) exp(-50 q), q = |x|^2; grad u = x g(q) with
  // g(q) = -(300 - 10000 q) exp(-50 q) and g'(q) = (25000 - 500000 q) exp(-50 q).
  auto g = [](double q) { return -(300.0 - 10000.0 * q) * std::exp(-50.0 * q); };
  auto dg = [](double q) { return (25000.0 - 500000.0 * q) * std::exp(-50.0 * q); };
  ExactSolution ex;
  ex.u = [](const Point& x) {
    const double q = x.squaredNorm();
    return (1.0 - 100.0 * q) * std::exp(-50.0 * q);
  };
  ex.grad_u = [g](const Point& x) -> Eigen::Vector2d { return x * g(x.squaredNorm()); };
  ex = log_exterior(ex, Point::Zero());
  spec.exact = ex;

  // f = -div(A grad u) = -sum_ij (d_i A_ij d_j u + A_ij d_i d_j u)
  spec.source = SourceField::smooth([a_of, g, dg, c](const Point& x) {
    const double q = x.squaredNorm();
    const double gq = g(q), dgq = dg(q);
    const Eigen::Vector2d grad = x * gq;
    Eigen::Matrix2d hess = gq * Eigen::Matrix2d::Identity() + 2.0 * dgq * (x * x.transpose());
    const Eigen::Matrix2d a = a_of(x);
    // column divergence of A: (d1 A11 + d2 A21, d1 A12 + d2 A22)
    const Eigen::Vector2d div_a(-std::sin(x.x()) + c * x.x(), c * x.y() + std::cos(x.y()));
    return -(div_a.dot(grad) + (a.cwiseProduct(hess)).sum());
  });
  spec.jumps = jumps_from_exact(ex, spec.diffusion, spec.velocity);
  spec.radiation = Radiation::LogGrowth;
  spec.upwind = UpwindKind::None;
  return spec;
}

ProblemSpec tanh_convection_problem() {
  ProblemSpec spec;
  spec.name = "tanh_convection";
  spec.domain = DomainDescriptor::square(Point(0.25, 0.25), 0.25);
  spec.diffusion = CoefficientField::isotropic(0.5);
  spec.velocity.b = [](const Point& x) { return Eigen::Vector2d(1000.0 * x.x(), 0.0); };
  spec.velocity.divergence = [](const Point&) { return 1000.0; };
  spec.reaction = [](const Point&) { return 0.0; };

  // u = (1 - tanh(xi)) / 2, xi = (0.25 - x1) / 0.02:
  // u' = 25 (1 - T^2), u'' = 2500 T (1 - T^2)
  ExactSolution ex;
  ex.u = [](const Point& x) { return 0.5 * (1.0 - std::tanh((0.25 - x.x()) / 0.02)); };
  ex.grad_u = [](const Point& x) -> Eigen::Vector2d {
    const double t = std::tanh((0.25 - x.x()) / 0.02);
    return Eigen::Vector2d(25.0 * (1.0 - t * t), 0.0);
  };
  ex = log_exterior(ex, Point(0.25, 0.25));
  spec.exact = ex;

  // f = -0.5 u'' + d1(1000 x1 u) = -0.5 u'' + 1000 u + 1000 x1 u'
  spec.source = SourceField::smooth([](const Point& x) {
    const double t = std::tanh((0.25 - x.x()) / 0.02);
    const double u = 0.5 * (1.0 - t);
    const double du = 25.0 * (1.0 - t * t);
    const double ddu = 2500.0 * t * (1.0 - t * t);
    return -0.5 * ddu + 1000.0 * u + 1000.0 * x.x() * du;
  });
  spec.jumps = jumps_from_exact(ex, spec.diffusion, spec.velocity);
  spec.radiation = Radiation::LogGrowth;
  spec.upwind = UpwindKind::Steered;
  return spec;
}

ProblemSpec lshape_practical_problem() {
  ProblemSpec spec;
  spec.name = "lshape_practical";
  spec.domain = DomainDescriptor::lshape(0.25);
  spec.diffusion = CoefficientField::piecewise_constant([](const Point& x) -> Eigen::Matrix2d {
    double alpha = 5e-7;
    if (x.y() <= 0.0) alpha = 1e-7;
    else if (x.x() > 0.0) alpha = 1e-6;
    return alpha * Eigen::Matrix2d::Identity();
  });
  spec.velocity.b = [](const Point&) { return Eigen::Vector2d(15.0, 10.0); };
  spec.velocity.divergence = [](const Point&) { return 0.0; };
  spec.reaction = [](const Point&) { return 1e-2; };
  spec.source = SourceField::rectangle_indicator(Point(-0.2, -0.2), Point(-0.1, -0.05), 5.0);
  spec.jumps.u0 = [](const Point&) { return 0.0; };
  spec.jumps.t0 = [](const Point&, const Eigen::Vector2d&) { return 0.0; };
  spec.radiation = Radiation::ConstantAtInfinity;
  spec.upwind = UpwindKind::Full;
  return spec;
}

ProblemSpec builtin_problem(const std::string& name) {
  if (name == "mexican_hat") return mexican_hat_problem(160.0);
  if (name == "mexican_hat_165") return mexican_hat_problem(165.0);
  if (name == "tanh_convection") return tanh_convection_problem();
  if (name == "lshape_practical") return lshape_practical_problem();
  throw ModelError("unknown built-in problem '" + name + "'");
}

}  // namespace fvbem
