#include "fvbem/postprocess.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "fvbem/dual_mesh.hpp"
#include "fvbem/parallel.hpp"

namespace fvbem {

namespace {

template <class F>
double integrate_squared(const PrimalMesh& mesh, F&& defect) {
  const TriangleRule& rule = triangle_rule_degree5();
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point& a = mesh.nodes()[tri[0]];
    const Point& b = mesh.nodes()[tri[1]];
    const Point& c = mesh.nodes()[tri[2]];
    double local = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& bc = rule.barycentric[q];
      local += rule.weights[q] * defect(t, bc, Point(bc[0] * a + bc[1] * b + bc[2] * c));
    }
    sum += local * mesh.area(t);
  }
  return std::sqrt(sum);
}

std::string format(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", *v);
  return buf;
}

}  // namespace

double error_h1_semi(const PrimalMesh& mesh, const Eigen::VectorXd& u_h,
                     const VectorFunction& grad_u) {
  if (!grad_u) throw std::invalid_argument("error_h1_semi: exact gradient missing");
  if (u_h.size() != mesh.num_nodes()) throw std::invalid_argument("error_h1_semi: size mismatch");
  return integrate_squared(mesh, [&](int t, const std::array<double, 3>&, const Point& x) {
    const auto grads = mesh.hat_gradients(t);
    const auto& tri = mesh.triangles()[t];
    Eigen::Vector2d gh = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) gh += u_h[tri[k]] * grads[k];
    return (grad_u(x) - gh).squaredNorm();
  });
}

double error_l2(const PrimalMesh& mesh, const Eigen::VectorXd& u_h, const ScalarFunction& u) {
  if (!u) throw std::invalid_argument("error_l2: exact solution missing");
  if (u_h.size() != mesh.num_nodes()) throw std::invalid_argument("error_l2: size mismatch");
  return integrate_squared(mesh, [&](int t, const std::array<double, 3>& bc, const Point& x) {
    const auto& tri = mesh.triangles()[t];
    const double uh = bc[0] * u_h[tri[0]] + bc[1] * u_h[tri[1]] + bc[2] * u_h[tri[2]];
    const double d = u(x) - uh;
    return d * d;
  });
}

double eval_interior(const PrimalMesh& mesh, const Eigen::VectorXd& u_h, const Point& x) {
  const int t = mesh.locate(x);
  if (t < 0) throw std::invalid_argument("eval_interior: point outside the mesh");
  const auto bc = barycentric(mesh, t, x);
  const auto& tri = mesh.triangles()[t];
  return bc[0] * u_h[tri[0]] + bc[1] * u_h[tri[1]] + bc[2] * u_h[tri[2]];
}

Eigen::VectorXd project_p0(const BoundaryCurve& curve, const BoundaryFunction& phi) {
  const LineRule& gauss = gauss_legendre(8);
  Eigen::VectorXd out(curve.size());
  for (int e = 0; e < curve.size(); ++e) {
    const Eigen::Vector2d n = curve.normal(e);
    double mean = 0.0;
    for (std::size_t q = 0; q < gauss.nodes.size(); ++q)
      mean += gauss.weights[q] * phi(curve.start(e) + gauss.nodes[q] * (curve.end(e) - curve.start(e)), n);
    out[e] = mean;
  }
  return out;
}

double error_vnorm(const BoundaryCurve& curve, const Eigen::VectorXd& phi_h,
                   const BoundaryFunction& phi, int refine, const Eigen::MatrixXd* fine_V) {
  if (!phi) throw std::invalid_argument("error_vnorm: exact density missing");
  if (phi_h.size() != curve.size()) throw std::invalid_argument("error_vnorm: size mismatch");
  const BoundaryCurve fine = curve.subdivide(refine);
  Eigen::MatrixXd local;
  if (!fine_V) {
    local = assemble_V(fine);
    fine_V = &local;
  }
  if (fine_V->rows() != fine.size()) throw std::invalid_argument("error_vnorm: fine V mismatch");
  Eigen::VectorXd d = project_p0(fine, phi);
  for (int e = 0; e < curve.size(); ++e)
    for (int p = 0; p < refine; ++p) d[e * refine + p] -= phi_h[e];
  return std::sqrt(std::max(0.0, d.dot(*fine_V * d)));
}

Point Grid::point(int i, int j) const {
  const double sx = nx > 1 ? static_cast<double>(i) / (nx - 1) : 0.5;
  const double sy = ny > 1 ? static_cast<double>(j) / (ny - 1) : 0.5;
  return {lower.x() + sx * (upper.x() - lower.x()), lower.y() + sy * (upper.y() - lower.y())};
}

std::vector<FieldSample> eval_exterior_grid(const PrimalMesh& mesh, const BoundaryCurve& curve,
                                            const Eigen::VectorXd& u_h,
                                            const Eigen::VectorXd& phi_h,
                                            const Eigen::VectorXd& w, double a_inf,
                                            const Grid& grid) {
  std::vector<FieldSample> samples(static_cast<std::size_t>(grid.nx) * grid.ny);
  const PointLocator locator(mesh);
  parallel_for(grid.ny, [&](int j) {
    for (int i = 0; i < grid.nx; ++i) {
      FieldSample& s = samples[static_cast<std::size_t>(j) * grid.nx + i];
      s.x = grid.point(i, j);
      if (curve.locate(s.x).first >= 0) {
        s.region = SampleRegion::Boundary;
        s.value = eval_trace_with_angle(curve, phi_h, w, a_inf, s.x);
      } else if (point_in_polygon(curve.vertices(), s.x)) {
        s.region = SampleRegion::Interior;
        const int t = locator.locate(s.x);
        if (t < 0) {
          s.value = std::nan("");
        } else {
          const auto bc = barycentric(mesh, t, s.x);
          const auto& tri = mesh.triangles()[t];
          s.value = bc[0] * u_h[tri[0]] + bc[1] * u_h[tri[1]] + bc[2] * u_h[tri[2]];
        }
      } else {
        s.region = SampleRegion::Exterior;
        s.value = eval_representation(curve, phi_h, w, a_inf, s.x);
      }
    }
  });
  return samples;
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors,
                                       const std::vector<double>& counts) {
  if (errors.size() != counts.size()) throw std::invalid_argument("eoc: size mismatch");
  if (errors.size() < 2) throw std::invalid_argument("eoc: need at least two levels");
  std::vector<std::optional<double>> slopes;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double e0 = errors[k], e1 = errors[k + 1];
    if (!(e0 > 0.0) || !(e1 > 0.0) || !std::isfinite(e0) || !std::isfinite(e1)) {
      slopes.emplace_back();
      continue;
    }
    slopes.emplace_back(std::log(e0 / e1) / std::log(counts[k + 1] / counts[k]));
  }
  return slopes;
}

void write_error_table(std::ostream& out, const ErrorReport& report) {
  const auto& lv = report.levels;
  auto column_eoc = [&](auto member) {
    std::vector<std::optional<double>> slopes(lv.size());
    for (std::size_t k = 1; k < lv.size(); ++k) {
      const auto& a = lv[k - 1].*member;
      const auto& b = lv[k].*member;
      if (!a || !b) continue;
      slopes[k] = eoc({*a, *b}, {double(lv[k - 1].triangles), double(lv[k].triangles)})[0];
    }
    return slopes;
  };
  const auto eoc_h1 = column_eoc(&LevelErrors::e_h1);
  const auto eoc_l2 = column_eoc(&LevelErrors::e_l2);
  const auto eoc_v = column_eoc(&LevelErrors::e_v);
  out << "N,h,e_H1semi,e_L2,e_Vnorm,eoc_H1,eoc_L2,eoc_V,level,nodes,edges,max_abs_u,a_inf,"
         "P_defect\n";
  for (std::size_t k = 0; k < lv.size(); ++k) {
    const auto& l = lv[k];
    out << l.triangles << ',' << format(l.h) << ',' << format(l.e_h1) << ',' << format(l.e_l2)
        << ',' << format(l.e_v) << ',' << format(eoc_h1[k]) << ',' << format(eoc_l2[k]) << ','
        << format(eoc_v[k]) << ',' << l.level << ',' << l.nodes << ',' << l.boundary_edges << ','
        << format(l.max_abs_u) << ',' << format(l.a_inf) << ',' << format(l.p_defect) << '\n';
  }
}

void write_field(std::ostream& out, const std::vector<FieldSample>& samples) {
  out << "x,y,value,region\n";
  for (const auto& s : samples) {
    const char* region = s.region == SampleRegion::Exterior   ? "exterior"
                         : s.region == SampleRegion::Boundary ? "boundary"
                                                              : "interior";
    out << format(s.x.x()) << ',' << format(s.x.y()) << ',' << format(s.value) << ',' << region
        << '\n';
  }
}

}  // namespace fvbem
