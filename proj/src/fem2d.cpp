#include "subdiff/fem2d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "subdiff/errors.hpp"

namespace subdiff {

namespace {

void orbit3(QuadratureRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({a, a, b});
  rule.points.push_back({a, b, a});
  rule.points.push_back({b, a, a});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

void orbit6(QuadratureRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.points.push_back({a, b, c});
  rule.points.push_back({a, c, b});
  rule.points.push_back({b, a, c});
  rule.points.push_back({b, c, a});
  rule.points.push_back({c, a, b});
  rule.points.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) rule.weights.push_back(w);
}

int shape_count(int p) { return p == 1 ? 3 : 6; }

void shape_values(int p, const std::array<double, 3>& l, double* N) {
  if (p == 1) {
    N[0] = l[0];
    N[1] = l[1];
    N[2] = l[2];
    return;
  }
  N[0] = l[0] * (2.0 * l[0] - 1.0);
  N[1] = l[1] * (2.0 * l[1] - 1.0);
  N[2] = l[2] * (2.0 * l[2] - 1.0);
  N[3] = 4.0 * l[0] * l[1];
  N[4] = 4.0 * l[1] * l[2];
  N[5] = 4.0 * l[2] * l[0];
}

void shape_grads(int p, const std::array<double, 3>& l,
                 const std::array<Eigen::Vector2d, 3>& G,
                 Eigen::Vector2d* dN) {
  if (p == 1) {
    dN[0] = G[0];
    dN[1] = G[1];
    dN[2] = G[2];
    return;
  }
  dN[0] = (4.0 * l[0] - 1.0) * G[0];
  dN[1] = (4.0 * l[1] - 1.0) * G[1];
  dN[2] = (4.0 * l[2] - 1.0) * G[2];
  dN[3] = 4.0 * (l[1] * G[0] + l[0] * G[1]);
  dN[4] = 4.0 * (l[2] * G[1] + l[1] * G[2]);
  dN[5] = 4.0 * (l[0] * G[2] + l[2] * G[0]);
}

struct ElementGeometry {
  double two_area = 0.0;
  std::array<Eigen::Vector2d, 3> grad_lambda;
};

ElementGeometry element_geometry(const std::array<Eigen::Vector2d, 3>& v) {
  ElementGeometry g;
  const Eigen::Vector2d e1 = v[1] - v[0];
  const Eigen::Vector2d e2 = v[2] - v[0];
  g.two_area = e1.x() * e2.y() - e1.y() * e2.x();
  if (!(g.two_area > 0.0)) {
    throw ValidationError("element: triangle not positively oriented");
  }
  g.grad_lambda[0] =
      Eigen::Vector2d(v[1].y() - v[2].y(), v[2].x() - v[1].x()) / g.two_area;
  g.grad_lambda[1] =
      Eigen::Vector2d(v[2].y() - v[0].y(), v[0].x() - v[2].x()) / g.two_area;
  g.grad_lambda[2] =
      Eigen::Vector2d(v[0].y() - v[1].y(), v[1].x() - v[0].x()) / g.two_area;
  return g;
}

Eigen::Vector2d mapped_point(const std::array<Eigen::Vector2d, 3>& v,
                             const std::array<double, 3>& l) {
  return l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
}

void check_degree(int p, const QuadratureRule& quad) {
  if (p != 1 && p != 2) {
    throw ValidationError("element: degree must be 1 or 2, got " +
                          std::to_string(p));
  }
  if (quad.points.empty()) {
    throw ValidationError("element: empty quadrature rule");
  }
}

std::array<Eigen::Vector2d, 3> cell_vertices(const FESpace& space, int cell) {
  const auto& tri = space.mesh.triangles[cell];
  return {space.mesh.vertices[tri[0]], space.mesh.vertices[tri[1]],
          space.mesh.vertices[tri[2]]};
}

}  // namespace

TriMesh build_unit_square_mesh(int M) {
  if (M < 1) throw ValidationError("build_unit_square_mesh: M must be >= 1");
  TriMesh mesh;
  mesh.M = M;
  mesh.vertices.reserve(static_cast<size_t>(M + 1) * (M + 1));
  for (int j = 0; j <= M; ++j) {
    for (int i = 0; i <= M; ++i) {
      mesh.vertices.emplace_back(static_cast<double>(i) / M,
                                 static_cast<double>(j) / M);
    }
  }
  mesh.triangles.reserve(static_cast<size_t>(2) * M * M);
  for (int cy = 0; cy < M; ++cy) {
    for (int cx = 0; cx < M; ++cx) {
      const int v00 = cy * (M + 1) + cx;
      const int v10 = v00 + 1;
      const int v01 = v00 + (M + 1);
      const int v11 = v01 + 1;
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

QuadratureRule triangle_quadrature(int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  switch (degree) {
    case 2:
      orbit3(rule, 0.5, 1.0 / 6.0);
      break;
    case 4:
      orbit3(rule, 0.445948490915964886318, 0.111690794839005732848);
      orbit3(rule, 0.0915762135097707434596, 0.0549758718276609338192);
      break;
    case 6:
      orbit3(rule, 0.0630890144915022283403, 0.0254224531851034084605);
      orbit3(rule, 0.249286745170910421292, 0.0583931378631896830126);
      orbit6(rule, 0.310352451033784405417, 0.0531450498448169473532,
             0.0414255378091867875968);
      break;
    default:
      throw ValidationError("triangle_quadrature: degree must be 2, 4 or 6");
  }
  return rule;
}

FESpace build_fe_space(const TriMesh& mesh, int p) {
  if (p != 1 && p != 2) {
    throw ValidationError("build_fe_space: degree must be 1 or 2, got " +
                          std::to_string(p));
  }
  FESpace space;
  space.mesh = mesh;
  space.degree = p;
  const int M = mesh.M;
  const int n1 = p * M + 1;
  space.dof_coords.reserve(static_cast<size_t>(n1) * n1);
  space.boundary.reserve(static_cast<size_t>(n1) * n1);
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n1; ++i) {
      space.dof_coords.emplace_back(static_cast<double>(i) / (p * M),
                                    static_cast<double>(j) / (p * M));
      space.boundary.push_back(i == 0 || j == 0 || i == n1 - 1 ||
                               j == n1 - 1);
    }
  }
  for (int d = 0; d < static_cast<int>(space.boundary.size()); ++d) {
    if (!space.boundary[d]) space.interior.push_back(d);
  }

  auto lattice = [&](int vi, int vj) { return vj * n1 + vi; };
  space.cell_dofs.reserve(mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    std::array<int, 6> dofs{};
    std::array<int, 3> li{};
    std::array<int, 3> lj{};
    for (int c = 0; c < 3; ++c) {
      const int vi = tri[c] % (M + 1);
      const int vj = tri[c] / (M + 1);
      li[c] = p * vi;
      lj[c] = p * vj;
      dofs[c] = lattice(li[c], lj[c]);
    }
    if (p == 2) {
      dofs[3] = lattice((li[0] + li[1]) / 2, (lj[0] + lj[1]) / 2);
      dofs[4] = lattice((li[1] + li[2]) / 2, (lj[1] + lj[2]) / 2);
      dofs[5] = lattice((li[2] + li[0]) / 2, (lj[2] + lj[0]) / 2);
    }
    space.cell_dofs.push_back(dofs);
  }
  return space;
}

DiffusionTensor DiffusionTensor::scaled_identity(double c) {
  return DiffusionTensor{[c](double, double) {
    return (Eigen::Matrix2d() << c, 0.0, 0.0, c).finished();
  }};
}

Eigen::MatrixXd element_mass(const std::array<Eigen::Vector2d, 3>& verts,
                             int p, const QuadratureRule& quad) {
  check_degree(p, quad);
  if (quad.degree < 2 * p) {
    throw ValidationError("element_mass: quadrature degree " +
                          std::to_string(quad.degree) + " below " +
                          std::to_string(2 * p));
  }
  const ElementGeometry geo = element_geometry(verts);
  const int n = shape_count(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  double N[6];
  for (size_t q = 0; q < quad.points.size(); ++q) {
    shape_values(p, quad.points[q], N);
    const double scale = quad.weights[q] * geo.two_area;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) += scale * N[i] * N[j];
    }
  }
  return m;
}

Eigen::MatrixXd element_stiffness(const std::array<Eigen::Vector2d, 3>& verts,
                                  const DiffusionTensor& K, int p,
                                  const QuadratureRule& quad) {
  check_degree(p, quad);
  if (quad.degree < 2 * (p - 1)) {
    throw ValidationError("element_stiffness: quadrature degree too low");
  }
  const ElementGeometry geo = element_geometry(verts);
  const int n = shape_count(p);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::Vector2d dN[6];
  for (size_t q = 0; q < quad.points.size(); ++q) {
    const Eigen::Vector2d x = mapped_point(verts, quad.points[q]);
    const Eigen::Matrix2d Kq = K.eval(x.x(), x.y());
    const double sym_gap = std::abs(Kq(0, 1) - Kq(1, 0));
    const double tr = Kq(0, 0) + Kq(1, 1);
    const double det = Kq(0, 0) * Kq(1, 1) - Kq(0, 1) * Kq(1, 0);
    const double disc =
        std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
    const double lambda_min = 0.5 * tr - disc;
    if (sym_gap > 1e-12 * (std::abs(tr) + 1.0) || !(lambda_min > 0.0)) {
      throw ValidationError(
          "element_stiffness: diffusion tensor not symmetric positive "
          "definite at (" +
          std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")");
    }
    shape_grads(p, quad.points[q], geo.grad_lambda, dN);
    const double scale = quad.weights[q] * geo.two_area;
    for (int i = 0; i < n; ++i) {
      const Eigen::Vector2d flux = Kq * dN[i];
      for (int j = 0; j < n; ++j) a(i, j) += scale * flux.dot(dN[j]);
    }
  }
  return a;
}

SparseMatrix assemble_mass(const FESpace& space, const QuadratureRule& quad) {
  const int n = space.dof_count();
  const int local = space.local_size();
  std::vector<Triplet> triplets;
  triplets.reserve(space.cell_dofs.size() * local * local);
  for (size_t cell = 0; cell < space.cell_dofs.size(); ++cell) {
    const Eigen::MatrixXd m =
        element_mass(cell_vertices(space, static_cast<int>(cell)),
                     space.degree, quad);
    const auto& dofs = space.cell_dofs[cell];
    for (int i = 0; i < local; ++i) {
      for (int j = 0; j < local; ++j) {
        triplets.push_back({dofs[i], dofs[j], m(i, j)});
      }
    }
  }
  return csr_from_triplets(triplets, n, n);
}

SparseMatrix assemble_stiffness(const FESpace& space, const DiffusionTensor& K,
                                const QuadratureRule& quad) {
  const int n = space.dof_count();
  const int local = space.local_size();
  std::vector<Triplet> triplets;
  triplets.reserve(space.cell_dofs.size() * local * local);
  for (size_t cell = 0; cell < space.cell_dofs.size(); ++cell) {
    const Eigen::MatrixXd a =
        element_stiffness(cell_vertices(space, static_cast<int>(cell)), K,
                          space.degree, quad);
    const auto& dofs = space.cell_dofs[cell];
    for (int i = 0; i < local; ++i) {
      for (int j = 0; j < local; ++j) {
        triplets.push_back({dofs[i], dofs[j], a(i, j)});
      }
    }
  }
  return csr_from_triplets(triplets, n, n);
}

Eigen::VectorXd assemble_functional(const FESpace& space, const ScalarField& g,
                                    const QuadratureRule& quad) {
  const int local = space.local_size();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dof_count());
  double N[6];
  for (size_t cell = 0; cell < space.cell_dofs.size(); ++cell) {
    const auto verts = cell_vertices(space, static_cast<int>(cell));
    const ElementGeometry geo = element_geometry(verts);
    const auto& dofs = space.cell_dofs[cell];
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const Eigen::Vector2d x = mapped_point(verts, quad.points[q]);
      const double scale = quad.weights[q] * geo.two_area * g(x.x(), x.y());
      shape_values(space.degree, quad.points[q], N);
      for (int i = 0; i < local; ++i) b[dofs[i]] += scale * N[i];
    }
  }
  return b;
}

Eigen::VectorXd restrict_interior(const FESpace& space,
                                  const Eigen::VectorXd& full) {
  if (full.size() != space.dof_count()) {
    throw ValidationError("restrict_interior: length mismatch");
  }
  Eigen::VectorXd inner(space.interior.size());
  for (size_t j = 0; j < space.interior.size(); ++j) {
    inner[j] = full[space.interior[j]];
  }
  return inner;
}

Eigen::VectorXd extend_interior(const FESpace& space,
                                const Eigen::VectorXd& inner) {
  if (inner.size() != static_cast<int>(space.interior.size())) {
    throw ValidationError("extend_interior: length mismatch");
  }
  Eigen::VectorXd full = Eigen::VectorXd::Zero(space.dof_count());
  for (size_t j = 0; j < space.interior.size(); ++j) {
    full[space.interior[j]] = inner[j];
  }
  return full;
}

Eigen::VectorXd assemble_flux_functional(const FESpace& space,
                                         const DiffusionTensor& K,
                                         const VectorField& grad_v,
                                         const QuadratureRule& quad) {
  const int local = space.local_size();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.dof_count());
  Eigen::Vector2d dN[6];
  for (size_t cell = 0; cell < space.cell_dofs.size(); ++cell) {
    const auto verts = cell_vertices(space, static_cast<int>(cell));
    const ElementGeometry geo = element_geometry(verts);
    const auto& dofs = space.cell_dofs[cell];
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const Eigen::Vector2d x = mapped_point(verts, quad.points[q]);
      const Eigen::Vector2d flux =
          K.eval(x.x(), x.y()) * grad_v(x.x(), x.y());
      shape_grads(space.degree, quad.points[q], geo.grad_lambda, dN);
      const double scale = quad.weights[q] * geo.two_area;
      for (int i = 0; i < local; ++i) {
        rhs[dofs[i]] += scale * flux.dot(dN[i]);
      }
    }
  }
  return rhs;
}

FEFunction elliptic_projection(const FESpace& space,
                               const SparseMatrix& stiffness_interior,
                               const DiffusionTensor& K,
                               const VectorField& grad_v,
                               const QuadratureRule& quad, double cg_tol) {
  if (stiffness_interior.nrows != static_cast<int>(space.interior.size())) {
    throw ValidationError(
        "elliptic_projection: stiffness not restricted to interior dofs");
  }
  const Eigen::VectorXd rhs = assemble_flux_functional(space, K, grad_v, quad);
  const auto [inner, report] =
      cg_solve(stiffness_interior, restrict_interior(space, rhs), cg_tol);
  (void)report;
  return FEFunction{extend_interior(space, inner)};
}

double l2_error(const FESpace& space, const FEFunction& fe,
                const ScalarField& exact, const QuadratureRule& quad) {
  if (quad.degree < 6) {
    throw ValidationError("l2_error: quadrature degree must be >= 6");
  }
  if (fe.coeffs.size() != space.dof_count()) {
    throw ValidationError("l2_error: coefficient length mismatch");
  }
  const int local = space.local_size();
  double acc = 0.0;
  double N[6];
  for (size_t cell = 0; cell < space.cell_dofs.size(); ++cell) {
    const auto verts = cell_vertices(space, static_cast<int>(cell));
    const ElementGeometry geo = element_geometry(verts);
    const auto& dofs = space.cell_dofs[cell];
    for (size_t q = 0; q < quad.points.size(); ++q) {
      const Eigen::Vector2d x = mapped_point(verts, quad.points[q]);
      shape_values(space.degree, quad.points[q], N);
      double val = 0.0;
      for (int i = 0; i < local; ++i) val += fe.coeffs[dofs[i]] * N[i];
      const double diff = val - exact(x.x(), x.y());
      acc += quad.weights[q] * geo.two_area * diff * diff;
    }
  }
  return std::sqrt(acc);
}

namespace {

struct Located {
  int cell = 0;
  std::array<double, 3> lambda{};
};

Located locate(const FESpace& space, double x, double y) {
  const int M = space.mesh.M;
  const double sx = x * M;
  const double sy = y * M;
  const int cx = std::clamp(static_cast<int>(sx), 0, M - 1);
  const int cy = std::clamp(static_cast<int>(sy), 0, M - 1);
  const double xi = sx - cx;
  const double eta = sy - cy;
  Located loc;
  loc.cell = 2 * (cy * M + cx) + (xi >= eta ? 0 : 1);
  const auto& tri = space.mesh.triangles[loc.cell];
  const Eigen::Vector2d p0 = space.mesh.vertices[tri[0]];
  const Eigen::Vector2d p1 = space.mesh.vertices[tri[1]];
  const Eigen::Vector2d p2 = space.mesh.vertices[tri[2]];
  const Eigen::Vector2d e1 = p1 - p0;
  const Eigen::Vector2d e2 = p2 - p0;
  const Eigen::Vector2d d(x - p0.x(), y - p0.y());
  const double two_area = e1.x() * e2.y() - e1.y() * e2.x();
  loc.lambda[1] = (d.x() * e2.y() - d.y() * e2.x()) / two_area;
  loc.lambda[2] = (e1.x() * d.y() - e1.y() * d.x()) / two_area;
  loc.lambda[0] = 1.0 - loc.lambda[1] - loc.lambda[2];
  return loc;
}

}  // namespace

double eval_fe(const FESpace& space, const Eigen::VectorXd& coeffs, double x,
               double y) {
  if (coeffs.size() != space.dof_count()) {
    throw ValidationError("eval_fe: coefficient length mismatch");
  }
  const Located loc = locate(space, x, y);
  double N[6];
  shape_values(space.degree, loc.lambda, N);
  const auto& dofs = space.cell_dofs[loc.cell];
  double val = 0.0;
  for (int i = 0; i < space.local_size(); ++i) val += coeffs[dofs[i]] * N[i];
  return val;
}

Eigen::Vector2d eval_fe_grad(const FESpace& space,
                             const Eigen::VectorXd& coeffs, double x,
                             double y) {
  if (coeffs.size() != space.dof_count()) {
    throw ValidationError("eval_fe_grad: coefficient length mismatch");
  }
  const Located loc = locate(space, x, y);
  const auto verts = cell_vertices(space, loc.cell);
  const ElementGeometry geo = element_geometry(verts);
  Eigen::Vector2d dN[6];
  shape_grads(space.degree, loc.lambda, geo.grad_lambda, dN);
  const auto& dofs = space.cell_dofs[loc.cell];
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (int i = 0; i < space.local_size(); ++i) g += coeffs[dofs[i]] * dN[i];
  return g;
}

}  // namespace subdiff
