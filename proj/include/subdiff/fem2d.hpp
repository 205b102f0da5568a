#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "subdiff/sparse.hpp"

namespace subdiff {

// Uniform triangulation of the unit square: M cells per direction, each grid
// square split along its lower-left to upper-right diagonal.
struct TriMesh {
  int M = 0;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;
};

TriMesh build_unit_square_mesh(int M);

// Symmetric rule on the reference triangle in barycentric coordinates;
// weights sum to the reference area 1/2. Degrees 2, 4, 6.
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

QuadratureRule triangle_quadrature(int degree);

// Continuous Lagrange space of degree p in {1, 2} with homogeneous Dirichlet
// boundary; dofs live on the (pM+1)^2 lattice.
struct FESpace {
  TriMesh mesh;
  int degree = 1;
  std::vector<Eigen::Vector2d> dof_coords;
  std::vector<std::array<int, 6>> cell_dofs;
  std::vector<bool> boundary;
  std::vector<int> interior;

  int dof_count() const { return static_cast<int>(dof_coords.size()); }
  int local_size() const { return degree == 1 ? 3 : 6; }
};

FESpace build_fe_space(const TriMesh& mesh, int p);

using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<Eigen::Vector2d(double, double)>;
using TensorField = std::function<Eigen::Matrix2d(double, double)>;

struct DiffusionTensor {
  TensorField eval;
  static DiffusionTensor scaled_identity(double c);
};

// Single-element matrices; usable standalone on an arbitrary positively
// oriented triangle.
Eigen::MatrixXd element_mass(const std::array<Eigen::Vector2d, 3>& verts,
                             int p, const QuadratureRule& quad);
Eigen::MatrixXd element_stiffness(const std::array<Eigen::Vector2d, 3>& verts,
                                  const DiffusionTensor& K, int p,
                                  const QuadratureRule& quad);

SparseMatrix assemble_mass(const FESpace& space, const QuadratureRule& quad);
SparseMatrix assemble_stiffness(const FESpace& space, const DiffusionTensor& K,
                                const QuadratureRule& quad);
Eigen::VectorXd assemble_functional(const FESpace& space, const ScalarField& g,
                                    const QuadratureRule& quad);

// entry_i = (K grad_v, grad phi_i); the projection right-hand side.
Eigen::VectorXd assemble_flux_functional(const FESpace& space,
                                         const DiffusionTensor& K,
                                         const VectorField& grad_v,
                                         const QuadratureRule& quad);

// Coefficients over all dofs with boundary entries exactly zero.
struct FEFunction {
  Eigen::VectorXd coeffs;
};

Eigen::VectorXd restrict_interior(const FESpace& space,
                                  const Eigen::VectorXd& full);
Eigen::VectorXd extend_interior(const FESpace& space,
                                const Eigen::VectorXd& inner);

// Ritz projection: (K grad(Pv), grad w_h) = (K grad v, grad w_h) for all w_h,
// the right side assembled by quadrature against the analytic gradient.
FEFunction elliptic_projection(const FESpace& space,
                               const SparseMatrix& stiffness_interior,
                               const DiffusionTensor& K,
                               const VectorField& grad_v,
                               const QuadratureRule& quad,
                               double cg_tol = 1e-11);

double l2_error(const FESpace& space, const FEFunction& fe,
                const ScalarField& exact, const QuadratureRule& quad);

double eval_fe(const FESpace& space, const Eigen::VectorXd& coeffs, double x,
               double y);
Eigen::Vector2d eval_fe_grad(const FESpace& space,
                             const Eigen::VectorXd& coeffs, double x,
                             double y);

}  // namespace subdiff
