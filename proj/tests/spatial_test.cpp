#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "subdiff/errors.hpp"
#include "subdiff/fem2d.hpp"
#include "subdiff/sparse.hpp"

using namespace subdiff;

TEST_SUITE_BEGIN("spatial");

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

Eigen::MatrixXd dense(const SparseMatrix& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.nrows, A.ncols);
  for (int i = 0; i < A.nrows; ++i) {
    for (int k = A.offsets[i]; k < A.offsets[i + 1]; ++k) {
      D(i, A.cols[k]) += A.values[k];
    }
  }
  return D;
}

double signed_area(const TriMesh& mesh, int cell) {
  const auto& t = mesh.triangles[cell];
  const Eigen::Vector2d e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
  const Eigen::Vector2d e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

}  // namespace

TEST_CASE("csr: duplicates sum and layout is canonical") {
  const SparseMatrix A = csr_from_triplets({{0, 0, 1.0}, {0, 0, 2.0}}, 1, 1);
  REQUIRE(A.nnz() == 1);
  CHECK(A.values[0] == 3.0);
  CHECK(A.cols[0] == 0);

  const SparseMatrix Z = csr_from_triplets({}, 3, 2);
  CHECK(Z.nnz() == 0);
  CHECK(Z.offsets == std::vector<int>{0, 0, 0, 0});

  const SparseMatrix L = csr_from_triplets({{1, 0, 5.0}, {0, 1, 7.0}}, 2, 2);
  CHECK(L.values == std::vector<double>{7.0, 5.0});
  CHECK(L.offsets == std::vector<int>{0, 1, 2});
  CHECK(L.cols == std::vector<int>{1, 0});

  CHECK_THROWS_AS(csr_from_triplets({{2, 0, 1.0}}, 2, 2), ValidationError);
  CHECK_THROWS_AS(csr_from_triplets({{0, -1, 1.0}}, 2, 2), ValidationError);
}

TEST_CASE("csr: rows with many shuffled duplicates") {
  std::mt19937 gen(91);
  std::vector<Triplet> triplets;
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(4, 5);
  std::uniform_int_distribution<int> row(0, 3);
  std::uniform_int_distribution<int> col(0, 4);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const Triplet t{row(gen), col(gen), val(gen)};
    triplets.push_back(t);
    expect(t.row, t.col) += t.value;
  }
  const SparseMatrix A = csr_from_triplets(triplets, 4, 5);
  CHECK((dense(A) - expect).cwiseAbs().maxCoeff() <= 1e-13);
  for (int i = 0; i < A.nrows; ++i) {
    for (int k = A.offsets[i] + 1; k < A.offsets[i + 1]; ++k) {
      CHECK(A.cols[k - 1] < A.cols[k]);
    }
  }
}

TEST_CASE("spmv: identity, zero and a 2x2 example") {
  const SparseMatrix I =
      csr_from_triplets({{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}, 3, 3);
  Eigen::VectorXd x(3);
  x << 1.5, -2.0, 0.25;
  CHECK((spmv(I, x) - x).norm() == 0.0);

  const SparseMatrix Z = csr_from_triplets({}, 3, 3);
  CHECK(spmv(Z, x).norm() == 0.0);

  const SparseMatrix A = csr_from_triplets(
      {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}}, 2, 2);
  Eigen::VectorXd v(2);
  v << 1.0, 2.0;
  const Eigen::VectorXd y = spmv(A, v);
  CHECK(y[0] == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(7.0).epsilon(1e-15));

  Eigen::VectorXd bad(3);
  bad.setZero();
  CHECK_THROWS_AS(spmv(A, bad), ValidationError);
}

TEST_CASE("csr combine and submatrix") {
  const SparseMatrix A = csr_from_triplets(
      {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}}, 2, 2);
  const SparseMatrix B = csr_from_triplets(
      {{0, 0, 1.0}, {0, 1, -2.0}, {1, 0, -2.0}, {1, 1, 5.0}}, 2, 2);
  const SparseMatrix C = csr_combine(2.0, A, -1.0, B);
  Eigen::MatrixXd expect(2, 2);
  expect << 7.0, 4.0, 4.0, 1.0;
  CHECK((dense(C) - expect).cwiseAbs().maxCoeff() <= 1e-15);

  const SparseMatrix P = csr_from_triplets({{0, 0, 1.0}, {1, 1, 1.0}}, 2, 2);
  CHECK_THROWS_AS(csr_combine(1.0, A, 1.0, P), ValidationError);

  const SparseMatrix big = csr_from_triplets(
      {{0, 0, 1.0}, {0, 2, 2.0}, {1, 1, 3.0}, {2, 0, 4.0}, {2, 2, 5.0}}, 3,
      3);
  const SparseMatrix S = submatrix(big, {0, 2});
  Eigen::MatrixXd sexpect(2, 2);
  sexpect << 1.0, 2.0, 4.0, 5.0;
  CHECK((dense(S) - sexpect).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(submatrix(big, {2, 0}), ValidationError);
  CHECK_THROWS_AS(submatrix(big, {0, 3}), ValidationError);
}

TEST_CASE("cg: identity solves in at most one iteration") {
  const SparseMatrix I =
      csr_from_triplets({{0, 0, 1.0}, {1, 1, 1.0}}, 2, 2);
  Eigen::VectorXd b(2);
  b << 3.0, -4.0;
  const auto [x, report] = cg_solve(I, b);
  CHECK(report.converged);
  CHECK(report.iterations <= 1);
  CHECK((x - b).norm() <= 1e-12);
}

TEST_CASE("cg: 2x2 system against the hand inverse") {
  const SparseMatrix A = csr_from_triplets(
      {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}}, 2, 2);
  Eigen::VectorXd b(2);
  b << 1.0, 2.0;
  const auto [x, report] = cg_solve(A, b);
  CHECK(report.converged);
  CHECK(report.relative_residual <= 1e-11);
  CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
  CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-10));
}

TEST_CASE("cg: stiffness system converges within the dof count") {
  const TriMesh mesh = build_unit_square_mesh(8);
  const FESpace space = build_fe_space(mesh, 1);
  const QuadratureRule quad = triangle_quadrature(4);
  const SparseMatrix A_full =
      assemble_stiffness(space, DiffusionTensor::scaled_identity(1.0), quad);
  const SparseMatrix M_full = assemble_mass(space, quad);
  const Eigen::VectorXd ones =
      Eigen::VectorXd::Ones(space.dof_count());
  const Eigen::VectorXd b =
      restrict_interior(space, spmv(M_full, ones));
  const SparseMatrix A = submatrix(A_full, space.interior);

  const auto [x, report] = cg_solve(A, b);
  CHECK(report.converged);
  CHECK(report.iterations <= static_cast<int>(space.interior.size()));
  CHECK((b - spmv(A, x)).norm() <= 1e-11 * b.norm());

  const auto [x2, warm] = cg_solve(A, b, 1e-11, 0, &x);
  CHECK(warm.converged);
  CHECK(warm.iterations == 0);
  CHECK((x2 - x).norm() == 0.0);
}

TEST_CASE("cg: failure modes raise typed errors") {
  const SparseMatrix D = csr_from_triplets({{0, 0, 0.0}, {1, 1, 1.0}}, 2, 2);
  Eigen::VectorXd b(2);
  b << 1.0, 1.0;
  CHECK_THROWS_AS(cg_solve(D, b), ValidationError);

  const SparseMatrix A = csr_from_triplets(
      {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}}, 2, 2);
  CHECK_THROWS_AS(cg_solve(A, b, 1e-15, 1), NumericalError);

  Eigen::VectorXd wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(cg_solve(A, wrong), ValidationError);
}

TEST_CASE("mesh: unit square counts, orientation and areas") {
  const TriMesh one = build_unit_square_mesh(1);
  REQUIRE(one.vertices.size() == 4);
  REQUIRE(one.triangles.size() == 2);
  CHECK(signed_area(one, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(signed_area(one, 1) == doctest::Approx(0.5).epsilon(1e-15));

  const TriMesh two = build_unit_square_mesh(2);
  CHECK(two.vertices.size() == 9);
  CHECK(two.triangles.size() == 8);

  for (const int M : {1, 2, 3, 5}) {
    const TriMesh mesh = build_unit_square_mesh(M);
    double total = 0.0;
    for (size_t c = 0; c < mesh.triangles.size(); ++c) {
      const double area = signed_area(mesh, static_cast<int>(c));
      CHECK(area ==
            doctest::Approx(1.0 / (2.0 * M * M)).epsilon(1e-13));
      total += area;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(build_unit_square_mesh(0), ValidationError);
}

TEST_CASE("space: dof layout and boundary masks") {
  const TriMesh mesh2 = build_unit_square_mesh(2);
  const FESpace p1 = build_fe_space(mesh2, 1);
  CHECK(p1.dof_count() == 9);
  CHECK(p1.interior.size() == 1);
  int boundary_count = 0;
  for (bool b : p1.boundary) boundary_count += b ? 1 : 0;
  CHECK(boundary_count == 8);

  const FESpace p2 = build_fe_space(mesh2, 2);
  CHECK(p2.dof_count() == 25);
  CHECK(p2.interior.size() == 9);
  boundary_count = 0;
  for (bool b : p2.boundary) boundary_count += b ? 1 : 0;
  CHECK(boundary_count == 16);

  const FESpace small = build_fe_space(build_unit_square_mesh(1), 2);
  CHECK(small.dof_count() == 9);
  CHECK(small.interior.size() == 1);

  for (const auto& dofs : p2.cell_dofs) {
    for (int i = 0; i < 6; ++i) {
      CHECK(dofs[i] >= 0);
      CHECK(dofs[i] < p2.dof_count());
    }
  }
  for (int d = 0; d < p2.dof_count(); ++d) {
    const auto& c = p2.dof_coords[d];
    const bool on_edge = c.x() == 0.0 || c.y() == 0.0 || c.x() == 1.0 ||
                         c.y() == 1.0;
    CHECK(p2.boundary[d] == on_edge);
  }
  CHECK_THROWS_AS(build_fe_space(mesh2, 3), ValidationError);
  CHECK_THROWS_AS(build_fe_space(mesh2, 0), ValidationError);
}

TEST_CASE("quadrature: monomial exactness on the reference triangle") {
  for (const int degree : {2, 4, 6}) {
    const QuadratureRule rule = triangle_quadrature(degree);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(0.5).epsilon(1e-15));
    for (int p = 0; p + 0 <= degree; ++p) {
      for (int q = 0; p + q <= degree; ++q) {
        double approx = 0.0;
        for (size_t k = 0; k < rule.points.size(); ++k) {
          const double x = rule.points[k][1];
          const double y = rule.points[k][2];
          approx += rule.weights[k] * std::pow(x, p) * std::pow(y, q);
        }
        const double exact =
            factorial(p) * factorial(q) / factorial(p + q + 2);
        CAPTURE(degree);
        CAPTURE(p);
        CAPTURE(q);
        CHECK(std::abs(approx - exact) <= 1e-14);
      }
    }
  }
  CHECK_THROWS_AS(triangle_quadrature(3), ValidationError);
  CHECK_THROWS_AS(triangle_quadrature(8), ValidationError);
}

TEST_CASE("element matrices: closed forms") {
  const std::array<Eigen::Vector2d, 3> tri{Eigen::Vector2d(0.2, 0.1),
                                           Eigen::Vector2d(0.9, 0.3),
                                           Eigen::Vector2d(0.4, 0.8)};
  const Eigen::Vector2d e1 = tri[1] - tri[0];
  const Eigen::Vector2d e2 = tri[2] - tri[0];
  const double area = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
  const Eigen::MatrixXd m =
      element_mass(tri, 1, triangle_quadrature(2));
  Eigen::Matrix3d expect;
  expect << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  expect *= area / 12.0;
  CHECK((m - expect).cwiseAbs().maxCoeff() <= 1e-15);

  const std::array<Eigen::Vector2d, 3> unit{Eigen::Vector2d(0.0, 0.0),
                                            Eigen::Vector2d(1.0, 0.0),
                                            Eigen::Vector2d(0.0, 1.0)};
  const Eigen::MatrixXd a = element_stiffness(
      unit, DiffusionTensor::scaled_identity(1.0), 1, triangle_quadrature(2));
  Eigen::Matrix3d sexpect;
  sexpect << 2, -1, -1, -1, 1, 0, -1, 0, 1;
  sexpect *= 0.5;
  CHECK((a - sexpect).cwiseAbs().maxCoeff() <= 1e-15);

  const Eigen::MatrixXd scaled = element_stiffness(
      unit, DiffusionTensor::scaled_identity(0.001), 1,
      triangle_quadrature(2));
  CHECK((scaled - 0.001 * a).cwiseAbs().maxCoeff() <= 1e-17);

  const std::array<Eigen::Vector2d, 3> flipped{tri[0], tri[2], tri[1]};
  CHECK_THROWS_AS(element_mass(flipped, 1, triangle_quadrature(2)),
                  ValidationError);
  CHECK_THROWS_AS(element_mass(tri, 2, triangle_quadrature(2)),
                  ValidationError);
}

TEST_CASE("assembly: mass matrix partition of unity, symmetry, SPD") {
  for (const int p : {1, 2}) {
    const TriMesh mesh = build_unit_square_mesh(4);
    const FESpace space = build_fe_space(mesh, p);
    const QuadratureRule quad = triangle_quadrature(p == 1 ? 2 : 4);
    const SparseMatrix M = assemble_mass(space, quad);

    double total = 0.0;
    for (double v : M.values) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

    const Eigen::MatrixXd D = dense(M);
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-15);

    std::mt19937 gen(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd x(space.dof_count());
      for (int i = 0; i < x.size(); ++i) x[i] = unit(gen);
      CHECK(x.dot(spmv(M, x)) > 0.0);
    }
  }
}

TEST_CASE("assembly: stiffness row sums, symmetry, interior definiteness") {
  const TriMesh mesh = build_unit_square_mesh(4);
  for (const int p : {1, 2}) {
    const FESpace space = build_fe_space(mesh, p);
    const QuadratureRule quad = triangle_quadrature(4);
    const DiffusionTensor K{[](double x, double y) {
      return (Eigen::Matrix2d() << 1.0 + 0.5 * x, 0.25 * x * y, 0.25 * x * y,
              1.0 + 0.5 * y)
          .finished();
    }};
    const SparseMatrix A = assemble_stiffness(space, K, quad);

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(space.dof_count());
    CHECK(spmv(A, ones).cwiseAbs().maxCoeff() <= 1e-12);

    const Eigen::MatrixXd D = dense(A);
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() <= 1e-13);

    const SparseMatrix Ai = submatrix(A, space.interior);
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd x(Ai.nrows);
      for (int i = 0; i < x.size(); ++i) x[i] = unit(gen);
      CHECK(x.dot(spmv(Ai, x)) > 0.0);
    }
  }

  const DiffusionTensor bad{[](double, double) {
    return (Eigen::Matrix2d() << 1.0, 2.0, 2.0, 1.0).finished();
  }};
  const FESpace space = build_fe_space(mesh, 1);
  CHECK_THROWS_AS(assemble_stiffness(space, bad, triangle_quadrature(4)),
                  ValidationError);
}

TEST_CASE("assembly: load vector basics and mass-column identity") {
  const TriMesh mesh = build_unit_square_mesh(2);
  const FESpace space = build_fe_space(mesh, 2);
  const QuadratureRule quad = triangle_quadrature(4);

  const Eigen::VectorXd ones_load =
      assemble_functional(space, [](double, double) { return 1.0; }, quad);
  CHECK(ones_load.sum() == doctest::Approx(1.0).epsilon(1e-14));

  const Eigen::VectorXd zero_load =
      assemble_functional(space, [](double, double) { return 0.0; }, quad);
  CHECK(zero_load.norm() == 0.0);

  const SparseMatrix M = assemble_mass(space, quad);
  const Eigen::MatrixXd D = dense(M);
  for (const int j : {0, 7, 12, 18}) {
    Eigen::VectorXd ej = Eigen::VectorXd::Zero(space.dof_count());
    ej[j] = 1.0;
    const Eigen::VectorXd load = assemble_functional(
        space,
        [&](double x, double y) { return eval_fe(space, ej, x, y); }, quad);
    CHECK((load - D.col(j)).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("point evaluation: nodal bases and exact gradients") {
  const TriMesh mesh = build_unit_square_mesh(3);
  for (const int p : {1, 2}) {
    const FESpace space = build_fe_space(mesh, p);
    Eigen::VectorXd ej = Eigen::VectorXd::Zero(space.dof_count());
    const int j = space.interior[space.interior.size() / 2];
    ej[j] = 1.0;
    for (int d = 0; d < space.dof_count(); ++d) {
      const double v =
          eval_fe(space, ej, space.dof_coords[d].x(), space.dof_coords[d].y());
      CHECK(v == doctest::Approx(d == j ? 1.0 : 0.0).epsilon(1e-12));
    }

    Eigen::VectorXd linear(space.dof_count());
    for (int d = 0; d < space.dof_count(); ++d) {
      linear[d] = space.dof_coords[d].x() + 2.0 * space.dof_coords[d].y();
    }
    const Eigen::Vector2d g = eval_fe_grad(space, linear, 0.37, 0.61);
    CHECK(g.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.y() == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("errors: analytic norms and in-space reproduction") {
  const TriMesh mesh = build_unit_square_mesh(32);
  const QuadratureRule quad6 = triangle_quadrature(6);
  const FESpace space = build_fe_space(mesh, 1);
  const FEFunction zero{Eigen::VectorXd::Zero(space.dof_count())};
  CHECK(l2_error(space, zero,
                 [](double x, double y) {
                   return std::sin(kPi * x) * std::sin(kPi * y);
                 },
                 quad6) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(l2_error(space, zero,
                 [](double x, double y) {
                   return std::sin(2.0 * kPi * x) * std::sin(2.0 * kPi * y);
                 },
                 quad6) == doctest::Approx(0.5).epsilon(1e-5));

  const FESpace p2 = build_fe_space(build_unit_square_mesh(4), 2);
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(p2.dof_count());
  for (int idx : p2.interior) coeffs[idx] = unit(gen);
  const FEFunction fe{coeffs};
  const double self = l2_error(
      p2, fe, [&](double x, double y) { return eval_fe(p2, coeffs, x, y); },
      quad6);
  CHECK(self <= 1e-13);

  CHECK_THROWS_AS(l2_error(space, zero, [](double, double) { return 0.0; },
                           triangle_quadrature(4)),
                  ValidationError);
}

TEST_CASE("projection: zero field, idempotence, Galerkin orthogonality") {
  const TriMesh mesh = build_unit_square_mesh(4);
  const FESpace space = build_fe_space(mesh, 2);
  const QuadratureRule quad = triangle_quadrature(4);
  const DiffusionTensor K = DiffusionTensor::scaled_identity(1.0);
  const SparseMatrix A_full = assemble_stiffness(space, K, quad);
  const SparseMatrix A = submatrix(A_full, space.interior);

  const FEFunction zero = elliptic_projection(
      space, A, K, [](double, double) { return Eigen::Vector2d::Zero(); },
      quad);
  CHECK(zero.coeffs.norm() == 0.0);

  std::mt19937 gen(37);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(space.dof_count());
  for (int idx : space.interior) w[idx] = unit(gen);
  const FEFunction repro = elliptic_projection(
      space, A, K,
      [&](double x, double y) { return eval_fe_grad(space, w, x, y); }, quad);
  CHECK((repro.coeffs - w).cwiseAbs().maxCoeff() <= 1e-8);

  const auto grad_sine = [](double x, double y) {
    return Eigen::Vector2d(
        kPi * std::cos(kPi * x) * std::sin(kPi * y),
        kPi * std::sin(kPi * x) * std::cos(kPi * y));
  };
  const QuadratureRule quad6 = triangle_quadrature(6);
  const FEFunction proj =
      elliptic_projection(space, A, K, grad_sine, quad6);
  const Eigen::VectorXd rhs =
      assemble_flux_functional(space, K, grad_sine, quad6);
  const Eigen::VectorXd residual =
      restrict_interior(space, rhs) -
      spmv(A, restrict_interior(space, proj.coeffs));
  CHECK(residual.cwiseAbs().maxCoeff() <= 10.0 * 1e-11);
  for (int d = 0; d < space.dof_count(); ++d) {
    if (space.boundary[d]) CHECK(proj.coeffs[d] == 0.0);
  }
}

TEST_CASE("projection: L2 convergence at order p+1") {
  const auto exact = [](double x, double y) {
    return std::sin(kPi * x) * std::sin(kPi * y);
  };
  const auto grad = [](double x, double y) {
    return Eigen::Vector2d(kPi * std::cos(kPi * x) * std::sin(kPi * y),
                           kPi * std::sin(kPi * x) * std::cos(kPi * y));
  };
  const DiffusionTensor K = DiffusionTensor::scaled_identity(1.0);
  const QuadratureRule quad6 = triangle_quadrature(6);
  for (const int p : {1, 2}) {
    std::vector<double> errors;
    for (const int M : {8, 16, 32}) {
      const FESpace space = build_fe_space(build_unit_square_mesh(M), p);
      const SparseMatrix A = submatrix(
          assemble_stiffness(space, K, triangle_quadrature(4)),
          space.interior);
      const FEFunction proj =
          elliptic_projection(space, A, K, grad, quad6);
      errors.push_back(l2_error(space, proj, exact, quad6));
    }
    for (size_t k = 1; k < errors.size(); ++k) {
      const double order = std::log2(errors[k - 1] / errors[k]);
      CAPTURE(p);
      CAPTURE(k);
      CHECK(order >= p + 0.8);
      CHECK(order <= p + 1.2);
    }
  }
}

TEST_SUITE_END();
