#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace subdiff {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed sparse rows; columns sorted and deduplicated within each row.
struct SparseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<int> offsets;
  std::vector<int> cols;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(cols.size()); }
};

struct CGReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

SparseMatrix csr_from_triplets(const std::vector<Triplet>& triplets, int nrows,
                               int ncols);

Eigen::VectorXd spmv(const SparseMatrix& A, const Eigen::VectorXd& x);

// a*A + b*B; A and B must share the exact sparsity pattern. The time stepper
// rebuilds its left-hand side every step from the mass and stiffness values,
// so the combination avoids re-running symbolic assembly.
SparseMatrix csr_combine(double a, const SparseMatrix& A, double b,
                         const SparseMatrix& B);

// Symmetric restriction to the given (strictly increasing) index set.
SparseMatrix submatrix(const SparseMatrix& A, const std::vector<int>& keep);

// Jacobi-preconditioned conjugate gradients for SPD systems. A solve is
// accepted only after the residual has been recomputed from b - A x with a
// fresh product; the recurrence residual alone never terminates it. x0 seeds
// the iteration when provided. max_iter <= 0 selects 10 * dimension.
std::pair<Eigen::VectorXd, CGReport> cg_solve(const SparseMatrix& A,
                                              const Eigen::VectorXd& b,
                                              double tol = 1e-11,
                                              int max_iter = 0,
                                              const Eigen::VectorXd* x0 =
                                                  nullptr);

}  // namespace subdiff
