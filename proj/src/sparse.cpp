#include "subdiff/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "subdiff/errors.hpp"

namespace subdiff {

SparseMatrix csr_from_triplets(const std::vector<Triplet>& triplets, int nrows,
                               int ncols) {
  if (nrows < 0 || ncols < 0) {
    throw ValidationError("csr_from_triplets: negative dimension");
  }
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw ValidationError("csr_from_triplets: index (" +
                            std::to_string(t.row) + ", " +
                            std::to_string(t.col) + ") outside " +
                            std::to_string(nrows) + "x" +
                            std::to_string(ncols));
    }
  }

  SparseMatrix A;
  A.nrows = nrows;
  A.ncols = ncols;
  A.offsets.assign(static_cast<size_t>(nrows) + 1, 0);

  std::vector<int> count(nrows, 0);
  for (const Triplet& t : triplets) ++count[t.row];
  for (int i = 0; i < nrows; ++i) A.offsets[i + 1] = A.offsets[i] + count[i];

  std::vector<int> raw_cols(triplets.size());
  std::vector<double> raw_vals(triplets.size());
  std::vector<int> cursor(A.offsets.begin(), A.offsets.end() - 1);
  for (const Triplet& t : triplets) {
    const int slot = cursor[t.row]++;
    raw_cols[slot] = t.col;
    raw_vals[slot] = t.value;
  }

  A.cols.reserve(triplets.size());
  A.values.reserve(triplets.size());
  std::vector<int> order;
  int write_offset = 0;
  std::vector<int> new_offsets(static_cast<size_t>(nrows) + 1, 0);
  for (int i = 0; i < nrows; ++i) {
    const int lo = A.offsets[i];
    const int hi = A.offsets[i + 1];
    order.resize(hi - lo);
    std::iota(order.begin(), order.end(), lo);
    std::sort(order.begin(), order.end(),
              [&](int p, int q) { return raw_cols[p] < raw_cols[q]; });
    for (int idx : order) {
      if (!A.cols.empty() && static_cast<int>(A.cols.size()) > write_offset &&
          A.cols.back() == raw_cols[idx]) {
        A.values.back() += raw_vals[idx];
      } else {
        A.cols.push_back(raw_cols[idx]);
        A.values.push_back(raw_vals[idx]);
      }
    }
    new_offsets[i + 1] = static_cast<int>(A.cols.size());
    write_offset = new_offsets[i + 1];
  }
  A.offsets = std::move(new_offsets);
  return A;
}

Eigen::VectorXd spmv(const SparseMatrix& A, const Eigen::VectorXd& x) {
  if (x.size() != A.ncols) {
    throw ValidationError("spmv: vector length " + std::to_string(x.size()) +
                          " does not match " + std::to_string(A.ncols) +
                          " columns");
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(A.nrows);
  for (int i = 0; i < A.nrows; ++i) {
    double acc = 0.0;
    for (int k = A.offsets[i]; k < A.offsets[i + 1]; ++k) {
      acc += A.values[k] * x[A.cols[k]];
    }
    y[i] = acc;
  }
  return y;
}

SparseMatrix csr_combine(double a, const SparseMatrix& A, double b,
                         const SparseMatrix& B) {
  if (A.nrows != B.nrows || A.ncols != B.ncols || A.offsets != B.offsets ||
      A.cols != B.cols) {
    throw ValidationError("csr_combine: sparsity patterns differ");
  }
  SparseMatrix C = A;
  for (size_t k = 0; k < C.values.size(); ++k) {
    C.values[k] = a * A.values[k] + b * B.values[k];
  }
  return C;
}

SparseMatrix submatrix(const SparseMatrix& A, const std::vector<int>& keep) {
  std::vector<int> position(A.ncols, -1);
  int prev = -1;
  for (size_t j = 0; j < keep.size(); ++j) {
    const int idx = keep[j];
    if (idx <= prev || idx >= A.nrows || idx >= A.ncols) {
      throw ValidationError(
          "submatrix: keep indices must be strictly increasing and in range");
    }
    position[idx] = static_cast<int>(j);
    prev = idx;
  }
  SparseMatrix S;
  S.nrows = static_cast<int>(keep.size());
  S.ncols = static_cast<int>(keep.size());
  S.offsets.assign(keep.size() + 1, 0);
  for (size_t j = 0; j < keep.size(); ++j) {
    const int i = keep[j];
    for (int k = A.offsets[i]; k < A.offsets[i + 1]; ++k) {
      if (position[A.cols[k]] >= 0) {
        S.cols.push_back(position[A.cols[k]]);
        S.values.push_back(A.values[k]);
      }
    }
    S.offsets[j + 1] = static_cast<int>(S.cols.size());
  }
  return S;
}

std::pair<Eigen::VectorXd, CGReport> cg_solve(const SparseMatrix& A,
                                              const Eigen::VectorXd& b,
                                              double tol, int max_iter,
                                              const Eigen::VectorXd* x0) {
  const int n = A.nrows;
  if (A.ncols != n) throw ValidationError("cg_solve: matrix not square");
  if (b.size() != n) throw ValidationError("cg_solve: rhs length mismatch");
  if (max_iter <= 0) max_iter = 10 * std::max(n, 1);

  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) {
    double d = 0.0;
    for (int k = A.offsets[i]; k < A.offsets[i + 1]; ++k) {
      if (A.cols[k] == i) d = A.values[k];
    }
    if (!(d > 0.0)) {
      throw ValidationError("cg_solve: nonpositive diagonal at row " +
                            std::to_string(i));
    }
    diag[i] = d;
  }

  const double bnorm = b.norm();
  Eigen::VectorXd x =
      (x0 != nullptr) ? *x0 : Eigen::VectorXd::Zero(n);
  if (x0 != nullptr && x0->size() != n) {
    throw ValidationError("cg_solve: warm-start length mismatch");
  }
  if (bnorm == 0.0) {
    return {Eigen::VectorXd::Zero(n), CGReport{0, 0.0, true}};
  }

  Eigen::VectorXd r = b - spmv(A, x);
  if (r.norm() <= tol * bnorm) {
    return {x, CGReport{0, r.norm() / bnorm, true}};
  }
  Eigen::VectorXd z = r.cwiseQuotient(diag);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  CGReport report;
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd Ap = spmv(A, p);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) {
      throw NumericalError("cg_solve: matrix not positive definite (p'Ap = " +
                           std::to_string(pAp) + ")");
    }
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    report.iterations = it;
    if (r.norm() <= tol * bnorm) {
      const Eigen::VectorXd true_r = b - spmv(A, x);
      const double true_norm = true_r.norm();
      if (true_norm <= tol * bnorm) {
        report.relative_residual = true_norm / bnorm;
        report.converged = true;
        return {x, report};
      }
      r = true_r;
      z = r.cwiseQuotient(diag);
      p = z;
      rz = r.dot(z);
      continue;
    }
    z = r.cwiseQuotient(diag);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  report.relative_residual = (b - spmv(A, x)).norm() / bnorm;
  throw NumericalError("cg_solve: no convergence after " +
                       std::to_string(max_iter) +
                       " iterations, relative residual " +
                       std::to_string(report.relative_residual));
}

}  // namespace subdiff
