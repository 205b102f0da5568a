#pragma once

#include <vector>

#include "subdiff/l21.hpp"

namespace subdiff {

/// Complementary discrete kernels P[j] = P_j^{(n)}, defined by
///   sum_{k=m..n} P[n-k] c_{k-m,k} = 1   for every 1 <= m <= n,
/// where c_{j,k} is the weight row of step k. max_residual records the
/// worst deviation of the identity over all m at construction time.
struct KernelRow {
  int n = 0;
  std::vector<double> P;
  double max_residual = 0.0;
};

/// Solves the defining identity by forward substitution over m = n..1.
/// rows[k-1] must hold the CoeffRow of step k for k = 1..n.
KernelRow complementary_kernels(const std::vector<CoeffRow>& rows);

}  // namespace subdiff
