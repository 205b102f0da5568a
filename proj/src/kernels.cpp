#include "subdiff/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "subdiff/errors.hpp"

namespace subdiff {

KernelRow complementary_kernels(const std::vector<CoeffRow>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 1) {
    throw ValidationError("complementary_kernels: need at least one CoeffRow");
  }
  for (int k = 1; k <= n; ++k) {
    if (rows[k - 1].n != k || static_cast<int>(rows[k - 1].c.size()) != k) {
      throw ValidationError("complementary_kernels: rows[" +
                            std::to_string(k - 1) +
                            "] is not the CoeffRow of step " +
                            std::to_string(k));
    }
  }

  KernelRow out;
  out.n = n;
  out.P.assign(static_cast<std::size_t>(n), 0.0);

  // Identity at m = n involves only P_0; each smaller m adds one unknown.
  out.P[0] = 1.0 / rows[n - 1].c[0];
  for (int m = n - 1; m >= 1; --m) {
    double acc = 0.0;
    for (int k = m + 1; k <= n; ++k) {
      acc += out.P[n - k] * rows[k - 1].c[k - m];
    }
    out.P[n - m] = (1.0 - acc) / rows[m - 1].c[0];
  }

  for (int m = 1; m <= n; ++m) {
    double s = 0.0;
    for (int k = m; k <= n; ++k) {
      s += out.P[n - k] * rows[k - 1].c[k - m];
    }
    const double res = std::fabs(s - 1.0);
    if (res > out.max_residual) out.max_residual = res;
  }
  if (!(out.max_residual <= 1e-8)) {
    throw NumericalError("complementary_kernels: identity residual " +
                         std::to_string(out.max_residual) + " at n = " +
                         std::to_string(n));
  }
  return out;
}

}  // namespace subdiff
