#pragma once

#include <span>
#include <vector>

namespace dnp2d {

// Thomas algorithm for a tridiagonal system; lower/upper are the sub- and
// super-diagonals (length n-1 conceptually, passed as length n with the
// unused boundary entry ignored).  Scratch vectors are caller-owned so the
// hot loop allocates nothing.
inline void tridiag_solve(std::span<const double> lower, std::span<const double> diag,
                          std::span<const double> upper, std::span<const double> rhs,
                          std::span<double> x, std::vector<double>& cp, std::vector<double>& dp) {
  const std::size_t n = diag.size();
  cp.resize(n);
  dp.resize(n);
  cp[0] = upper[0] / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - lower[i] * cp[i - 1];
    cp[i] = upper[i] / m;
    dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / m;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
}

}  // namespace dnp2d
