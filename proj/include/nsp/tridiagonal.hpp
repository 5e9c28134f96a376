#pragma once

#include <cstddef>
#include <vector>

namespace nsp {

/// Thomas algorithm for a tridiagonal system. `sub[i]`, `diag[i]`, `sup[i]`
/// are the coefficients of row i (sub[0] and sup[n-1] unused); rhs is
/// overwritten with the solution. No pivoting; intended for the diagonally
/// dominant viscous operator rows.
inline void solve_tridiagonal(const std::vector<double>& sub, std::vector<double>& diag,
                              const std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
    }
}

} // namespace nsp
