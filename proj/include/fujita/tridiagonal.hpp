#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fujita {

/// Tridiagonal system: lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i].
/// lower[0] and upper[size-1] are ignored.
struct Tridiagonal {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    explicit Tridiagonal(std::size_t n) : lower(n, 0.0), diag(n, 0.0), upper(n, 0.0) {}
    std::size_t size() const { return diag.size(); }

    /// Thomas algorithm, O(n). Solves in place: rhs becomes the solution.
    /// Returns false on a zero pivot.
    bool solve(std::span<double> rhs) const;
};

}  // namespace fujita
