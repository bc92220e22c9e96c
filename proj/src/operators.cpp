#include "fujita/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fujita {

bool Tridiagonal::solve(std::span<double> rhs) const {
    const std::size_t n = size();
    if (rhs.size() != n || n == 0) {
        return false;
    }
    std::vector<double> c(n, 0.0);
    double denom = diag[0];
    if (denom == 0.0) {
        return false;
    }
    c[0] = upper[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - lower[i] * c[i - 1];
        if (denom == 0.0) {
            return false;
        }
        c[i] = (i + 1 < n) ? upper[i] / denom : 0.0;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    return true;
}

Tridiagonal laplacian_matrix(const RadialGrid& grid) {
    const std::size_t rows = grid.size() - 1;
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const int n = grid.dim();
    Tridiagonal A(rows);
    A.diag[0] = -2.0 * n * inv_h2;
    A.upper[0] = 2.0 * n * inv_h2;
    for (std::size_t i = 1; i < rows; ++i) {
        const double adv = (n - 1) / (2.0 * grid.node(i) * h);
        A.lower[i] = inv_h2 - adv;
        A.diag[i] = -2.0 * inv_h2;
        A.upper[i] = inv_h2 + adv;
    }
    return A;
}

Field laplacian(const Field& f) {
    const auto& g = f.grid();
    const std::size_t last = g.boundary_index();
    const double h = g.spacing();
    const double inv_h2 = 1.0 / (h * h);
    const int n = g.dim();
    Field out(g);
    out[0] = 2.0 * n * (f[1] - f[0]) * inv_h2;
    for (std::size_t i = 1; i < last; ++i) {
        const double frr = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv_h2;
        const double fr = (f[i + 1] - f[i - 1]) / (2.0 * h);
        out[i] = frr + (n - 1) * fr / g.node(i);
    }
    if (last >= 3) {
        const double frr = (2.0 * f[last] - 5.0 * f[last - 1] + 4.0 * f[last - 2] - f[last - 3]) * inv_h2;
        const double fr = (3.0 * f[last] - 4.0 * f[last - 1] + f[last - 2]) / (2.0 * h);
        out[last] = frr + (n - 1) * fr / g.node(last);
    } else {
        out[last] = out[last - 1];
    }
    return out;
}

Field gradient_magnitude(const Field& f) {
    const auto& g = f.grid();
    const std::size_t last = g.boundary_index();
    const double h = g.spacing();
    Field out(g);
    out[0] = 0.0;
    for (std::size_t i = 1; i < last; ++i) {
        out[i] = std::abs(f[i + 1] - f[i - 1]) / (2.0 * h);
    }
    out[last] = std::abs(3.0 * f[last] - 4.0 * f[last - 1] + f[last - 2]) / (2.0 * h);
    return out;
}

Field upwind_gradient_magnitude(const Field& f) {
    const auto& g = f.grid();
    const std::size_t last = g.boundary_index();
    const double inv_h = 1.0 / g.spacing();
    Field out(g);
    for (std::size_t i = 0; i < last; ++i) {
        const double left = (i == 0) ? f[1] : f[i - 1];
        const double forward = (f[i + 1] - f[i]) * inv_h;
        const double backward_up = (left - f[i]) * inv_h;
        out[i] = std::max({forward, backward_up, 0.0});
    }
    out[last] = std::abs(f[last] - f[last - 1]) * inv_h;
    return out;
}

Field rhs(const Field& u, const ProblemParams& params, const Field* forcing) {
    if (!u.all_finite()) {
        throw std::invalid_argument("rhs: field has non-finite values");
    }
    if (forcing != nullptr && !(forcing->grid() == u.grid())) {
        throw std::invalid_argument("rhs: forcing lives on a different grid");
    }
    Field out(u.grid());
    if (params.use_source) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            out[i] += std::pow(std::abs(u[i]), params.p);
        }
    }
    if (params.use_gradient && params.b != 0.0) {
        const Field grad = upwind_gradient_magnitude(u);
        for (std::size_t i = 0; i < u.size(); ++i) {
            out[i] += params.b * std::pow(grad[i], params.q);
        }
    }
    if (forcing != nullptr) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            out[i] += (*forcing)[i];
        }
    }
    return out;
}

Eigenpair principal_eigenpair(int n, double R, int M) {
    if (M < 100) {
        throw std::invalid_argument("principal_eigenpair: M must be >= 100");
    }
    const RadialGrid grid(n, R, M);
    Tridiagonal A = laplacian_matrix(grid);
    for (std::size_t i = 0; i < A.size(); ++i) {
        A.lower[i] = -A.lower[i];
        A.diag[i] = -A.diag[i];
        A.upper[i] = -A.upper[i];
    }

    const std::size_t rows = A.size();
    std::vector<double> x(rows, 1.0);
    auto norm2 = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double a : v) s += a * a;
        return std::sqrt(s);
    };
    double nx = norm2(x);
    for (double& a : x) a /= nx;

    constexpr int kMaxIter = 2000;
    double lambda = 0.0;
    double lambda_prev = 0.0;
    int it = 0;
    bool converged = false;
    for (it = 1; it <= kMaxIter; ++it) {
        std::vector<double> y = x;
        if (!A.solve(y)) {
            throw std::runtime_error("principal_eigenpair: singular discrete operator");
        }
        const double ny = norm2(y);
        // x has unit norm, so ||A^{-1}x|| -> 1/λ.
        lambda = 1.0 / ny;
        for (std::size_t i = 0; i < rows; ++i) x[i] = y[i] / ny;
        if (it > 3 && std::abs(lambda - lambda_prev) <= 1e-14 * lambda) {
            converged = true;
            break;
        }
        lambda_prev = lambda;
    }
    if (!converged) {
        throw std::runtime_error("principal_eigenpair: inverse iteration did not converge");
    }

    Field phi(grid);
    const double sign = (x[0] < 0.0) ? -1.0 : 1.0;
    for (std::size_t i = 0; i < rows; ++i) phi[i] = sign * x[i];
    phi[grid.boundary_index()] = 0.0;

    const double mass = integrate(phi);
    for (double& v : phi.values()) v /= mass;

    const Field lap = laplacian(phi);
    double res = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
        res = std::max(res, std::abs(lap[i] + lambda * phi[i]));
    }
    Eigenpair out{lambda, phi, R, it, res / sup_norm(phi)};
    if (!(out.residual <= 1e-6)) {
        throw std::runtime_error("principal_eigenpair: residual check failed");
    }
    return out;
}

Eigenpair principal_eigenpair_on(const RadialGrid& grid, double R) {
    const double h = grid.spacing();
    const long j = std::lround(R / h);
    if (j < 101 || static_cast<std::size_t>(j) > grid.boundary_index()) {
        throw std::invalid_argument("principal_eigenpair_on: radius outside grid or below 101 cells");
    }
    return principal_eigenpair(grid.dim(), grid.node(static_cast<std::size_t>(j)), static_cast<int>(j) - 1);
}

}  // namespace fujita
