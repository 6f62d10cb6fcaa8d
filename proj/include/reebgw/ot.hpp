#pragma once

#include <cstddef>
#include <vector>

namespace reebgw {

/// Dense row-major matrix of doubles; just enough linear algebra for the
/// transport solvers.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double operator()(std::size_t i, std::size_t j) const {
        return data[i * cols + j];
    }
    double& operator()(std::size_t i, std::size_t j) {
        return data[i * cols + j];
    }
};

/// Exact discrete optimal transport: minimizes <cost, plan> over couplings
/// of (mu, nu) by successive shortest augmenting paths with potentials.
/// Returns an extreme-point plan with marginals exact to ~1e-12.
Matrix exact_transport(const Matrix& cost, const std::vector<double>& mu,
                       const std::vector<double>& nu);

/// Entropically regularized transport (Sinkhorn in log-domain). The result
/// is rounded back onto the coupling polytope.
Matrix sinkhorn_transport(const Matrix& cost, const std::vector<double>& mu,
                          const std::vector<double>& nu, double epsilon,
                          std::size_t max_iter = 2000, double tol = 1e-10);

/// Projects a nonnegative matrix onto the coupling polytope of (mu, nu):
/// row/col scaling followed by a rank-one correction of the residuals.
Matrix round_to_marginals(const Matrix& plan, const std::vector<double>& mu,
                          const std::vector<double>& nu);

double dot(const Matrix& a, const Matrix& b);

} // namespace reebgw
