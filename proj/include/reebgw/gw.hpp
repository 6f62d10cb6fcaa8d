#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reebgw/metrics.hpp"
#include "reebgw/ot.hpp"
#include "reebgw/pimage.hpp"

namespace reebgw {

struct Coupling {
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
    Matrix values;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
};

enum class InnerSolver { ConditionalGradientExact, Entropic };

struct SolverOpts {
    double tol = 1e-9;
    std::size_t max_iter = 1000;
    std::size_t restarts = 1;
    std::uint64_t seed = 0;
    InnerSolver solver = InnerSolver::ConditionalGradientExact;
    double epsilon_reg = 1e-2;
    int threads = 1;
    double marginal_tol = 1e-9;
};

struct GWResult {
    double distance = 0.0;
    Coupling plan;
    std::vector<double> objective_trace; // rooted distances, per CG iteration
    std::size_t restarts_used = 0;
    bool converged = false;
};

/// Exact evaluation of the coupling-weighted distance-distortion sum,
/// then the 1/p root. For p = 2 a quadratic-loss factorization is used;
/// it matches the direct contraction to 1e-10 (asserted in tests).
double gw_objective(const DistanceMatrix& d1, const DistanceMatrix& d2,
                    const Coupling& plan, double p);

/// Conditional-gradient solve of the RGW objective: product-coupling init,
/// exact inner transport on the gradient (Sinkhorn in entropic mode),
/// closed-form quadratic step for p = 2 and golden-section otherwise.
/// Deterministic given (opts, seed); additional restarts start from seeded
/// random couplings and the best objective wins.
GWResult solve_rgw(const DistanceMatrix& d1, const DistanceMatrix& d2,
                   const NodeMeasure& mu1, const NodeMeasure& mu2, double p,
                   const SolverOpts& opts = {});

/// CSV of the plan with row/col node ids.
std::string plan_heatmap_export(const GWResult& result);
Coupling plan_from_csv(const std::string& bytes);

} // namespace reebgw
