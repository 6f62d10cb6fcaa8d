#include "reebgw/gw.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "reebgw/io.hpp"
#include "reebgw/parallel.hpp"
#include "reebgw/rng.hpp"

namespace reebgw {

std::vector<double> Coupling::row_sums() const {
    std::vector<double> sums(values.rows, 0.0);
    for (std::size_t i = 0; i < values.rows; ++i)
        for (std::size_t j = 0; j < values.cols; ++j) sums[i] += values(i, j);
    return sums;
}

std::vector<double> Coupling::col_sums() const {
    std::vector<double> sums(values.cols, 0.0);
    for (std::size_t i = 0; i < values.rows; ++i)
        for (std::size_t j = 0; j < values.cols; ++j) sums[j] += values(i, j);
    return sums;
}

namespace {

Matrix as_matrix(const DistanceMatrix& d) {
    Matrix m(d.size(), d.size());
    m.data = d.values;
    return m;
}

// L(plan)[i][j] = sum_{i',j'} |d1(i,i') - d2(j,j')|^p plan(i',j').
// Quadratic-loss factorization for p = 2, direct contraction otherwise.
Matrix apply_cost_kernel(const Matrix& d1, const Matrix& d2, double p,
                         const Matrix& plan) {
    const std::size_t n = d1.rows, m = d2.rows;
    Matrix out(n, m, 0.0);
    if (p == 2.0) {
        std::vector<double> row_mass(n, 0.0), col_mass(m, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                row_mass[i] += plan(i, j);
                col_mass[j] += plan(i, j);
            }
        std::vector<double> a(n, 0.0), b(m, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                a[i] += d1(i, k) * d1(i, k) * row_mass[k];
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k)
                b[j] += d2(j, k) * d2(j, k) * col_mass[k];
        // cross term: d1 * plan * d2
        Matrix tmp(n, m, 0.0); // plan * d2
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const double pik = plan(i, k);
                if (pik == 0.0) continue;
                for (std::size_t j = 0; j < m; ++j)
                    tmp(i, j) += pik * d2(k, j);
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const double dik = d1(i, k);
                if (dik == 0.0) continue;
                for (std::size_t j = 0; j < m; ++j)
                    out(i, j) += dik * tmp(k, j);
            }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                out(i, j) = a[i] + b[j] - 2.0 * out(i, j);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < m; ++l) {
                    const double w = plan(k, l);
                    if (w == 0.0) continue;
                    acc += std::pow(std::abs(d1(i, k) - d2(j, l)), p) * w;
                }
            out(i, j) = acc;
        }
    return out;
}

double objective_raw(const Matrix& d1, const Matrix& d2, double p,
                     const Matrix& plan) {
    return dot(apply_cost_kernel(d1, d2, p, plan), plan);
}

double rooted(double raw, double p) {
    return std::pow(std::max(raw, 0.0), 1.0 / p);
}

Matrix mix(const Matrix& a, const Matrix& b, double t) {
    Matrix out = a;
    for (std::size_t k = 0; k < out.data.size(); ++k)
        out.data[k] = (1.0 - t) * a.data[k] + t * b.data[k];
    return out;
}

double golden_section(const std::function<double(double)>& f) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    double best_t = (x1 + x2) / 2.0;
    double best_f = f(best_t);
    for (double t : {0.0, 1.0})
        if (f(t) < best_f) {
            best_f = f(t);
            best_t = t;
        }
    return best_t;
}

struct RunOutput {
    Matrix plan;
    double raw = std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    bool converged = false;
};

RunOutput run_conditional_gradient(const Matrix& d1, const Matrix& d2,
                                   const std::vector<double>& mu,
                                   const std::vector<double>& nu, double p,
                                   const SolverOpts& opts, Matrix init) {
    RunOutput run;
    Matrix plan = std::move(init);
    Matrix kernel = apply_cost_kernel(d1, d2, p, plan);
    double raw = dot(kernel, plan);
    run.trace.push_back(rooted(raw, p));

    for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
        // gradient of the double sum is 2 L(plan) for a symmetric kernel
        Matrix grad = kernel;
        for (double& x : grad.data) x *= 2.0;

        Matrix direction =
            opts.solver == InnerSolver::ConditionalGradientExact
                ? exact_transport(grad, mu, nu)
                : sinkhorn_transport(grad, mu, nu, opts.epsilon_reg);

        double step;
        if (p == 2.0) {
            Matrix delta = direction;
            for (std::size_t k = 0; k < delta.data.size(); ++k)
                delta.data[k] -= plan.data[k];
            const Matrix kernel_delta = apply_cost_kernel(d1, d2, p, delta);
            const double a = dot(kernel_delta, delta);
            const double b = dot(kernel, delta);
            if (a > 0)
                step = std::clamp(-b / a, 0.0, 1.0);
            else
                step = (2.0 * b + a < 0) ? 1.0 : 0.0;
        } else {
            step = golden_section([&](double t) {
                return objective_raw(d1, d2, p, mix(plan, direction, t));
            });
        }

        if (step <= 0.0) {
            run.converged = true;
            break;
        }
        plan = mix(plan, direction, step);
        kernel = apply_cost_kernel(d1, d2, p, plan);
        const double next_raw = dot(kernel, plan);
        run.trace.push_back(rooted(next_raw, p));
        const double rel_change =
            std::abs(raw - next_raw) / std::max(std::abs(raw), 1e-16);
        raw = next_raw;
        if (rel_change < opts.tol) {
            run.converged = true;
            break;
        }
    }
    run.plan = std::move(plan);
    run.raw = raw;
    return run;
}

Matrix product_coupling(const std::vector<double>& mu,
                        const std::vector<double>& nu) {
    Matrix plan(mu.size(), nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j) plan(i, j) = mu[i] * nu[j];
    return plan;
}

Matrix random_coupling(const std::vector<double>& mu,
                       const std::vector<double>& nu, Rng rng) {
    Matrix plan(mu.size(), nu.size());
    for (double& x : plan.data) x = 0.5 + rng.uniform();
    // alternate scaling toward the marginals, then exact rounding
    for (int pass = 0; pass < 200; ++pass) {
        for (std::size_t i = 0; i < plan.rows; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < plan.cols; ++j) row += plan(i, j);
            const double scale = row > 0 ? mu[i] / row : 0.0;
            for (std::size_t j = 0; j < plan.cols; ++j) plan(i, j) *= scale;
        }
        for (std::size_t j = 0; j < plan.cols; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < plan.rows; ++i) col += plan(i, j);
            const double scale = col > 0 ? nu[j] / col : 0.0;
            for (std::size_t i = 0; i < plan.rows; ++i) plan(i, j) *= scale;
        }
    }
    return round_to_marginals(plan, mu, nu);
}

void check_measure_alignment(const DistanceMatrix& d, const NodeMeasure& mu,
                             const char* side) {
    if (mu.probabilities.size() != d.size())
        throw error(std::string("solve_rgw: ") + side +
                    " measure length does not match matrix");
    if (!mu.node_order.empty() && mu.node_order != d.node_order)
        throw error(std::string("solve_rgw: ") + side +
                    " measure node order does not match matrix");
}

} // namespace

double gw_objective(const DistanceMatrix& d1, const DistanceMatrix& d2,
                    const Coupling& plan, double p) {
    if (plan.values.rows != d1.size() || plan.values.cols != d2.size())
        throw error("gw_objective: plan shape does not match matrices");
    if (p < 1) throw error("gw_objective: p must be >= 1");
    double mass = 0.0;
    for (double x : plan.values.data) {
        if (x < -1e-12) throw error("gw_objective: negative plan entry");
        mass += x;
    }
    if (std::abs(mass - 1.0) > 1e-6)
        throw error("gw_objective: plan mass is not 1 (marginal violation)");

    // Direct contraction over the support of the plan. Every term is
    // non-negative, so identical spaces give exactly zero instead of the
    // cancellation noise of the factorized kernel.
    struct Entry {
        std::size_t i, j;
        double w;
    };
    std::vector<Entry> support;
    for (std::size_t i = 0; i < plan.values.rows; ++i)
        for (std::size_t j = 0; j < plan.values.cols; ++j)
            if (plan.values(i, j) > 0.0)
                support.push_back({i, j, plan.values(i, j)});

    double total = 0.0;
    for (const Entry& a : support)
        for (const Entry& b : support) {
            const double gap =
                std::abs(d1.at(a.i, b.i) - d2.at(a.j, b.j));
            total += a.w * b.w * (p == 2.0 ? gap * gap : std::pow(gap, p));
        }
    return rooted(total, p);
}

GWResult solve_rgw(const DistanceMatrix& d1, const DistanceMatrix& d2,
                   const NodeMeasure& mu1, const NodeMeasure& mu2, double p,
                   const SolverOpts& opts) {
    if (p < 1) throw error("solve_rgw: p must be >= 1");
    check_measure_alignment(d1, mu1, "row");
    check_measure_alignment(d2, mu2, "column");
    for (double x : d1.values)
        if (!std::isfinite(x)) throw error("solve_rgw: non-finite entry in d1");
    for (double x : d2.values)
        if (!std::isfinite(x)) throw error("solve_rgw: non-finite entry in d2");

    const Matrix m1 = as_matrix(d1), m2 = as_matrix(d2);
    // Inputs are normalized to total mass 1 so that rounded probability
    // vectors (e.g. values rounded to 4 decimals) remain valid couplings.
    auto normalized = [](const std::vector<double>& w, const char* side) {
        double total = 0.0;
        for (double x : w) {
            if (!(x >= 0.0))
                throw error(std::string("solve_rgw: negative mass in ") + side);
            total += x;
        }
        if (total <= 0.0)
            throw error(std::string("solve_rgw: zero total mass in ") + side);
        std::vector<double> out = w;
        for (double& x : out) x /= total;
        return out;
    };
    const std::vector<double> mu = normalized(mu1.probabilities, "row measure");
    const std::vector<double> nu =
        normalized(mu2.probabilities, "column measure");

    // Candidate starts: product coupling, the diagonal coupling when the
    // two spaces share size and measure, then seeded random couplings.
    std::vector<Matrix> starts;
    starts.push_back(product_coupling(mu, nu));
    if (mu.size() == nu.size()) {
        bool same = true;
        for (std::size_t i = 0; i < mu.size(); ++i)
            if (std::abs(mu[i] - nu[i]) > 1e-15) same = false;
        if (same) {
            Matrix diag(mu.size(), nu.size(), 0.0);
            for (std::size_t i = 0; i < mu.size(); ++i) diag(i, i) = mu[i];
            starts.push_back(std::move(diag));
        }
    }
    const Rng base(opts.seed);
    for (std::size_t k = 1; k < std::max<std::size_t>(opts.restarts, 1); ++k)
        starts.push_back(random_coupling(mu, nu, base.fork(k)));

    std::vector<RunOutput> runs(starts.size());
    parallel_for(starts.size(), opts.threads, [&](std::size_t k) {
        runs[k] = run_conditional_gradient(m1, m2, mu, nu, p, opts,
                                           std::move(starts[k]));
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < runs.size(); ++k)
        if (runs[k].raw < runs[best].raw) best = k;

    GWResult result;
    result.plan.row_ids = d1.node_order;
    result.plan.col_ids = d2.node_order;
    result.plan.values = std::move(runs[best].plan);
    result.objective_trace = std::move(runs[best].trace);
    result.restarts_used = runs.size();
    result.converged = runs[best].converged;
    result.distance = gw_objective(d1, d2, result.plan, p);
    return result;
}

std::string plan_heatmap_export(const GWResult& result) {
    std::ostringstream out;
    out << "node";
    for (const auto& id : result.plan.col_ids) out << "," << id;
    out << "\n";
    for (std::size_t i = 0; i < result.plan.values.rows; ++i) {
        out << result.plan.row_ids[i];
        for (std::size_t j = 0; j < result.plan.values.cols; ++j)
            out << "," << format_real(result.plan.values(i, j));
        out << "\n";
    }
    return out.str();
}

Coupling plan_from_csv(const std::string& bytes) {
    Coupling plan;
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line)) throw error("empty plan CSV");
    {
        std::istringstream header(line);
        std::string tok;
        std::getline(header, tok, ',');
        while (std::getline(header, tok, ',')) plan.col_ids.push_back(tok);
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        std::getline(row, tok, ',');
        plan.row_ids.push_back(tok);
        while (std::getline(row, tok, ',')) values.push_back(std::stod(tok));
    }
    plan.values = Matrix(plan.row_ids.size(), plan.col_ids.size());
    if (values.size() != plan.values.data.size())
        throw error("plan CSV shape mismatch");
    plan.values.data = std::move(values);
    return plan;
}

} // namespace reebgw
