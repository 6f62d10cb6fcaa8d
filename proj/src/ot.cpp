#include "reebgw/ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "reebgw/graph.hpp"

namespace reebgw {

double dot(const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
    return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassEps = 1e-15;

void check_inputs(const Matrix& cost, const std::vector<double>& mu,
                  const std::vector<double>& nu) {
    if (cost.rows != mu.size() || cost.cols != nu.size())
        throw error("transport: cost shape does not match marginals");
    for (double x : cost.data)
        if (!std::isfinite(x)) throw error("transport: non-finite cost entry");
    auto mass = [](const std::vector<double>& w) {
        double total = 0.0;
        for (double x : w) {
            if (!(x >= 0.0)) throw error("transport: negative mass");
            total += x;
        }
        return total;
    };
    if (std::abs(mass(mu) - mass(nu)) > 1e-9)
        throw error("transport: marginal masses differ");
}

} // namespace

Matrix exact_transport(const Matrix& cost, const std::vector<double>& mu,
                       const std::vector<double>& nu) {
    check_inputs(cost, mu, nu);
    const std::size_t n = mu.size(), m = nu.size();
    Matrix plan(n, m, 0.0);

    std::vector<double> supply = mu, demand = nu;
    std::vector<double> pot_row(n, 0.0), pot_col(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        double best = kInf;
        for (std::size_t i = 0; i < n; ++i) best = std::min(best, cost(i, j));
        pot_col[j] = best;
    }

    // Dense Dijkstra over the bipartite residual graph; node ids are
    // rows [0, n) then columns [n, n+m).
    const std::size_t total_nodes = n + m;
    std::vector<double> dist(total_nodes);
    std::vector<std::int64_t> prev(total_nodes);
    std::vector<bool> done(total_nodes);

    const std::size_t max_rounds = 50 * (n + m) + 64;
    std::size_t rounds = 0;
    for (;;) {
        if (++rounds > max_rounds)
            throw error("transport: augmentation limit exceeded");

        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(prev.begin(), prev.end(), -1);
        std::fill(done.begin(), done.end(), false);
        bool any_source = false;
        for (std::size_t i = 0; i < n; ++i)
            if (supply[i] > kMassEps) {
                dist[i] = 0.0;
                any_source = true;
            }
        bool any_demand = false;
        for (std::size_t j = 0; j < m; ++j)
            if (demand[j] > kMassEps) any_demand = true;
        // residual masses below the threshold are rounding residue
        if (!any_source || !any_demand) break;

        std::int64_t sink = -1;
        for (;;) {
            std::size_t u = total_nodes;
            double best = kInf;
            for (std::size_t x = 0; x < total_nodes; ++x)
                if (!done[x] && dist[x] < best) {
                    best = dist[x];
                    u = x;
                }
            if (u == total_nodes) break;
            done[u] = true;
            if (u >= n && demand[u - n] > kMassEps) {
                sink = static_cast<std::int64_t>(u);
                break;
            }
            if (u < n) {
                // forward arcs row u -> every column
                for (std::size_t j = 0; j < m; ++j) {
                    const double rc = cost(u, j) - pot_row[u] - pot_col[j];
                    const double nd = dist[u] + std::max(rc, 0.0);
                    if (nd < dist[n + j]) {
                        dist[n + j] = nd;
                        prev[n + j] = static_cast<std::int64_t>(u);
                    }
                }
            } else {
                // backward arcs column -> rows with positive flow
                const std::size_t j = u - n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (plan(i, j) <= kMassEps) continue;
                    const double rc = cost(i, j) - pot_row[i] - pot_col[j];
                    const double nd = dist[u] + std::max(-rc, 0.0);
                    if (nd < dist[i]) {
                        dist[i] = nd;
                        prev[i] = static_cast<std::int64_t>(u);
                    }
                }
            }
        }
        if (sink < 0) throw error("transport: no augmenting path");

        // Update potentials.
        const double dist_sink = dist[static_cast<std::size_t>(sink)];
        for (std::size_t i = 0; i < n; ++i)
            pot_row[i] -= std::min(dist[i], dist_sink);
        for (std::size_t j = 0; j < m; ++j)
            pot_col[j] += std::min(dist[n + j], dist_sink);

        // Trace the path and find the bottleneck.
        std::vector<std::size_t> path; // node ids, sink back to source
        std::size_t node = static_cast<std::size_t>(sink);
        path.push_back(node);
        while (prev[node] >= 0) {
            node = static_cast<std::size_t>(prev[node]);
            path.push_back(node);
        }
        const std::size_t source = node;
        double amount = std::min(supply[source],
                                 demand[static_cast<std::size_t>(sink) - n]);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            const std::size_t to = path[k], from = path[k + 1];
            if (from >= n && to < n) // backward arc
                amount = std::min(amount, plan(to, from - n));
        }

        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            const std::size_t to = path[k], from = path[k + 1];
            if (from < n)
                plan(from, to - n) += amount;
            else
                plan(to, from - n) -= amount;
        }
        supply[source] -= amount;
        demand[static_cast<std::size_t>(sink) - n] -= amount;
    }
    for (double& x : plan.data)
        if (x < 0.0) x = 0.0; // subtraction residue
    return plan;
}

Matrix sinkhorn_transport(const Matrix& cost, const std::vector<double>& mu,
                          const std::vector<double>& nu, double epsilon,
                          std::size_t max_iter, double tol) {
    check_inputs(cost, mu, nu);
    if (epsilon <= 0) throw error("sinkhorn: epsilon must be positive");
    const std::size_t n = mu.size(), m = nu.size();

    // log-domain scaling; zero-mass rows/cols stay pinned at -inf
    std::vector<double> log_mu(n), log_nu(m), f(n, 0.0), g(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        log_mu[i] = mu[i] > 0 ? std::log(mu[i]) : -kInf;
    for (std::size_t j = 0; j < m; ++j)
        log_nu[j] = nu[j] > 0 ? std::log(nu[j]) : -kInf;

    auto logsumexp_row = [&](std::size_t i) {
        double mx = -kInf;
        for (std::size_t j = 0; j < m; ++j)
            mx = std::max(mx, g[j] - cost(i, j) / epsilon);
        if (mx == -kInf) return -kInf;
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            s += std::exp(g[j] - cost(i, j) / epsilon - mx);
        return mx + std::log(s);
    };
    auto logsumexp_col = [&](std::size_t j) {
        double mx = -kInf;
        for (std::size_t i = 0; i < n; ++i)
            mx = std::max(mx, f[i] - cost(i, j) / epsilon);
        if (mx == -kInf) return -kInf;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += std::exp(f[i] - cost(i, j) / epsilon - mx);
        return mx + std::log(s);
    };

    for (std::size_t it = 0; it < max_iter; ++it) {
        double shift = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double target = log_mu[i];
            const double updated =
                target == -kInf ? -kInf : target - logsumexp_row(i);
            shift = std::max(shift, std::abs(updated == -kInf && f[i] == -kInf
                                                 ? 0.0
                                                 : updated - f[i]));
            f[i] = updated;
        }
        for (std::size_t j = 0; j < m; ++j) {
            const double target = log_nu[j];
            const double updated =
                target == -kInf ? -kInf : target - logsumexp_col(j);
            shift = std::max(shift, std::abs(updated == -kInf && g[j] == -kInf
                                                 ? 0.0
                                                 : updated - g[j]));
            g[j] = updated;
        }
        if (shift < tol) break;
    }

    Matrix plan(n, m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (f[i] == -kInf || g[j] == -kInf) continue;
            plan(i, j) = std::exp(f[i] + g[j] - cost(i, j) / epsilon);
        }
    return round_to_marginals(plan, mu, nu);
}

Matrix round_to_marginals(const Matrix& plan, const std::vector<double>& mu,
                          const std::vector<double>& nu) {
    const std::size_t n = mu.size(), m = nu.size();
    Matrix out = plan;

    // scale rows down to at most mu
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) row += out(i, j);
        const double scale = row > mu[i] && row > 0 ? mu[i] / row : 1.0;
        for (std::size_t j = 0; j < m; ++j) out(i, j) *= scale;
    }
    // scale columns down to at most nu
    for (std::size_t j = 0; j < m; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += out(i, j);
        const double scale = col > nu[j] && col > 0 ? nu[j] / col : 1.0;
        for (std::size_t i = 0; i < n; ++i) out(i, j) *= scale;
    }
    // distribute the residual mass as a rank-one correction
    std::vector<double> row_err(n, 0.0), col_err(m, 0.0);
    double total_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) row += out(i, j);
        row_err[i] = mu[i] - row;
        total_err += row_err[i];
    }
    for (std::size_t j = 0; j < m; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += out(i, j);
        col_err[j] = nu[j] - col;
    }
    if (total_err > kMassEps) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                out(i, j) += row_err[i] * col_err[j] / total_err;
    }
    return out;
}

} // namespace reebgw
