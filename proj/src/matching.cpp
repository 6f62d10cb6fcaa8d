#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "reebgw/ot.hpp"
#include "reebgw/persistence.hpp"

namespace reebgw {

namespace {

struct Pt {
    double b, d;
};

double linf(const Pt& x, const Pt& y) {
    return std::max(std::abs(x.b - y.b), std::abs(x.d - y.d));
}

double diag_cost(const Pt& x) { return std::abs(x.d - x.b) / 2.0; }

// Kuhn's augmenting-path matching over edges admissible at radius r.
// Left side: D1 points then diagonal slots for D2; right side symmetric.
bool feasible(const std::vector<Pt>& d1, const std::vector<Pt>& d2, double r) {
    const std::size_t n1 = d1.size(), n2 = d2.size();
    const std::size_t left = n1 + n2, right = n2 + n1;
    std::vector<std::vector<std::size_t>> adj(left);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j)
            if (linf(d1[i], d2[j]) <= r) adj[i].push_back(j);
        if (diag_cost(d1[i]) <= r) adj[i].push_back(n2 + i);
    }
    for (std::size_t j = 0; j < n2; ++j) {
        if (diag_cost(d2[j]) <= r) adj[n1 + j].push_back(j);
        // diagonal to diagonal is free
        for (std::size_t t = 0; t < n1; ++t) adj[n1 + j].push_back(n2 + t);
    }

    std::vector<std::int64_t> match_right(right, -1);
    std::vector<bool> visited(right);
    std::function<bool(std::size_t)> try_match = [&](std::size_t u) -> bool {
        for (std::size_t v : adj[u]) {
            if (visited[v]) continue;
            visited[v] = true;
            if (match_right[v] < 0 ||
                try_match(static_cast<std::size_t>(match_right[v]))) {
                match_right[v] = static_cast<std::int64_t>(u);
                return true;
            }
        }
        return false;
    };
    for (std::size_t u = 0; u < left; ++u) {
        std::fill(visited.begin(), visited.end(), false);
        if (!try_match(u)) return false;
    }
    return true;
}

double bottleneck_one(const std::vector<Pt>& d1, const std::vector<Pt>& d2) {
    if (d1.empty() && d2.empty()) return 0.0;
    std::vector<double> candidates = {0.0};
    for (const auto& x : d1) {
        candidates.push_back(diag_cost(x));
        for (const auto& y : d2) candidates.push_back(linf(x, y));
    }
    for (const auto& y : d2) candidates.push_back(diag_cost(y));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    std::size_t lo = 0, hi = candidates.size() - 1;
    if (feasible(d1, d2, candidates[lo])) return candidates[lo];
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (feasible(d1, d2, candidates[mid]))
            hi = mid;
        else
            lo = mid;
    }
    return candidates[hi];
}

double wasserstein1_one(const std::vector<Pt>& d1, const std::vector<Pt>& d2) {
    const std::size_t n1 = d1.size(), n2 = d2.size();
    if (n1 == 0 && n2 == 0) return 0.0;
    const std::size_t n = n1 + n2;
    Matrix cost(n, n, 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) cost(i, j) = linf(d1[i], d2[j]);
        for (std::size_t t = n2; t < n; ++t) cost(i, t) = diag_cost(d1[i]);
    }
    for (std::size_t s = n1; s < n; ++s)
        for (std::size_t j = 0; j < n2; ++j) cost(s, j) = diag_cost(d2[j]);
    // unit mass per slot; the optimal transport extreme point is a matching
    const std::vector<double> unit(n, 1.0);
    const Matrix plan = exact_transport(cost, unit, unit);
    return dot(cost, plan);
}

std::vector<Pt> points_of(const ExtendedDiagram& d, PointClass cls) {
    std::vector<Pt> out;
    for (const auto& p : d.points)
        if (p.cls == cls) out.push_back({p.birth, p.death});
    return out;
}

std::vector<Pt> all_points(const ExtendedDiagram& d) {
    std::vector<Pt> out;
    for (const auto& p : d.points) out.push_back({p.birth, p.death});
    return out;
}

const PointClass kClasses[] = {PointClass::Ord0, PointClass::Ext0,
                               PointClass::Rel1, PointClass::Ext1};

} // namespace

double bottleneck_distance(const ExtendedDiagram& d1, const ExtendedDiagram& d2,
                           bool per_class) {
    if (!per_class) return bottleneck_one(all_points(d1), all_points(d2));
    double worst = 0.0;
    for (PointClass cls : kClasses)
        worst = std::max(worst,
                         bottleneck_one(points_of(d1, cls), points_of(d2, cls)));
    return worst;
}

double wasserstein1_distance(const ExtendedDiagram& d1,
                             const ExtendedDiagram& d2, bool per_class) {
    if (!per_class) return wasserstein1_one(all_points(d1), all_points(d2));
    double total = 0.0;
    for (PointClass cls : kClasses)
        total += wasserstein1_one(points_of(d1, cls), points_of(d2, cls));
    return total;
}

} // namespace reebgw
