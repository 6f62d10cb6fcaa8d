#include "reebgw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "reebgw/rng.hpp"

namespace reebgw {

ScalarGraph::ScalarGraph(
    std::vector<std::pair<std::string, double>> nodes,
    std::vector<std::pair<std::string, std::string>> edges) {
    std::sort(nodes.begin(), nodes.end());
    ids_.reserve(nodes.size());
    values_.reserve(nodes.size());
    for (auto& [id, f] : nodes) {
        if (!ids_.empty() && ids_.back() == id)
            throw error("duplicate node id '" + id + "'");
        ids_.push_back(id);
        values_.push_back(f);
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [a, b] : edges) {
        std::size_t ia = index_of(a);
        std::size_t ib = index_of(b);
        if (ia == ib) throw error("self-loop at node '" + a + "'");
        if (ia > ib) std::swap(ia, ib);
        if (!seen.insert({ia, ib}).second)
            throw error("duplicate edge (" + a + ", " + b + ")");
    }
    edges_.assign(seen.begin(), seen.end());
    adjacency_.assign(ids_.size(), {});
    for (const auto& [a, b] : edges_) {
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
}

std::size_t ScalarGraph::index_of(const std::string& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id)
        throw error("unknown node id '" + id + "'");
    return static_cast<std::size_t>(it - ids_.begin());
}

std::optional<std::size_t> ScalarGraph::find(const std::string& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

namespace {

std::size_t count_components(std::size_t n,
                             const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find_root = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = n;
    for (const auto& [a, b] : edges) {
        const std::size_t ra = find_root(a), rb = find_root(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components;
}

} // namespace

bool ScalarGraph::is_connected() const {
    return node_count() > 0 && component_count() == 1;
}

std::size_t ScalarGraph::component_count() const {
    return count_components(node_count(), edges_);
}

std::size_t ScalarGraph::cycle_rank() const {
    return edge_count() + component_count() - node_count();
}

bool ScalarGraph::is_generic() const {
    std::vector<double> v = values_;
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

bool ValidationReport::ok() const {
    return std::none_of(violations.begin(), violations.end(), [](const Violation& v) {
        return v.severity == Severity::Error;
    });
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << (v.severity == Severity::Error ? "error: " : "warning: ")
            << v.message << "\n";
    }
    return out.str();
}

ValidationReport validate_raw(const RawGraph& raw) {
    ValidationReport report;
    auto err = [&](std::string msg) {
        report.violations.push_back({Severity::Error, std::move(msg)});
    };

    if (raw.nodes.empty()) err("graph has no nodes");

    std::map<std::string, double> by_id;
    for (const auto& [id, f] : raw.nodes) {
        if (!by_id.emplace(id, f).second) err("duplicate node id '" + id + "'");
        if (!std::isfinite(f))
            err("non-finite f value at node '" + id + "'");
    }

    std::map<std::string, std::size_t> index;
    std::size_t next = 0;
    for (const auto& [id, f] : by_id) index[id] = next++;

    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (const auto& [a, b] : raw.edges) {
        const auto ia = index.find(a);
        const auto ib = index.find(b);
        if (ia == index.end()) {
            err("edge endpoint '" + a + "' is not a node");
            continue;
        }
        if (ib == index.end()) {
            err("edge endpoint '" + b + "' is not a node");
            continue;
        }
        if (ia->second == ib->second) {
            err("self-loop at node '" + a + "'");
            continue;
        }
        auto key = std::minmax(ia->second, ib->second);
        if (!edge_set.insert({key.first, key.second}).second)
            err("duplicate edge (" + a + ", " + b + ")");
    }

    if (!by_id.empty()) {
        std::vector<std::pair<std::size_t, std::size_t>> edges(edge_set.begin(),
                                                               edge_set.end());
        const std::size_t comps = count_components(by_id.size(), edges);
        if (comps > 1)
            err("disconnected (" + std::to_string(comps) + " components)");
    }

    std::set<double> distinct;
    bool tie = false;
    for (const auto& [id, f] : by_id)
        if (!distinct.insert(f).second) tie = true;
    if (tie)
        report.violations.push_back(
            {Severity::Warning, "non-generic graph: tied f values"});

    return report;
}

ValidationReport validate(const ScalarGraph& graph) {
    RawGraph raw;
    for (std::size_t i = 0; i < graph.node_count(); ++i)
        raw.nodes.emplace_back(graph.id(i), graph.value(i));
    for (const auto& [a, b] : graph.edges())
        raw.edges.emplace_back(graph.id(a), graph.id(b));
    return validate_raw(raw);
}

ShapeClass parse_shape_class(const std::string& name) {
    if (name == "sphere") return ShapeClass::Sphere;
    if (name == "torus") return ShapeClass::Torus;
    if (name == "double-torus") return ShapeClass::DoubleTorus;
    throw error("unknown shape class '" + name + "'");
}

namespace {

constexpr double kTorusMajor = 1.0;
constexpr double kTorusMinor = 0.35;

std::array<double, 3> torus_point(Rng& rng, double cx) {
    const double theta = rng.uniform(0.0, 2.0 * M_PI);
    const double phi = rng.uniform(0.0, 2.0 * M_PI);
    const double w = kTorusMajor + kTorusMinor * std::cos(theta);
    return {cx + w * std::cos(phi), w * std::sin(phi),
            kTorusMinor * std::sin(theta)};
}

} // namespace

PointCloud synth_shapes(ShapeClass shape, std::size_t n_points, double jitter,
                        std::uint64_t seed) {
    if (n_points < 64) throw error("synth_shapes requires n_points >= 64");
    if (jitter < 0) throw error("synth_shapes requires jitter >= 0");
    Rng rng(seed);
    PointCloud cloud;
    cloud.points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        std::array<double, 3> p{};
        switch (shape) {
            case ShapeClass::Sphere: {
                double x, y, z, norm;
                do {
                    x = rng.normal();
                    y = rng.normal();
                    z = rng.normal();
                    norm = std::sqrt(x * x + y * y + z * z);
                } while (norm < 1e-12);
                p = {x / norm, y / norm, z / norm};
                cloud.label = "sphere";
                break;
            }
            case ShapeClass::Torus:
                p = torus_point(rng, 0.0);
                cloud.label = "torus";
                break;
            case ShapeClass::DoubleTorus: {
                // two tori joined side by side (genus-2 approximation)
                const double offset = 2.0 * kTorusMajor + kTorusMinor;
                const double cx = rng.uniform() < 0.5 ? -offset / 2 : offset / 2;
                p = torus_point(rng, cx);
                cloud.label = "double-torus";
                break;
            }
        }
        if (jitter > 0) {
            // uniform in a ball of radius jitter
            double dx, dy, dz, norm;
            do {
                dx = rng.normal();
                dy = rng.normal();
                dz = rng.normal();
                norm = std::sqrt(dx * dx + dy * dy + dz * dz);
            } while (norm < 1e-12);
            const double r = jitter * std::cbrt(rng.uniform());
            p[0] += r * dx / norm;
            p[1] += r * dy / norm;
            p[2] += r * dz / norm;
        }
        cloud.points.push_back(p);
    }
    return cloud;
}

} // namespace reebgw
