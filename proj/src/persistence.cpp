#include "reebgw/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <tuple>

#include <json.hpp>

#include "reebgw/io.hpp"

namespace reebgw {

std::string point_class_name(PointClass cls) {
    switch (cls) {
        case PointClass::Ord0: return "Ord0";
        case PointClass::Ext0: return "Ext0";
        case PointClass::Rel1: return "Rel1";
        case PointClass::Ext1: return "Ext1";
    }
    throw error("bad point class");
}

PointClass parse_point_class(const std::string& name) {
    if (name == "Ord0") return PointClass::Ord0;
    if (name == "Ext0") return PointClass::Ext0;
    if (name == "Rel1") return PointClass::Rel1;
    if (name == "Ext1") return PointClass::Ext1;
    throw error("unknown point class '" + name + "'");
}

std::size_t ExtendedDiagram::count(PointClass cls) const {
    return static_cast<std::size_t>(
        std::count_if(points.begin(), points.end(),
                      [&](const DiagramPoint& p) { return p.cls == cls; }));
}

std::vector<DiagramPoint> ExtendedDiagram::of_class(PointClass cls) const {
    std::vector<DiagramPoint> out;
    for (const auto& p : points)
        if (p.cls == cls) out.push_back(p);
    return out;
}

namespace {

// Simplices of the extended filtration, in filtration order:
//   index 0                 : cone apex (eldest, carries the essential class)
//   ascending part          : vertices and edges by increasing perturbed rank
//   descending (coned) part : cone edges and cone triangles by decreasing rank
enum class SimplexKind { Apex, Vertex, Edge, ConeEdge, ConeTriangle };

struct Simplex {
    SimplexKind kind;
    std::size_t a = 0; // vertex index / edge index
};

// Z/2 column addition on sorted index vectors.
void xor_into(std::vector<std::uint32_t>& target,
              const std::vector<std::uint32_t>& source) {
    std::vector<std::uint32_t> merged;
    merged.reserve(target.size() + source.size());
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(),
                                  source.end(), std::back_inserter(merged));
    target = std::move(merged);
}

} // namespace

ExtendedDiagram extended_persistence(const ScalarGraph& graph) {
    if (!graph.is_connected())
        throw error("extended persistence requires a connected graph");
    const std::size_t n = graph.node_count();
    const auto& edges = graph.edges();
    const std::size_t m = edges.size();

    // Perturbed total order on vertices: (f value, node index).
    std::vector<std::size_t> vertex_order(n);
    std::iota(vertex_order.begin(), vertex_order.end(), 0);
    std::sort(vertex_order.begin(), vertex_order.end(),
              [&](std::size_t a, std::size_t b) {
                  if (graph.value(a) != graph.value(b))
                      return graph.value(a) < graph.value(b);
                  return a < b;
              });
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[vertex_order[r]] = r;

    auto edge_max_rank = [&](std::size_t e) {
        return std::max(rank[edges[e].first], rank[edges[e].second]);
    };
    auto edge_min_rank = [&](std::size_t e) {
        return std::min(rank[edges[e].first], rank[edges[e].second]);
    };
    auto edge_upper_node = [&](std::size_t e) {
        return rank[edges[e].first] > rank[edges[e].second] ? edges[e].first
                                                            : edges[e].second;
    };
    auto edge_lower_node = [&](std::size_t e) {
        return rank[edges[e].first] < rank[edges[e].second] ? edges[e].first
                                                            : edges[e].second;
    };

    // Build the filtration.
    std::vector<Simplex> filtration;
    filtration.reserve(2 * n + 2 * m + 1);
    filtration.push_back({SimplexKind::Apex, 0});

    // Ascending: sort by (rank key, dim, secondary).
    struct AscItem {
        std::size_t key;
        int dim;
        std::size_t tiebreak;
        Simplex simplex;
    };
    std::vector<AscItem> ascending;
    ascending.reserve(n + m);
    for (std::size_t v = 0; v < n; ++v)
        ascending.push_back({rank[v], 0, v, {SimplexKind::Vertex, v}});
    for (std::size_t e = 0; e < m; ++e)
        ascending.push_back(
            {edge_max_rank(e), 1, edge_min_rank(e), {SimplexKind::Edge, e}});
    std::sort(ascending.begin(), ascending.end(),
              [](const AscItem& x, const AscItem& y) {
                  return std::tie(x.key, x.dim, x.tiebreak) <
                         std::tie(y.key, y.dim, y.tiebreak);
              });
    for (const auto& item : ascending) filtration.push_back(item.simplex);

    // Descending: cone edges enter at the vertex rank, cone triangles at the
    // lower endpoint rank, all in decreasing rank; at equal rank the cone
    // edge precedes any triangle using it.
    struct DescItem {
        std::size_t key;
        int dim;
        std::size_t tiebreak;
        Simplex simplex;
    };
    std::vector<DescItem> descending;
    descending.reserve(n + m);
    for (std::size_t v = 0; v < n; ++v)
        descending.push_back({rank[v], 1, v, {SimplexKind::ConeEdge, v}});
    for (std::size_t e = 0; e < m; ++e)
        descending.push_back(
            {edge_min_rank(e), 2, edge_max_rank(e), {SimplexKind::ConeTriangle, e}});
    std::sort(descending.begin(), descending.end(),
              [](const DescItem& x, const DescItem& y) {
                  if (x.key != y.key) return x.key > y.key;
                  return std::tie(x.dim, x.tiebreak) < std::tie(y.dim, y.tiebreak);
              });
    for (const auto& item : descending) filtration.push_back(item.simplex);

    const std::size_t total = filtration.size();

    // Global index lookup for faces.
    std::vector<std::uint32_t> vertex_pos(n), edge_pos(m), cone_edge_pos(n);
    for (std::size_t i = 0; i < total; ++i) {
        const Simplex& s = filtration[i];
        switch (s.kind) {
            case SimplexKind::Vertex: vertex_pos[s.a] = static_cast<std::uint32_t>(i); break;
            case SimplexKind::Edge: edge_pos[s.a] = static_cast<std::uint32_t>(i); break;
            case SimplexKind::ConeEdge: cone_edge_pos[s.a] = static_cast<std::uint32_t>(i); break;
            default: break;
        }
    }

    // Boundary matrix over Z/2, columns in filtration order.
    std::vector<std::vector<std::uint32_t>> columns(total);
    for (std::size_t i = 0; i < total; ++i) {
        const Simplex& s = filtration[i];
        auto& col = columns[i];
        switch (s.kind) {
            case SimplexKind::Apex:
            case SimplexKind::Vertex:
                break;
            case SimplexKind::Edge:
                col = {vertex_pos[edges[s.a].first], vertex_pos[edges[s.a].second]};
                break;
            case SimplexKind::ConeEdge:
                col = {0, vertex_pos[s.a]};
                break;
            case SimplexKind::ConeTriangle:
                col = {edge_pos[s.a], cone_edge_pos[edges[s.a].first],
                       cone_edge_pos[edges[s.a].second]};
                break;
        }
        std::sort(col.begin(), col.end());
    }

    // Standard reduction.
    std::vector<std::int64_t> owner_of_low(total, -1);
    std::vector<std::int64_t> pair_of(total, -1);
    for (std::size_t j = 0; j < total; ++j) {
        auto& col = columns[j];
        while (!col.empty()) {
            const std::uint32_t low = col.back();
            const std::int64_t other = owner_of_low[low];
            if (other < 0) break;
            xor_into(col, columns[static_cast<std::size_t>(other)]);
        }
        if (!col.empty()) {
            const std::uint32_t low = col.back();
            owner_of_low[low] = static_cast<std::int64_t>(j);
            pair_of[low] = static_cast<std::int64_t>(j);
            pair_of[j] = static_cast<std::int64_t>(low);
        }
    }

    // Map pairs back to (value, value, class, node, node).
    ExtendedDiagram diagram;
    for (std::size_t i = 0; i < total; ++i) {
        const std::int64_t j = pair_of[i];
        if (j < 0 || static_cast<std::size_t>(j) <= i) continue;
        const Simplex& birth = filtration[i];
        const Simplex& death = filtration[static_cast<std::size_t>(j)];
        if (birth.kind == SimplexKind::Apex) continue;

        DiagramPoint point{};
        if (birth.kind == SimplexKind::Vertex && death.kind == SimplexKind::Edge) {
            const std::size_t bn = birth.a;
            const std::size_t dn = edge_upper_node(death.a);
            point = {graph.value(bn), graph.value(dn), PointClass::Ord0,
                     graph.id(bn), graph.id(dn)};
            if (point.birth == point.death) continue; // regular-point pair
        } else if (birth.kind == SimplexKind::Vertex &&
                   death.kind == SimplexKind::ConeEdge) {
            const std::size_t bn = birth.a;
            const std::size_t dn = death.a;
            point = {graph.value(bn), graph.value(dn), PointClass::Ext0,
                     graph.id(bn), graph.id(dn)};
        } else if (birth.kind == SimplexKind::Edge &&
                   death.kind == SimplexKind::ConeTriangle) {
            const std::size_t bn = edge_upper_node(birth.a);
            const std::size_t dn = edge_lower_node(death.a);
            point = {graph.value(bn), graph.value(dn), PointClass::Ext1,
                     graph.id(bn), graph.id(dn)};
        } else if (birth.kind == SimplexKind::ConeEdge &&
                   death.kind == SimplexKind::ConeTriangle) {
            const std::size_t bn = birth.a;
            const std::size_t dn = edge_lower_node(death.a);
            point = {graph.value(bn), graph.value(dn), PointClass::Rel1,
                     graph.id(bn), graph.id(dn)};
            if (point.birth == point.death) continue; // regular-point pair
        } else {
            continue;
        }
        diagram.points.push_back(std::move(point));
    }

    // Deterministic presentation order.
    std::sort(diagram.points.begin(), diagram.points.end(),
              [](const DiagramPoint& x, const DiagramPoint& y) {
                  return std::tie(x.cls, x.birth, x.death, x.birth_node) <
                         std::tie(y.cls, y.birth, y.death, y.birth_node);
              });
    return diagram;
}

std::string save_diagram(const ExtendedDiagram& diagram) {
    std::string out = "[";
    bool first = true;
    for (const auto& p : diagram.points) {
        if (!first) out += ",";
        first = false;
        out += "{\"birth\":" + format_real(p.birth) +
               ",\"death\":" + format_real(p.death) + ",\"class\":\"" +
               point_class_name(p.cls) + "\",\"birth_node\":" +
               nlohmann::json(p.birth_node).dump() +
               ",\"death_node\":" + nlohmann::json(p.death_node).dump() + "}";
    }
    out += "]";
    return out;
}

ExtendedDiagram load_diagram(const std::string& bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw error("parse error at byte " + std::to_string(e.byte) + ": " +
                    e.what());
    }
    ExtendedDiagram diagram;
    for (const auto& obj : doc) {
        DiagramPoint p{};
        p.birth = obj.at("birth").get<double>();
        p.death = obj.at("death").get<double>();
        p.cls = parse_point_class(obj.at("class").get<std::string>());
        p.birth_node = obj.value("birth_node", std::string());
        p.death_node = obj.value("death_node", std::string());
        diagram.points.push_back(std::move(p));
    }
    return diagram;
}

} // namespace reebgw
