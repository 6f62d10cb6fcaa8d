#include "reebgw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "reebgw/io.hpp"
#include "reebgw/parallel.hpp"

namespace reebgw {

MetricKind parse_metric_kind(const std::string& name) {
    if (name == "reeb-radius") return MetricKind::ReebRadius;
    if (name == "sym-reeb-radius") return MetricKind::SymReebRadius;
    if (name == "max-sym-reeb-radius") return MetricKind::MaxSymReebRadius;
    if (name == "reeb-distance") return MetricKind::ReebDistance;
    if (name == "shortest-path") return MetricKind::ShortestPath;
    throw error("unknown metric kind '" + name + "'");
}

std::string metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::ReebRadius: return "reeb-radius";
        case MetricKind::SymReebRadius: return "sym-reeb-radius";
        case MetricKind::MaxSymReebRadius: return "max-sym-reeb-radius";
        case MetricKind::ReebDistance: return "reeb-distance";
        case MetricKind::ShortestPath: return "shortest-path";
    }
    throw error("bad metric kind");
}

bool metric_is_symmetric(MetricKind kind) {
    return kind != MetricKind::ReebRadius;
}

const std::vector<MetricKind>& all_metric_kinds() {
    static const std::vector<MetricKind> kinds = {
        MetricKind::ReebRadius, MetricKind::SymReebRadius,
        MetricKind::MaxSymReebRadius, MetricKind::ReebDistance,
        MetricKind::ShortestPath};
    return kinds;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Label-setting minimax search: label(u) = min over source->u paths of
// max over path nodes w of cost(w). Ties in the queue break by smaller
// node index. Nodes with cost(w) = +inf are excluded.
std::vector<double> minimax_search(const ScalarGraph& graph,
                                   std::size_t source,
                                   const std::vector<double>& node_cost) {
    const std::size_t n = graph.node_count();
    std::vector<double> label(n, kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    if (node_cost[source] == kInf) return label;
    label[source] = node_cost[source];
    queue.push({label[source], source});
    while (!queue.empty()) {
        const auto [d, w] = queue.top();
        queue.pop();
        if (d > label[w]) continue;
        for (std::size_t x : graph.adjacency()[w]) {
            if (node_cost[x] == kInf) continue;
            const double candidate = std::max(d, node_cost[x]);
            if (candidate < label[x]) {
                label[x] = candidate;
                queue.push({candidate, x});
            }
        }
    }
    return label;
}

std::vector<double> shortest_path_row(const ScalarGraph& graph,
                                      std::size_t source) {
    const std::size_t n = graph.node_count();
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        const auto [d, w] = queue.top();
        queue.pop();
        if (d > dist[w]) continue;
        for (std::size_t x : graph.adjacency()[w]) {
            const double candidate =
                d + std::abs(graph.value(w) - graph.value(x));
            if (candidate < dist[x]) {
                dist[x] = candidate;
                queue.push({candidate, x});
            }
        }
    }
    return dist;
}

// Parametric floor sweep for the Reeb distance. For every floor value a in
// the sorted distinct f values with a <= f(source), run a minimax search on
// the subgraph {f >= a} minimizing the path maximum of f; the distance to u
// is min over floors of (path maximum - a). Exact because the optimal
// path's minimum is attained at some node value.
std::vector<double> reeb_distance_row(const ScalarGraph& graph,
                                      std::size_t source) {
    const std::size_t n = graph.node_count();
    std::vector<double> floors = graph.values();
    std::sort(floors.begin(), floors.end());
    floors.erase(std::unique(floors.begin(), floors.end()), floors.end());

    std::vector<double> best(n, kInf);
    for (double a : floors) {
        if (a > graph.value(source)) break;
        std::vector<double> cost(n);
        for (std::size_t i = 0; i < n; ++i)
            cost[i] = graph.value(i) >= a ? graph.value(i) : kInf;
        const std::vector<double> label = minimax_search(graph, source, cost);
        for (std::size_t u = 0; u < n; ++u)
            if (label[u] < kInf) best[u] = std::min(best[u], label[u] - a);
    }
    return best;
}

void require_connected(const ScalarGraph& graph) {
    if (!graph.is_connected())
        throw error("graph is not connected; intra-graph metrics are undefined");
}

} // namespace

std::vector<double> reeb_radius_row(const ScalarGraph& graph,
                                    std::size_t source) {
    const double anchor = graph.value(source);
    std::vector<double> cost(graph.node_count());
    for (std::size_t i = 0; i < graph.node_count(); ++i)
        cost[i] = std::abs(anchor - graph.value(i));
    return minimax_search(graph, source, cost);
}

double reeb_radius(const ScalarGraph& graph, const std::string& v,
                   const std::string& u) {
    require_connected(graph);
    return reeb_radius_row(graph, graph.index_of(v))[graph.index_of(u)];
}

double sym_reeb_radius(const ScalarGraph& graph, const std::string& v,
                       const std::string& u) {
    return 0.5 * (reeb_radius(graph, v, u) + reeb_radius(graph, u, v));
}

double max_sym_reeb_radius(const ScalarGraph& graph, const std::string& v,
                           const std::string& u) {
    return std::max(reeb_radius(graph, v, u), reeb_radius(graph, u, v));
}

double reeb_distance(const ScalarGraph& graph, const std::string& v,
                     const std::string& u) {
    require_connected(graph);
    return reeb_distance_row(graph, graph.index_of(v))[graph.index_of(u)];
}

double shortest_path(const ScalarGraph& graph, const std::string& v,
                     const std::string& u) {
    require_connected(graph);
    return shortest_path_row(graph, graph.index_of(v))[graph.index_of(u)];
}

DistanceMatrix distance_matrix(const ScalarGraph& graph, MetricKind kind,
                               int threads) {
    require_connected(graph);
    const std::size_t n = graph.node_count();
    DistanceMatrix matrix;
    matrix.node_order = graph.ids();
    matrix.values.assign(n * n, 0.0);

    switch (kind) {
        case MetricKind::ReebRadius:
        case MetricKind::SymReebRadius:
        case MetricKind::MaxSymReebRadius: {
            std::vector<std::vector<double>> rho(n);
            parallel_for(n, threads, [&](std::size_t v) {
                rho[v] = reeb_radius_row(graph, v);
            });
            for (std::size_t v = 0; v < n; ++v)
                for (std::size_t u = 0; u < n; ++u) {
                    double d = rho[v][u];
                    if (kind == MetricKind::SymReebRadius)
                        d = 0.5 * (rho[v][u] + rho[u][v]);
                    else if (kind == MetricKind::MaxSymReebRadius)
                        d = std::max(rho[v][u], rho[u][v]);
                    matrix.at(v, u) = d;
                }
            break;
        }
        case MetricKind::ReebDistance:
            parallel_for(n, threads, [&](std::size_t v) {
                const std::vector<double> row = reeb_distance_row(graph, v);
                for (std::size_t u = 0; u < n; ++u) matrix.at(v, u) = row[u];
            });
            break;
        case MetricKind::ShortestPath:
            parallel_for(n, threads, [&](std::size_t v) {
                const std::vector<double> row = shortest_path_row(graph, v);
                for (std::size_t u = 0; u < n; ++u) matrix.at(v, u) = row[u];
            });
            break;
    }
    return matrix;
}

std::string DistanceMatrix::to_csv() const {
    std::ostringstream out;
    out << "node";
    for (const auto& id : node_order) out << "," << id;
    out << "\n";
    for (std::size_t i = 0; i < size(); ++i) {
        out << node_order[i];
        for (std::size_t j = 0; j < size(); ++j)
            out << "," << format_real(at(i, j));
        out << "\n";
    }
    return out.str();
}

DistanceMatrix from_csv_impl(const std::string& bytes) {
    DistanceMatrix matrix;
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line)) throw error("empty matrix CSV");
    {
        std::istringstream header(line);
        std::string tok;
        std::getline(header, tok, ','); // "node"
        while (std::getline(header, tok, ',')) matrix.node_order.push_back(tok);
    }
    const std::size_t n = matrix.node_order.size();
    matrix.values.reserve(n * n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        std::getline(row, tok, ','); // row id
        while (std::getline(row, tok, ','))
            matrix.values.push_back(std::stod(tok));
    }
    if (matrix.values.size() != n * n) throw error("matrix CSV shape mismatch");
    return matrix;
}

DistanceMatrix DistanceMatrix::from_csv(const std::string& bytes) {
    return from_csv_impl(bytes);
}

} // namespace reebgw
