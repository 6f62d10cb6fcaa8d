#pragma once

#include <string>
#include <vector>

#include "reebgw/graph.hpp"

namespace reebgw {

enum class MetricKind {
    ReebRadius,       // asymmetric rho_f
    SymReebRadius,    // (rho_f(v,u) + rho_f(u,v)) / 2
    MaxSymReebRadius, // max(rho_f(v,u), rho_f(u,v))
    ReebDistance,     // min over paths of (max f - min f)
    ShortestPath,     // edge length |f(a) - f(b)|
};

MetricKind parse_metric_kind(const std::string& name);
std::string metric_kind_name(MetricKind kind);
bool metric_is_symmetric(MetricKind kind);
const std::vector<MetricKind>& all_metric_kinds();

struct DistanceMatrix {
    std::vector<std::string> node_order;
    std::vector<double> values; // row-major n x n

    std::size_t size() const { return node_order.size(); }
    double at(std::size_t i, std::size_t j) const {
        return values[i * node_order.size() + j];
    }
    double& at(std::size_t i, std::size_t j) {
        return values[i * node_order.size() + j];
    }

    /// CSV: header `node,<id1>,...,<idn>`, one row per node, 17 sig digits.
    std::string to_csv() const;
    static DistanceMatrix from_csv(const std::string& bytes);
};

/// min over v->u paths of max over path nodes w of |f(v) - f(w)|
double reeb_radius(const ScalarGraph& graph, const std::string& v,
                   const std::string& u);
double sym_reeb_radius(const ScalarGraph& graph, const std::string& v,
                       const std::string& u);
double max_sym_reeb_radius(const ScalarGraph& graph, const std::string& v,
                           const std::string& u);
/// min over v->u paths of (max f on path - min f on path)
double reeb_distance(const ScalarGraph& graph, const std::string& v,
                     const std::string& u);
double shortest_path(const ScalarGraph& graph, const std::string& v,
                     const std::string& u);

/// One full row of the asymmetric Reeb radius: rho(source, u) for all u.
std::vector<double> reeb_radius_row(const ScalarGraph& graph,
                                    std::size_t source);

/// All-pairs matrix of the chosen metric. Rows are computed independently;
/// output is identical for any thread count.
DistanceMatrix distance_matrix(const ScalarGraph& graph, MetricKind kind,
                               int threads = 1);

} // namespace reebgw
