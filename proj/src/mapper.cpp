#include "reebgw/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "reebgw/rng.hpp"

namespace reebgw {

void MapperParams::check() const {
    if (!ecc_inf && ecc_p < 1) throw error("mapper: ecc_p must be >= 1 or inf");
    if (n_intervals < 1) throw error("mapper: n_intervals must be >= 1");
    if (overlap < 0 || overlap >= 1)
        throw error("mapper: overlap must be in [0, 1)");
}

namespace {

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

std::vector<double> eccentricity(const PointCloud& cloud, double ecc_p,
                                 bool ecc_inf) {
    if (cloud.points.empty()) throw error("eccentricity: empty cloud");
    const std::size_t n = cloud.points.size();
    std::vector<double> ecc(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (ecc_inf) {
            double best = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                best = std::max(best, dist3(cloud.points[i], cloud.points[j]));
            ecc[i] = best;
        } else {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += std::pow(dist3(cloud.points[i], cloud.points[j]), ecc_p);
            ecc[i] = std::pow(acc / static_cast<double>(n), 1.0 / ecc_p);
        }
    }
    return ecc;
}

ScalarGraph build_mapper(const PointCloud& cloud, const MapperParams& params,
                         std::uint64_t seed) {
    params.check();

    // seeded uniform subsample without replacement
    PointCloud sample;
    if (params.sample_n > 0 && cloud.points.size() > params.sample_n) {
        Rng rng(seed);
        std::vector<std::size_t> order(cloud.points.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = 0; i < params.sample_n; ++i) {
            const std::size_t j =
                i + rng.uniform_index(order.size() - i);
            std::swap(order[i], order[j]);
        }
        order.resize(params.sample_n);
        std::sort(order.begin(), order.end());
        for (std::size_t idx : order) sample.points.push_back(cloud.points[idx]);
    } else {
        sample = cloud;
    }
    const std::size_t n = sample.points.size();

    const std::vector<double> filter =
        eccentricity(sample, params.ecc_p, params.ecc_inf);
    const auto [lo_it, hi_it] = std::minmax_element(filter.begin(), filter.end());
    const double lo = *lo_it, hi = *hi_it;

    double eps = params.cluster_eps;
    if (eps <= 0) {
        // auto: 4x mean 1-NN distance of the sample; smaller multiples sit at the
        // single-linkage fragmentation threshold on smooth-surface samples
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    nearest = std::min(nearest, dist3(sample.points[i],
                                                      sample.points[j]));
            if (n > 1) acc += nearest;
        }
        eps = n > 1 ? 4.0 * acc / static_cast<double>(n) : 1.0;
    }

    // degenerate all-equal filter: one node
    std::vector<std::pair<std::string, double>> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
    if (hi - lo <= 0) {
        nodes.emplace_back("i0000_c000", lo);
        return ScalarGraph(std::move(nodes), std::move(edges));
    }

    const std::size_t k = static_cast<std::size_t>(params.n_intervals);
    const double g = params.overlap;
    const double len = (hi - lo) / (static_cast<double>(k) -
                                    (static_cast<double>(k) - 1.0) * g);
    const double stride = len * (1.0 - g);

    std::vector<std::vector<std::size_t>> cluster_members; // global cluster id
    std::vector<double> cluster_value;
    std::vector<std::string> cluster_id;
    // per point, cluster ids of the intervals containing it
    std::vector<std::vector<std::size_t>> point_clusters(n);

    char buf[32];
    for (std::size_t iv = 0; iv < k; ++iv) {
        const double start = lo + static_cast<double>(iv) * stride;
        const double end = iv + 1 == k ? hi : start + len;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (filter[i] >= start - 1e-12 && filter[i] <= end + 1e-12)
                members.push_back(i);
        if (members.empty()) continue; // empty cover element is allowed

        // single linkage at threshold eps
        UnionFind uf(members.size());
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                if (dist3(sample.points[members[a]], sample.points[members[b]]) <=
                    eps)
                    uf.unite(a, b);

        std::map<std::size_t, std::size_t> root_to_cluster;
        for (std::size_t a = 0; a < members.size(); ++a) {
            const std::size_t root = uf.find(a);
            auto [it, inserted] =
                root_to_cluster.try_emplace(root, cluster_members.size());
            if (inserted) {
                cluster_members.emplace_back();
                cluster_value.push_back(0.0);
                std::snprintf(buf, sizeof(buf), "i%04zu_c%03zu", iv,
                              root_to_cluster.size() - 1);
                cluster_id.emplace_back(buf);
            }
            cluster_members[it->second].push_back(members[a]);
            point_clusters[members[a]].push_back(it->second);
        }
        for (const auto& [root, cid] : root_to_cluster) {
            if (params.midpoint_values) {
                cluster_value[cid] = (start + end) / 2.0;
            } else {
                double acc = 0.0;
                for (std::size_t idx : cluster_members[cid]) acc += filter[idx];
                cluster_value[cid] =
                    acc / static_cast<double>(cluster_members[cid].size());
            }
        }
    }

    for (std::size_t c = 0; c < cluster_members.size(); ++c)
        nodes.emplace_back(cluster_id[c], cluster_value[c]);

    // edge between clusters sharing >= 1 point
    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& cs = point_clusters[i];
        for (std::size_t a = 0; a < cs.size(); ++a)
            for (std::size_t b = a + 1; b < cs.size(); ++b)
                if (cs[a] != cs[b])
                    edge_set.insert(std::minmax(cs[a], cs[b]));
    }
    for (const auto& [a, b] : edge_set)
        edges.emplace_back(cluster_id[a], cluster_id[b]);

    ScalarGraph graph(std::move(nodes), std::move(edges));
    if (params.keep_all_components || graph.is_connected()) return graph;

    // keep the largest component
    std::vector<ScalarGraph> parts = split_components(graph);
    std::size_t best = 0;
    for (std::size_t i = 1; i < parts.size(); ++i)
        if (parts[i].node_count() > parts[best].node_count()) best = i;
    return parts[best];
}

std::vector<ScalarGraph> split_components(const ScalarGraph& graph) {
    const std::size_t n = graph.node_count();
    UnionFind uf(n);
    for (const auto& [a, b] : graph.edges()) uf.unite(a, b);
    std::map<std::size_t, std::size_t> root_to_part;
    std::vector<std::vector<std::pair<std::string, double>>> node_lists;
    std::vector<std::vector<std::pair<std::string, std::string>>> edge_lists;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = uf.find(i);
        auto [it, inserted] = root_to_part.try_emplace(root, node_lists.size());
        if (inserted) {
            node_lists.emplace_back();
            edge_lists.emplace_back();
        }
        node_lists[it->second].emplace_back(graph.id(i), graph.value(i));
    }
    for (const auto& [a, b] : graph.edges())
        edge_lists[root_to_part[uf.find(a)]].emplace_back(graph.id(a),
                                                          graph.id(b));
    std::vector<ScalarGraph> parts;
    for (std::size_t p = 0; p < node_lists.size(); ++p)
        parts.emplace_back(std::move(node_lists[p]), std::move(edge_lists[p]));
    return parts;
}

} // namespace reebgw
