#pragma once

#include <cstdint>
#include <vector>

#include "reebgw/graph.hpp"

namespace reebgw {

struct MapperParams {
    double ecc_p = 2.0;          // p of the eccentricity filter; inf allowed
    bool ecc_inf = false;
    int n_intervals = 10;
    double overlap = 0.3;        // fractional overlap in [0, 1)
    double cluster_eps = 0.0;    // single-linkage threshold; <= 0 means auto
    std::size_t sample_n = 1024; // 0 disables subsampling
    bool midpoint_values = false; // interval midpoint instead of mean filter
    bool keep_all_components = false;

    void check() const;
};

/// ecc(x) = ((1/n) sum_y ||x - y||^p)^(1/p); max_y ||x - y|| for p = inf.
/// The mean includes the self term.
std::vector<double> eccentricity(const PointCloud& cloud, double ecc_p,
                                 bool ecc_inf = false);

/// Mapper graph of a point cloud: seeded uniform subsample, uniform interval
/// cover of the eccentricity range, per-interval single-linkage clustering
/// at cluster_eps (auto = 4x mean 1-NN distance), one node per cluster with
/// f = mean eccentricity of its members, edges between clusters of adjacent
/// intervals sharing a point. Largest component kept unless
/// keep_all_components is set (then the full graph is returned; split with
/// split_components).
ScalarGraph build_mapper(const PointCloud& cloud, const MapperParams& params,
                         std::uint64_t seed);

std::vector<ScalarGraph> split_components(const ScalarGraph& graph);

} // namespace reebgw
