// Shared hand-built fixtures. Values were derived by hand (or frozen from
// the brute-force oracles in oracles.hpp) before the implementation ran.
#pragma once

#include <string>
#include <vector>

#include "reebgw/graph.hpp"
#include "reebgw/metrics.hpp"
#include "reebgw/pimage.hpp"

namespace fixtures {

/// 13-node scalar graph with two nested loops, one extra loop, two local
/// minima and two local maxima. Hand-verified extended persistence:
///   Ord0 = {(1, 2)}, Ext0 = {(0, 11)}, Rel1 = {(10, 8)},
///   Ext1 = {(4, 3), (7, 5), (9, 6)}.
inline reebgw::ScalarGraph two_loop_graph() {
    std::vector<std::pair<std::string, double>> nodes = {
        {"a00", 0.0}, {"a01", 1.0}, {"a02", 2.0},  {"a03", 3.0},
        {"a3x", 3.5}, {"a04", 4.0}, {"a05", 5.0},  {"a06", 6.0},
        {"a07", 7.0}, {"a08", 8.0}, {"a09", 9.0},  {"a10", 10.0},
        {"a11", 11.0},
    };
    std::vector<std::pair<std::string, std::string>> edges = {
        {"a00", "a02"}, {"a01", "a02"}, {"a02", "a03"}, {"a03", "a04"},
        {"a03", "a3x"}, {"a3x", "a04"}, {"a04", "a05"}, {"a05", "a07"},
        {"a05", "a06"}, {"a06", "a07"}, {"a06", "a09"}, {"a07", "a08"},
        {"a08", "a09"}, {"a08", "a10"}, {"a09", "a11"},
    };
    return reebgw::ScalarGraph(std::move(nodes), std::move(edges));
}

/// Simple path graph a(0) - b(1) - c(2) - d(3).
inline reebgw::ScalarGraph path4() {
    return reebgw::ScalarGraph(
        {{"a", 0.0}, {"b", 1.0}, {"c", 2.0}, {"d", 3.0}},
        {{"a", "b"}, {"b", "c"}, {"c", "d"}});
}

/// Two nodes at the same height joined through a third: reeb-distance
/// cannot tell u and w apart (identity of indiscernibles fails), while
/// sym-reeb-radius can.
inline reebgw::ScalarGraph equal_height_fork() {
    return reebgw::ScalarGraph(
        {{"u", 1.0}, {"v", 0.0}, {"w", 1.0}},
        {{"v", "u"}, {"v", "w"}});
}

inline reebgw::DistanceMatrix matrix_from_upper(
    const std::vector<std::string>& ids,
    const std::vector<std::vector<double>>& upper) {
    reebgw::DistanceMatrix m;
    m.node_order = ids;
    const std::size_t n = ids.size();
    m.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            m.at(i, j) = upper[i][j - i - 1];
            m.at(j, i) = upper[i][j - i - 1];
        }
    return m;
}

/// Worked-example 8x8 symmetric intra-graph distance matrices and node
/// probability vectors for the end-to-end solver check. Expected distance
/// at p = 2: 7.814688 (within 5%).
inline reebgw::DistanceMatrix example_matrix_f() {
    return matrix_from_upper(
        {"f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8"},
        {{6, 7, 12, 9, 18, 16, 22},
         {4, 6, 3, 12, 10, 16},
         {8, 5, 14, 12, 18},
         {3.5, 6, 4, 10},
         {9, 7, 13},
         {5, 8},
         {6}});
}

inline reebgw::DistanceMatrix example_matrix_g() {
    return matrix_from_upper(
        {"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8"},
        {{4, 7, 8, 12, 16, 18, 20},
         {3, 4, 8, 12, 14, 16},
         {2, 6, 10, 12, 14},
         {4, 8, 10, 12},
         {4, 6, 8},
         {2, 4},
         {3}});
}

inline reebgw::NodeMeasure example_measure_f() {
    return {{"f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8"},
            {0.2420, 0.1190, 0.0730, 0.0660, 0.0730, 0.0660, 0.1190, 0.2420}};
}

inline reebgw::NodeMeasure example_measure_g() {
    return {{"g1", "g2", "g3", "g4", "g5", "g6", "g7", "g8"},
            {0.3075, 0.1255, 0.0385, 0.0385, 0.1255, 0.0284, 0.0284, 0.3075}};
}

constexpr double kExampleDistance = 7.814688;

} // namespace fixtures
