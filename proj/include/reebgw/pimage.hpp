#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "reebgw/graph.hpp"
#include "reebgw/persistence.hpp"

namespace reebgw {

struct PIBounds {
    double b_min, b_max, p_min, p_max;
};

struct PIParams {
    double sigma = 0.1;       // Gaussian kernel bandwidth
    int resolution = 10;      // grid is resolution x resolution
    double weight_power = 1;  // w(b, p) = p^weight_power
    std::optional<PIBounds> bounds;

    void check() const;
};

/// A birth-persistence point with the graph nodes it came from.
struct BPPoint {
    double b, p;
    std::string birth_node;
    std::string death_node;
};

/// (b, d) -> (b, |d - b|); zero-persistence points dropped.
std::vector<BPPoint> birth_persistence_transform(const ExtendedDiagram& diagram);

struct PersistenceImage {
    PIParams params;
    PIBounds bounds{};                       // resolved bounds
    std::vector<double> values;              // row-major, N = resolution^2
    std::vector<std::array<double, 2>> centers;

    std::size_t pixel_count() const { return values.size(); }
    double l1_distance(const PersistenceImage& other) const;

    std::string to_json() const;
};

/// Pixel values are exact double integrals of the weighted Gaussian mixture
/// over pixel rectangles (erf-based), not center-point approximations.
/// Absent explicit bounds, [min b, max b] x [0, max p] padded by 3*sigma.
PersistenceImage build_pi(const std::vector<BPPoint>& points,
                          const PIParams& params);

struct NodeMeasure {
    std::vector<std::string> node_order;
    std::vector<double> probabilities;

    std::string to_json() const;
};

/// PI-based measure: contrib(v) = sum_k I[k] * phi_{(b_v,p_v)}(c_k), kernel
/// evaluated at pixel centers; nodes in multiple points accumulate.
/// Throws if every contribution vanishes.
NodeMeasure pi_measure(const ScalarGraph& graph, const ExtendedDiagram& diagram,
                       const PIParams& params);

enum class BaselineMeasureKind { Uniform, Intensity, Degree, Lifespan };

BaselineMeasureKind parse_measure_kind(const std::string& name);
std::string measure_kind_name(BaselineMeasureKind kind);

NodeMeasure baseline_measure(const ScalarGraph& graph,
                             const ExtendedDiagram* diagram,
                             BaselineMeasureKind kind);

/// Total variation distance between measures over the same node order.
double total_variation(const NodeMeasure& a, const NodeMeasure& b);

/// Union of the two auto-derived bounds, for comparisons on a common grid.
PIBounds shared_bounds(const std::vector<BPPoint>& a,
                       const std::vector<BPPoint>& b, const PIParams& params);

} // namespace reebgw
