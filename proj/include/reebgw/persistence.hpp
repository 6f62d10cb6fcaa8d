#pragma once

#include <string>
#include <vector>

#include "reebgw/graph.hpp"

namespace reebgw {

enum class PointClass { Ord0, Ext0, Rel1, Ext1 };

std::string point_class_name(PointClass cls);
PointClass parse_point_class(const std::string& name);

struct DiagramPoint {
    double birth;
    double death;
    PointClass cls;
    std::string birth_node;
    std::string death_node;

    double persistence() const { return std::abs(death - birth); }

    bool operator==(const DiagramPoint&) const = default;
};

struct ExtendedDiagram {
    std::vector<DiagramPoint> points;

    std::size_t count(PointClass cls) const;
    std::vector<DiagramPoint> of_class(PointClass cls) const;
};

/// Extended persistence of a connected scalar graph via boundary-matrix
/// reduction over the extended filtration (ascending pass, then the coned
/// descending pass). Ties in f break by sorted node index, treated as an
/// infinitesimal perturbation. Zero-persistence Ord0/Rel1 pairs are
/// dropped; Ext0/Ext1 points are always kept (one per component / cycle).
ExtendedDiagram extended_persistence(const ScalarGraph& graph);

std::string save_diagram(const ExtendedDiagram& diagram);
ExtendedDiagram load_diagram(const std::string& bytes);

/// Bottleneck distance with diagonal projections. Default compares points
/// class-by-class and takes the max over classes; pooled = false matches
/// all points jointly.
double bottleneck_distance(const ExtendedDiagram& d1, const ExtendedDiagram& d2,
                           bool per_class = true);

/// Order-1 matching distance (L-infinity ground cost, diagonal projections),
/// exact assignment. Per-class costs aggregate by sum.
double wasserstein1_distance(const ExtendedDiagram& d1,
                             const ExtendedDiagram& d2, bool per_class = true);

} // namespace reebgw
