#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace reebgw {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite graph with a real scalar per node; the discrete Reeb / Mapper graph.
/// Nodes are indexed internally by sorted-id order so that every derived
/// matrix or measure is stable across runs.
class ScalarGraph {
public:
    ScalarGraph() = default;
    ScalarGraph(std::vector<std::pair<std::string, double>> nodes,
                std::vector<std::pair<std::string, std::string>> edges);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<double>& values() const { return values_; }
    // edges as index pairs (a < b), sorted lexicographically
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
        return edges_;
    }
    const std::vector<std::vector<std::size_t>>& adjacency() const {
        return adjacency_;
    }

    const std::string& id(std::size_t i) const { return ids_[i]; }
    double value(std::size_t i) const { return values_[i]; }

    // index of a node id; throws reebgw::error for unknown ids
    std::size_t index_of(const std::string& id) const;
    std::optional<std::size_t> find(const std::string& id) const;

    bool is_connected() const;
    std::size_t component_count() const;
    // |edges| - |nodes| + components
    std::size_t cycle_rank() const;
    // all f values pairwise distinct
    bool is_generic() const;

    bool operator==(const ScalarGraph& other) const = default;

private:
    std::vector<std::string> ids_;      // sorted
    std::vector<double> values_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

enum class Severity { Error, Warning };

struct Violation {
    Severity severity;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const;          // no errors (warnings allowed)
    bool clean() const { return violations.empty(); }
    std::string to_string() const;
};

/// Checks every ScalarGraph invariant; violations are data, not exceptions.
/// Non-generic graphs (tied f values) produce a warning only.
ValidationReport validate(const ScalarGraph& graph);

/// Raw node/edge lists as they appear in a file, before ScalarGraph
/// canonicalization. validate_raw catches problems (duplicate ids,
/// self-loops, ...) that the ScalarGraph constructor rejects.
struct RawGraph {
    std::vector<std::pair<std::string, double>> nodes;
    std::vector<std::pair<std::string, std::string>> edges;
};

ValidationReport validate_raw(const RawGraph& raw);

struct PointCloud {
    std::vector<std::array<double, 3>> points;
    std::string label;
};

enum class ShapeClass { Sphere, Torus, DoubleTorus };

ShapeClass parse_shape_class(const std::string& name);

/// Deterministic synthetic point clouds: points on the named surface plus
/// isotropic noise of amplitude `jitter` (uniform in a ball).
PointCloud synth_shapes(ShapeClass shape, std::size_t n_points, double jitter,
                        std::uint64_t seed);

} // namespace reebgw
