#pragma once

#include <string>
#include <vector>

#include "reebgw/graph.hpp"

namespace reebgw {

// All reals are serialized with 17 significant digits.
std::string format_real(double x);

/// Graph JSON: {"nodes":[{"id":...,"f":...},...],"edges":[[id,id],...]}
ScalarGraph load_graph(const std::string& bytes);
std::string save_graph(const ScalarGraph& graph);

/// Same schema but without ScalarGraph canonicalization, for validation of
/// files that may violate the invariants.
RawGraph load_raw_graph(const std::string& bytes);

ScalarGraph load_graph_file(const std::string& path);
void save_graph_file(const ScalarGraph& graph, const std::string& path);

/// Point clouds: whitespace-separated XYZ text, CSV with header x,y,z,
/// or OFF (vertices only; faces ignored). Format chosen by file extension
/// (.csv / .off / anything else = XYZ).
PointCloud load_point_cloud_file(const std::string& path);
PointCloud parse_xyz(const std::string& bytes);
PointCloud parse_csv_cloud(const std::string& bytes);
PointCloud parse_off(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

} // namespace reebgw
