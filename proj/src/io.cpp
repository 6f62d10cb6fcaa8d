#include "reebgw/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reebgw {

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

using nlohmann::json;

json parse_json(const std::string& bytes) {
    try {
        return json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw error("parse error at byte " + std::to_string(e.byte) + ": " +
                    e.what());
    }
}

double require_number(const json& obj, const char* field) {
    if (!obj.contains(field))
        throw error(std::string("schema error: missing field ") + field);
    const json& v = obj.at(field);
    if (!v.is_number())
        throw error(std::string("schema error: field ") + field +
                    " is not a number");
    return v.get<double>();
}

std::string require_string(const json& obj, const char* field) {
    if (!obj.contains(field))
        throw error(std::string("schema error: missing field ") + field);
    const json& v = obj.at(field);
    if (!v.is_string())
        throw error(std::string("schema error: field ") + field +
                    " is not a string");
    return v.get<std::string>();
}

RawGraph raw_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("nodes"))
        throw error("schema error: missing field nodes");
    RawGraph raw;
    for (const json& node : doc.at("nodes")) {
        raw.nodes.emplace_back(require_string(node, "id"),
                               require_number(node, "f"));
    }
    if (doc.contains("edges")) {
        for (const json& edge : doc.at("edges")) {
            if (!edge.is_array() || edge.size() != 2)
                throw error("schema error: edge is not a pair of ids");
            raw.edges.emplace_back(edge.at(0).get<std::string>(),
                                   edge.at(1).get<std::string>());
        }
    }
    return raw;
}

} // namespace

RawGraph load_raw_graph(const std::string& bytes) {
    return raw_from_json(parse_json(bytes));
}

ScalarGraph load_graph(const std::string& bytes) {
    RawGraph raw = load_raw_graph(bytes);
    return ScalarGraph(std::move(raw.nodes), std::move(raw.edges));
}

std::string save_graph(const ScalarGraph& graph) {
    // hand-rolled so reals carry 17 significant digits
    std::ostringstream out;
    out << "{\"nodes\":[";
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        if (i) out << ",";
        out << "{\"id\":" << nlohmann::json(graph.id(i)).dump()
            << ",\"f\":" << format_real(graph.value(i)) << "}";
    }
    out << "],\"edges\":[";
    for (std::size_t e = 0; e < graph.edges().size(); ++e) {
        if (e) out << ",";
        const auto& [a, b] = graph.edges()[e];
        out << "[" << nlohmann::json(graph.id(a)).dump() << ","
            << nlohmann::json(graph.id(b)).dump() << "]";
    }
    out << "]}";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write '" + path + "'");
    out << bytes;
}

ScalarGraph load_graph_file(const std::string& path) {
    try {
        return load_graph(read_file(path));
    } catch (const error& e) {
        throw error(path + ": " + e.what());
    }
}

void save_graph_file(const ScalarGraph& graph, const std::string& path) {
    write_file(path, save_graph(graph));
}

namespace {

double parse_double_token(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw error("bad number '" + tok + "' in " + where);
    }
}

void check_cloud(const PointCloud& cloud) {
    if (cloud.points.empty()) throw error("point cloud is empty");
    for (const auto& p : cloud.points)
        for (double c : p)
            if (!std::isfinite(c)) throw error("non-finite coordinate");
}

} // namespace

PointCloud parse_xyz(const std::string& bytes) {
    PointCloud cloud;
    std::istringstream in(bytes);
    double x, y, z;
    while (in >> x >> y >> z) cloud.points.push_back({x, y, z});
    check_cloud(cloud);
    return cloud;
}

PointCloud parse_csv_cloud(const std::string& bytes) {
    PointCloud cloud;
    std::istringstream in(bytes);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue; // header x,y,z
        }
        std::istringstream ls(line);
        std::array<double, 3> p{};
        std::string tok;
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(ls, tok, ','))
                throw error("csv row with fewer than 3 fields: " + line);
            p[static_cast<std::size_t>(i)] = parse_double_token(tok, "csv row");
        }
        cloud.points.push_back(p);
    }
    check_cloud(cloud);
    return cloud;
}

PointCloud parse_off(const std::string& bytes) {
    std::istringstream in(bytes);
    std::string magic;
    in >> magic;
    if (magic != "OFF") throw error("not an OFF file");
    std::size_t nv = 0, nf = 0, ne = 0;
    in >> nv >> nf >> ne;
    if (!in) throw error("bad OFF header");
    PointCloud cloud;
    cloud.points.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        double x, y, z;
        if (!(in >> x >> y >> z)) throw error("truncated OFF vertex list");
        cloud.points.push_back({x, y, z});
    }
    // faces ignored
    check_cloud(cloud);
    return cloud;
}

PointCloud load_point_cloud_file(const std::string& path) {
    const std::string bytes = read_file(path);
    auto ends_with = [&](const char* suffix) {
        const std::string s(suffix);
        return path.size() >= s.size() &&
               path.compare(path.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".csv")) return parse_csv_cloud(bytes);
    if (ends_with(".off")) return parse_off(bytes);
    return parse_xyz(bytes);
}

} // namespace reebgw
