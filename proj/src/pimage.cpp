#include "reebgw/pimage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "reebgw/io.hpp"

namespace reebgw {

void PIParams::check() const {
    if (!(sigma > 0)) throw error("PI sigma must be > 0");
    if (resolution < 1) throw error("PI resolution must be >= 1");
    if (weight_power < 0) throw error("PI weight_power must be >= 0");
}

std::vector<BPPoint> birth_persistence_transform(
    const ExtendedDiagram& diagram) {
    std::vector<BPPoint> out;
    for (const auto& pt : diagram.points) {
        const double p = std::abs(pt.death - pt.birth);
        if (p == 0.0) continue;
        out.push_back({pt.birth, p, pt.birth_node, pt.death_node});
    }
    return out;
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

PIBounds auto_bounds(const std::vector<BPPoint>& points,
                     const PIParams& params) {
    double b_min = 0.0, b_max = 0.0, p_max = 0.0;
    if (!points.empty()) {
        b_min = b_max = points.front().b;
        for (const auto& pt : points) {
            b_min = std::min(b_min, pt.b);
            b_max = std::max(b_max, pt.b);
            p_max = std::max(p_max, pt.p);
        }
    }
    const double pad = 3.0 * params.sigma;
    return {b_min - pad, b_max + pad, 0.0 - pad, p_max + pad};
}

} // namespace

PIBounds shared_bounds(const std::vector<BPPoint>& a,
                       const std::vector<BPPoint>& b, const PIParams& params) {
    const PIBounds ba = auto_bounds(a, params);
    const PIBounds bb = auto_bounds(b, params);
    return {std::min(ba.b_min, bb.b_min), std::max(ba.b_max, bb.b_max),
            std::min(ba.p_min, bb.p_min), std::max(ba.p_max, bb.p_max)};
}

PersistenceImage build_pi(const std::vector<BPPoint>& points,
                          const PIParams& params) {
    params.check();
    PersistenceImage image;
    image.params = params;
    image.bounds = params.bounds ? *params.bounds : auto_bounds(points, params);

    const std::size_t res = static_cast<std::size_t>(params.resolution);
    const double dx = (image.bounds.b_max - image.bounds.b_min) / static_cast<double>(res);
    const double dy = (image.bounds.p_max - image.bounds.p_min) / static_cast<double>(res);
    image.values.assign(res * res, 0.0);
    image.centers.resize(res * res);
    for (std::size_t iy = 0; iy < res; ++iy)
        for (std::size_t ix = 0; ix < res; ++ix)
            image.centers[iy * res + ix] = {
                image.bounds.b_min + (static_cast<double>(ix) + 0.5) * dx,
                image.bounds.p_min + (static_cast<double>(iy) + 0.5) * dy};

    const double sigma = params.sigma;
    for (const auto& pt : points) {
        const double weight = std::pow(pt.p, params.weight_power);
        // separable rectangle integral of the normalized Gaussian
        std::vector<double> col_mass(res), row_mass(res);
        for (std::size_t ix = 0; ix < res; ++ix) {
            const double x0 = image.bounds.b_min + static_cast<double>(ix) * dx;
            col_mass[ix] = normal_cdf((x0 + dx - pt.b) / sigma) -
                           normal_cdf((x0 - pt.b) / sigma);
        }
        for (std::size_t iy = 0; iy < res; ++iy) {
            const double y0 = image.bounds.p_min + static_cast<double>(iy) * dy;
            row_mass[iy] = normal_cdf((y0 + dy - pt.p) / sigma) -
                           normal_cdf((y0 - pt.p) / sigma);
        }
        for (std::size_t iy = 0; iy < res; ++iy)
            for (std::size_t ix = 0; ix < res; ++ix)
                image.values[iy * res + ix] += weight * row_mass[iy] * col_mass[ix];
    }
    return image;
}

double PersistenceImage::l1_distance(const PersistenceImage& other) const {
    if (values.size() != other.values.size())
        throw error("persistence images have different resolutions");
    double total = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
        total += std::abs(values[k] - other.values[k]);
    return total;
}

std::string PersistenceImage::to_json() const {
    std::ostringstream out;
    out << "{\"sigma\":" << format_real(params.sigma)
        << ",\"resolution\":" << params.resolution
        << ",\"weight_power\":" << format_real(params.weight_power)
        << ",\"bounds\":[" << format_real(bounds.b_min) << ","
        << format_real(bounds.b_max) << "," << format_real(bounds.p_min) << ","
        << format_real(bounds.p_max) << "],\"values\":[";
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k) out << ",";
        out << format_real(values[k]);
    }
    out << "]}";
    return out.str();
}

std::string NodeMeasure::to_json() const {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < node_order.size(); ++i) {
        if (i) out << ",";
        out << nlohmann::json(node_order[i]).dump() << ":"
            << format_real(probabilities[i]);
    }
    out << "}";
    return out.str();
}

namespace {

NodeMeasure normalize_scores(const ScalarGraph& graph,
                             const std::vector<double>& scores,
                             const char* what) {
    double total = 0.0;
    for (double s : scores) total += s;
    if (!(total > 0)) throw error(std::string(what) + ": all scores vanish");
    NodeMeasure measure;
    measure.node_order = graph.ids();
    measure.probabilities.resize(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
        measure.probabilities[i] = scores[i] / total;
    return measure;
}

} // namespace

NodeMeasure pi_measure(const ScalarGraph& graph, const ExtendedDiagram& diagram,
                       const PIParams& params) {
    const std::vector<BPPoint> points = birth_persistence_transform(diagram);
    if (points.empty())
        throw error("pi_measure: diagram has no positive-persistence points");
    const PersistenceImage image = build_pi(points, params);

    const std::size_t res = static_cast<std::size_t>(image.params.resolution);
    const double dx =
        (image.bounds.b_max - image.bounds.b_min) / static_cast<double>(res);
    const double dy =
        (image.bounds.p_max - image.bounds.p_min) / static_cast<double>(res);

    std::vector<double> contrib(graph.node_count(), 0.0);
    std::vector<double> col_mass(res), row_mass(res);
    for (const auto& pt : points) {
        // alignment = <image, unit-mass pixelization of the point>, using
        // the same exact rectangle integrals as the image itself so the
        // score stays meaningful when sigma is far below the pixel size
        for (std::size_t ix = 0; ix < res; ++ix) {
            const double x0 = image.bounds.b_min + static_cast<double>(ix) * dx;
            col_mass[ix] = normal_cdf((x0 + dx - pt.b) / params.sigma) -
                           normal_cdf((x0 - pt.b) / params.sigma);
        }
        for (std::size_t iy = 0; iy < res; ++iy) {
            const double y0 = image.bounds.p_min + static_cast<double>(iy) * dy;
            row_mass[iy] = normal_cdf((y0 + dy - pt.p) / params.sigma) -
                           normal_cdf((y0 - pt.p) / params.sigma);
        }
        double alignment = 0.0;
        for (std::size_t iy = 0; iy < res; ++iy)
            for (std::size_t ix = 0; ix < res; ++ix)
                alignment +=
                    image.values[iy * res + ix] * row_mass[iy] * col_mass[ix];
        contrib[graph.index_of(pt.birth_node)] += alignment;
        contrib[graph.index_of(pt.death_node)] += alignment;
    }
    return normalize_scores(graph, contrib, "pi_measure");
}

BaselineMeasureKind parse_measure_kind(const std::string& name) {
    if (name == "uniform") return BaselineMeasureKind::Uniform;
    if (name == "intensity") return BaselineMeasureKind::Intensity;
    if (name == "degree") return BaselineMeasureKind::Degree;
    if (name == "lifespan") return BaselineMeasureKind::Lifespan;
    throw error("unknown measure kind '" + name + "'");
}

std::string measure_kind_name(BaselineMeasureKind kind) {
    switch (kind) {
        case BaselineMeasureKind::Uniform: return "uniform";
        case BaselineMeasureKind::Intensity: return "intensity";
        case BaselineMeasureKind::Degree: return "degree";
        case BaselineMeasureKind::Lifespan: return "lifespan";
    }
    throw error("bad measure kind");
}

NodeMeasure baseline_measure(const ScalarGraph& graph,
                             const ExtendedDiagram* diagram,
                             BaselineMeasureKind kind) {
    const std::size_t n = graph.node_count();
    std::vector<double> scores(n, 0.0);
    switch (kind) {
        case BaselineMeasureKind::Uniform:
            std::fill(scores.begin(), scores.end(), 1.0);
            break;
        case BaselineMeasureKind::Intensity: {
            const double f_min =
                *std::min_element(graph.values().begin(), graph.values().end());
            for (std::size_t i = 0; i < n; ++i)
                scores[i] = graph.value(i) - f_min;
            break;
        }
        case BaselineMeasureKind::Degree:
            for (std::size_t i = 0; i < n; ++i)
                scores[i] = static_cast<double>(graph.adjacency()[i].size());
            break;
        case BaselineMeasureKind::Lifespan: {
            if (!diagram)
                throw error("lifespan measure requires a persistence diagram");
            for (const auto& pt : birth_persistence_transform(*diagram)) {
                scores[graph.index_of(pt.birth_node)] += pt.p;
                scores[graph.index_of(pt.death_node)] += pt.p;
            }
            break;
        }
    }
    return normalize_scores(graph, scores, measure_kind_name(kind).c_str());
}

double total_variation(const NodeMeasure& a, const NodeMeasure& b) {
    if (a.node_order != b.node_order)
        throw error("total_variation: node orders differ");
    double s = 0.0;
    for (std::size_t i = 0; i < a.probabilities.size(); ++i)
        s += std::abs(a.probabilities[i] - b.probabilities[i]);
    return 0.5 * s;
}

} // namespace reebgw
