#include "reebgw/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "reebgw/io.hpp"
#include "reebgw/parallel.hpp"
#include "reebgw/persistence.hpp"
#include "reebgw/rng.hpp"

namespace reebgw {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

NodeMeasure make_measure(const ScalarGraph& graph, const MeasureChoice& choice,
                         const PIParams& pi, const ExtendedDiagram* diagram) {
    ExtendedDiagram local;
    if (diagram == nullptr &&
        (choice.use_pi || choice.baseline == BaselineMeasureKind::Lifespan)) {
        local = extended_persistence(graph);
        diagram = &local;
    }
    if (choice.use_pi) return pi_measure(graph, *diagram, pi);
    return baseline_measure(graph, diagram, choice.baseline);
}

/// RGW_p matrix over already decorated graphs; upper triangle only,
/// per-pair seeds independent of scheduling.
PairwiseResult rgw_matrix(const std::vector<std::string>& names,
                          const std::vector<DecoratedGraph>& decorated,
                          const EvalConfig& config) {
    const std::size_t n = decorated.size();
    PairwiseResult result;
    result.matrix.node_order = names;
    result.matrix.values.assign(n * n, 0.0);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    result.pair_seconds.assign(pairs.size(), 0.0);

    std::vector<double> values(pairs.size(), 0.0);
    const auto wall_start = std::chrono::steady_clock::now();
    parallel_for(pairs.size(), config.threads, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        SolverOpts opts = config.solver;
        opts.threads = 1;
        opts.seed = Rng(config.seed).fork(k).next_u64();
        const auto start = std::chrono::steady_clock::now();
        const GWResult r =
            solve_rgw(decorated[i].matrix, decorated[j].matrix,
                      decorated[i].measure, decorated[j].measure, config.p,
                      opts);
        result.pair_seconds[k] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        values[k] = r.distance;
    });
    result.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      wall_start)
            .count();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        result.matrix.at(i, j) = values[k];
        result.matrix.at(j, i) = values[k];
    }
    return result;
}

double cell_recall(const std::vector<CorpusItem>& corpus,
                   const std::vector<DecoratedGraph>& decorated,
                   const EvalConfig& config, std::size_t k) {
    std::vector<std::string> names, labels;
    for (const auto& item : corpus) {
        names.push_back(item.name);
        labels.push_back(item.label);
    }
    const PairwiseResult pw = rgw_matrix(names, decorated, config);
    return knn_recall(pw.matrix, labels, {k}).at(k);
}

} // namespace

MeasureChoice MeasureChoice::parse(const std::string& name) {
    MeasureChoice choice;
    if (name == "pi") {
        choice.use_pi = true;
    } else {
        choice.use_pi = false;
        choice.baseline = parse_measure_kind(name);
    }
    return choice;
}

DecoratedGraph decorate_graph(const ScalarGraph& graph,
                              const EvalConfig& config) {
    DecoratedGraph out;
    out.matrix = distance_matrix(graph, config.metric, config.threads);
    out.measure = make_measure(graph, config.measure, config.pi, nullptr);
    return out;
}

std::vector<CorpusItem> load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());

    std::vector<CorpusItem> corpus;
    for (const std::string& path : files) {
        const std::string name = fs::path(path).filename().string();
        try {
            const RawGraph raw = load_raw_graph(read_file(path));
            const ValidationReport report = validate_raw(raw);
            if (!report.ok())
                throw error("invalid graph: " + report.to_string());
            corpus.push_back({name, "", ScalarGraph(raw.nodes, raw.edges)});
        } catch (const std::exception& ex) {
            throw error(name + ": " + ex.what());
        }
    }
    return corpus;
}

void apply_labels(std::vector<CorpusItem>& corpus,
                  const std::string& labels_csv) {
    std::map<std::string, std::string> labels;
    std::istringstream in(labels_csv);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line == "file,label") continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw error("labels: malformed line '" + line + "'");
        labels[line.substr(0, comma)] = line.substr(comma + 1);
    }
    for (auto& item : corpus) {
        const auto it = labels.find(item.name);
        if (it != labels.end()) item.label = it->second;
    }
}

PairwiseResult pairwise_matrix(const std::vector<CorpusItem>& corpus,
                               const EvalConfig& config) {
    if (corpus.size() < 2) throw error("pairwise: need at least 2 graphs");
    std::vector<std::string> names;
    for (const auto& item : corpus) names.push_back(item.name);

    std::vector<DecoratedGraph> decorated(corpus.size());
    parallel_for(corpus.size(), config.threads, [&](std::size_t i) {
        EvalConfig local = config;
        local.threads = 1;
        decorated[i] = decorate_graph(corpus[i].graph, local);
    });
    return rgw_matrix(names, decorated, config);
}

std::map<std::size_t, double> knn_recall(
    const DistanceMatrix& matrix, const std::vector<std::string>& labels,
    const std::vector<std::size_t>& k_list) {
    const std::size_t n = matrix.size();
    if (labels.size() != n)
        throw error("knn: labels do not cover the matrix");
    for (std::size_t k : k_list)
        if (k < 1 || k >= n)
            throw error("knn: k must be in [1, corpus size - 1]");

    std::map<std::size_t, double> recall;
    for (std::size_t k : k_list) recall[k] = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < n; ++i)
            if (i != q) order.push_back(i);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) {
                      return std::make_pair(matrix.at(q, a), a) <
                             std::make_pair(matrix.at(q, b), b);
                  });
        for (std::size_t k : k_list) {
            bool hit = false;
            for (std::size_t r = 0; r < k && !hit; ++r)
                hit = labels[order[r]] == labels[q];
            if (hit) recall[k] += 1.0;
        }
    }
    for (auto& [k, value] : recall) value /= static_cast<double>(n);
    return recall;
}

AblationResult ablation_run(const std::vector<CorpusItem>& corpus,
                            const std::vector<MetricKind>& metrics,
                            const std::vector<MeasureChoice>& measures,
                            std::size_t k, const EvalConfig& base) {
    AblationResult result;
    // distance matrices depend only on (graph, metric): cache across cells
    std::map<std::pair<std::size_t, int>, DistanceMatrix> matrix_cache;
    std::vector<ExtendedDiagram> diagrams(corpus.size());
    std::vector<bool> have_diagram(corpus.size(), false);

    for (MetricKind metric : metrics) {
        for (const MeasureChoice& measure : measures) {
            AblationRow row;
            row.metric = metric_kind_name(metric);
            row.measure = measure.name();
            try {
                std::vector<DecoratedGraph> decorated(corpus.size());
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    const auto key =
                        std::make_pair(i, static_cast<int>(metric));
                    auto it = matrix_cache.find(key);
                    if (it == matrix_cache.end()) {
                        ++result.matrix_cache_misses;
                        it = matrix_cache
                                 .emplace(key,
                                          distance_matrix(corpus[i].graph,
                                                          metric,
                                                          base.threads))
                                 .first;
                    } else {
                        ++result.matrix_cache_hits;
                    }
                    decorated[i].matrix = it->second;
                    if (!have_diagram[i]) {
                        diagrams[i] = extended_persistence(corpus[i].graph);
                        have_diagram[i] = true;
                    }
                    decorated[i].measure = make_measure(
                        corpus[i].graph, measure, base.pi, &diagrams[i]);
                }
                EvalConfig config = base;
                config.metric = metric;
                config.measure = measure;
                row.recall = cell_recall(corpus, decorated, config, k);
            } catch (const std::exception& ex) {
                row.error = ex.what();
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

SweepResult sweep(const std::vector<double>& sigmas,
                  const std::vector<int>& resolutions,
                  const std::vector<double>& powers,
                  const std::vector<CorpusItem>& corpus, std::size_t k,
                  const EvalConfig& base) {
    SweepResult result;
    std::vector<DistanceMatrix> matrices(corpus.size());
    parallel_for(corpus.size(), base.threads, [&](std::size_t i) {
        matrices[i] = distance_matrix(corpus[i].graph, base.metric, 1);
    });
    std::vector<ExtendedDiagram> diagrams(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i)
        diagrams[i] = extended_persistence(corpus[i].graph);

    for (double sigma : sigmas) {
        for (int resolution : resolutions) {
            for (double power : powers) {
                SweepCell cell{sigma, resolution, power, 0.0, ""};
                try {
                    EvalConfig config = base;
                    config.measure = MeasureChoice{true, {}};
                    config.pi.sigma = sigma > 0 ? sigma : 1e-6;
                    config.pi.resolution = resolution;
                    config.pi.weight_power = power;
                    std::vector<DecoratedGraph> decorated(corpus.size());
                    for (std::size_t i = 0; i < corpus.size(); ++i) {
                        decorated[i].matrix = matrices[i];
                        decorated[i].measure = pi_measure(
                            corpus[i].graph, diagrams[i], config.pi);
                    }
                    cell.recall = cell_recall(corpus, decorated, config, k);
                } catch (const std::exception& ex) {
                    cell.error = ex.what();
                }
                result.cells.push_back(cell);
            }
        }
    }
    result.best = 0;
    bool have_best = false;
    for (std::size_t c = 0; c < result.cells.size(); ++c) {
        const SweepCell& cell = result.cells[c];
        if (!cell.error.empty()) continue;
        const SweepCell& best = result.cells[result.best];
        if (!have_best || cell.recall > best.recall ||
            (cell.recall == best.recall && cell.resolution < best.resolution)) {
            result.best = c;
            have_best = true;
        }
    }
    return result;
}

double StabilityLevel::median_tv() const { return median(tv); }
double StabilityLevel::median_rgw() const { return median(rgw); }

std::string StabilityReport::to_csv() const {
    std::string out =
        "epsilon,max_metric_deviation,max_bottleneck,median_tv,median_rgw,"
        "skipped_measure_trials\n";
    for (const StabilityLevel& level : levels) {
        const auto vec_max = [](const std::vector<double>& v) {
            return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
        };
        out += format_real(level.epsilon) + "," +
               format_real(vec_max(level.metric_deviation)) + "," +
               format_real(vec_max(level.bottleneck)) + "," +
               format_real(level.median_tv()) + "," +
               format_real(level.median_rgw()) + "," +
               std::to_string(level.skipped_measure_trials) + "\n";
    }
    return out;
}

StabilityReport stability_experiment(const ScalarGraph& graph,
                                     const std::vector<double>& noise_levels,
                                     std::size_t trials, std::uint64_t seed,
                                     const EvalConfig& config) {
    for (std::size_t l = 1; l < noise_levels.size(); ++l)
        if (!(noise_levels[l] > noise_levels[l - 1]))
            throw error("stability: noise levels must be strictly increasing");
    if (noise_levels.empty() || trials == 0)
        throw error("stability: need at least one level and one trial");

    const DistanceMatrix sym0 =
        distance_matrix(graph, MetricKind::SymReebRadius, config.threads);
    const DistanceMatrix cfg0 =
        distance_matrix(graph, config.metric, config.threads);
    const ExtendedDiagram diag0 = extended_persistence(graph);
    const NodeMeasure measure0 = pi_measure(graph, diag0, config.pi);

    // the structural pairing of a diagram: which node pairs carry each class
    const auto pairing = [](const ExtendedDiagram& d) {
        std::multiset<std::tuple<int, std::string, std::string>> keys;
        for (const DiagramPoint& pt : d.points)
            keys.emplace(static_cast<int>(pt.cls), pt.birth_node,
                         pt.death_node);
        return keys;
    };
    const auto pairing0 = pairing(diag0);

    StabilityReport report;
    const Rng base(seed);
    for (std::size_t l = 0; l < noise_levels.size(); ++l) {
        StabilityLevel level;
        level.epsilon = noise_levels[l];
        level.max_delta.assign(trials, 0.0);
        level.metric_deviation.assign(trials, 0.0);
        level.bottleneck.assign(trials, 0.0);
        level.rgw.assign(trials, 0.0);

        std::vector<double> tv(trials, -1.0); // -1 marks a skipped trial
        const Rng level_rng = base.fork(l);
        parallel_for(trials, config.threads, [&](std::size_t t) {
            Rng rng = level_rng.fork(t);
            std::vector<std::pair<std::string, double>> nodes;
            double max_delta = 0.0;
            for (std::size_t i = 0; i < graph.node_count(); ++i) {
                const double delta =
                    level.epsilon * (2.0 * rng.uniform() - 1.0);
                max_delta = std::max(max_delta, std::abs(delta));
                nodes.emplace_back(graph.id(i), graph.value(i) + delta);
            }
            std::vector<std::pair<std::string, std::string>> edges;
            for (const auto& [a, b] : graph.edges())
                edges.emplace_back(graph.id(a), graph.id(b));
            const ScalarGraph perturbed(std::move(nodes), std::move(edges));
            level.max_delta[t] = max_delta;

            const DistanceMatrix sym1 =
                distance_matrix(perturbed, MetricKind::SymReebRadius, 1);
            double dev = 0.0;
            for (std::size_t e = 0; e < sym0.values.size(); ++e)
                dev = std::max(dev,
                               std::abs(sym1.values[e] - sym0.values[e]));
            level.metric_deviation[t] = dev;

            const ExtendedDiagram diag1 = extended_persistence(perturbed);
            level.bottleneck[t] = bottleneck_distance(diag0, diag1);

            const bool same_pairing = pairing(diag1) == pairing0;
            NodeMeasure measure1 = measure0;
            if (same_pairing) {
                measure1 = pi_measure(perturbed, diag1, config.pi);
                tv[t] = total_variation(measure0, measure1);
            }

            SolverOpts opts = config.solver;
            opts.threads = 1;
            opts.seed = Rng(seed).fork(1000003 * l + t).next_u64();
            const DistanceMatrix cfg1 =
                distance_matrix(perturbed, config.metric, 1);
            level.rgw[t] =
                solve_rgw(cfg0, cfg1, measure0, measure1, 2.0, opts).distance;
        });
        for (std::size_t t = 0; t < trials; ++t) {
            if (tv[t] >= 0) {
                level.tv.push_back(tv[t]);
                if (level.max_delta[t] > 0)
                    level.tv_over_delta.push_back(tv[t] / level.max_delta[t]);
            } else {
                ++level.skipped_measure_trials;
            }
        }
        report.levels.push_back(std::move(level));
    }

    // hard bounds against the realized noise of each trial
    constexpr double kSlack = 1e-9;
    for (const StabilityLevel& level : report.levels) {
        for (std::size_t t = 0; t < trials; ++t) {
            if (level.metric_deviation[t] > 2.0 * level.max_delta[t] + kSlack)
                report.metric_bound_holds = false;
            if (level.bottleneck[t] > level.max_delta[t] + kSlack)
                report.bottleneck_bound_holds = false;
        }
    }

    // soft bounds: constants fitted at the largest level with a sampling
    // margin (the fit is a max over finitely many trials)
    constexpr double kFitMargin = 1.25;
    const StabilityLevel& top = report.levels.back();
    for (std::size_t t = 0; t < trials; ++t) {
        const double delta = top.max_delta[t];
        if (delta <= 0.0) continue;
        report.c_emp = std::max(report.c_emp, top.rgw[t] / std::sqrt(delta));
    }
    for (double ratio : top.tv_over_delta)
        report.m_emp = std::max(report.m_emp, ratio);
    report.m_emp *= kFitMargin;
    report.c_emp *= kFitMargin;
    for (std::size_t l = 0; l + 1 < report.levels.size(); ++l) {
        const StabilityLevel& level = report.levels[l];
        for (double ratio : level.tv_over_delta)
            if (ratio > report.m_emp + kSlack)
                report.measure_bound_holds = false;
        for (std::size_t t = 0; t < trials; ++t) {
            const double delta = level.max_delta[t];
            if (delta <= 0.0) continue;
            if (level.rgw[t] > report.c_emp * std::sqrt(delta) + kSlack)
                report.rgw_bound_holds = false;
        }
    }
    return report;
}

std::string recall_csv(const std::map<std::size_t, double>& recall) {
    std::string out = "k,recall\n";
    for (const auto& [k, value] : recall)
        out += std::to_string(k) + "," + format_real(value) + "\n";
    return out;
}

} // namespace reebgw
