#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "reebgw/graph.hpp"
#include "reebgw/gw.hpp"
#include "reebgw/metrics.hpp"
#include "reebgw/pimage.hpp"

namespace reebgw {

struct MeasureChoice {
    bool use_pi = true;
    BaselineMeasureKind baseline = BaselineMeasureKind::Uniform;

    std::string name() const {
        return use_pi ? "pi" : measure_kind_name(baseline);
    }
    static MeasureChoice parse(const std::string& name);
};

struct EvalConfig {
    MetricKind metric = MetricKind::SymReebRadius;
    MeasureChoice measure;
    PIParams pi;
    SolverOpts solver;
    double p = 2.0;
    std::vector<std::size_t> k_list = {5};
    int threads = 1;
    std::uint64_t seed = 0;
};

struct CorpusItem {
    std::string name; // file name or synthetic id
    std::string label;
    ScalarGraph graph;
};

/// Distance matrix + node measure of one graph under a config.
struct DecoratedGraph {
    DistanceMatrix matrix;
    NodeMeasure measure;
};

DecoratedGraph decorate_graph(const ScalarGraph& graph, const EvalConfig& config);

/// Load every *.json graph in a directory as a corpus item (sorted by file
/// name); any graph failing validation aborts with the file name.
std::vector<CorpusItem> load_corpus(const std::string& dir);

/// Optional labels CSV `file,label`; corpus items keep label "" if absent.
void apply_labels(std::vector<CorpusItem>& corpus,
                  const std::string& labels_csv);

struct PairwiseResult {
    DistanceMatrix matrix;            // node_order = corpus item names
    std::vector<double> pair_seconds; // upper-triangle order
    double total_seconds = 0.0;
};

/// Symmetric matrix of RGW_p values over a corpus; upper triangle solved,
/// diagonal zero, parallel over pairs with output independent of threads.
PairwiseResult pairwise_matrix(const std::vector<CorpusItem>& corpus,
                               const EvalConfig& config);

/// recall@k: a query succeeds iff any of its k nearest items (self excluded,
/// ties by index) shares its label.
std::map<std::size_t, double> knn_recall(const DistanceMatrix& matrix,
                                         const std::vector<std::string>& labels,
                                         const std::vector<std::size_t>& k_list);

struct AblationRow {
    std::string metric;
    std::string measure;
    double recall = 0.0;
    std::string error; // non-empty if the cell failed
};

struct AblationResult {
    std::vector<AblationRow> rows;
    std::size_t matrix_cache_hits = 0;
    std::size_t matrix_cache_misses = 0;
};

/// Cartesian product of metric and measure choices, one recall row each.
/// Distance matrices are cached per (graph, metric); cell errors are
/// recorded without aborting the table.
AblationResult ablation_run(const std::vector<CorpusItem>& corpus,
                            const std::vector<MetricKind>& metrics,
                            const std::vector<MeasureChoice>& measures,
                            std::size_t k, const EvalConfig& base);

struct SweepCell {
    double sigma;
    int resolution;
    double weight_power;
    double recall = 0.0;
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::size_t best = 0; // index into cells; ties by smallest resolution
};

/// Full sigma x resolution x weight-power grid of recall@k. sigma = 0 is
/// mapped to 1e-6 (the kernel needs sigma > 0).
SweepResult sweep(const std::vector<double>& sigmas,
                  const std::vector<int>& resolutions,
                  const std::vector<double>& powers,
                  const std::vector<CorpusItem>& corpus, std::size_t k,
                  const EvalConfig& base);

struct StabilityLevel {
    double epsilon;
    // per-trial statistics
    std::vector<double> max_delta;        // realized max |delta| of the trial
    std::vector<double> metric_deviation; // max |d' - d| entrywise
    std::vector<double> bottleneck;
    std::vector<double> tv;      // only trials whose pairings survived
    std::vector<double> tv_over_delta; // tv / realized max|delta|, same trials
    std::vector<double> rgw;
    std::size_t skipped_measure_trials = 0;

    double median_tv() const;
    double median_rgw() const;
};

struct StabilityReport {
    std::vector<StabilityLevel> levels; // strictly increasing epsilon
    // Constants fitted at the largest level from the realized per-trial
    // noise (max |delta|), scaled by a 1.25 sampling margin: the fit
    // estimates the max of a ratio distribution from finitely many trials,
    // so a margin-free fit would be broken by construction.
    double m_emp = 0.0;  // d_TV <= M * max|delta|
    double c_emp = 0.0;  // RGW_2 <= C * sqrt(max|delta|)
    bool metric_bound_holds = true;     // deviation <= 2 max|delta|, every trial
    bool bottleneck_bound_holds = true; // d_B <= max|delta|, every trial
    bool measure_bound_holds = true;    // d_TV <= M_emp * max|delta|
    bool rgw_bound_holds = true;        // RGW_2 <= C_emp * sqrt(max|delta|)

    std::string to_csv() const;
};

/// Perturbation experiment: per (level, trial) draw delta uniform in
/// [-eps, eps] per node and record the four statistics of the report.
StabilityReport stability_experiment(const ScalarGraph& graph,
                                     const std::vector<double>& noise_levels,
                                     std::size_t trials, std::uint64_t seed,
                                     const EvalConfig& config);

std::string recall_csv(const std::map<std::size_t, double>& recall);

} // namespace reebgw
