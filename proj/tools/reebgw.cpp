// reebgw: command-line front end for the Reeb Gromov-Wasserstein toolkit.
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reebgw/graph.hpp"
#include "reebgw/gw.hpp"
#include "reebgw/harness.hpp"
#include "reebgw/io.hpp"
#include "reebgw/mapper.hpp"
#include "reebgw/metrics.hpp"
#include "reebgw/persistence.hpp"
#include "reebgw/pimage.hpp"

namespace {

using namespace reebgw;

struct CommonOpts {
    int threads = 1;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("--threads", common.threads, "Worker thread count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", common.seed, "Random seed");
}

struct PIOpts {
    double sigma = 0.1;
    int resolution = 10;
    double weight_power = 1.0;
};

void add_pi(CLI::App* cmd, PIOpts& pi) {
    cmd->add_option("--sigma", pi.sigma, "PI Gaussian bandwidth");
    cmd->add_option("--resolution", pi.resolution, "PI grid resolution");
    cmd->add_option("--weight-power", pi.weight_power,
                    "PI weight w(b,p) = p^power");
}

PIParams pi_params(const PIOpts& pi) {
    PIParams params;
    params.sigma = pi.sigma;
    params.resolution = pi.resolution;
    params.weight_power = pi.weight_power;
    return params;
}

struct SolverCliOpts {
    double p = 2.0;
    double tol = 1e-9;
    std::size_t max_iter = 1000;
    std::size_t restarts = 8;
    std::string solver = "cg";
    double epsilon_reg = 1e-2;
};

void add_solver(CLI::App* cmd, SolverCliOpts& opts) {
    cmd->add_option("--p", opts.p, "Distortion exponent p")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", opts.tol, "Convergence tolerance");
    cmd->add_option("--max-iter", opts.max_iter, "Maximum solver iterations");
    cmd->add_option("--restarts", opts.restarts, "Solver restarts");
    cmd->add_option("--solver", opts.solver, "Inner solver: cg or entropic")
        ->check(CLI::IsMember({"cg", "entropic"}));
    cmd->add_option("--epsilon-reg", opts.epsilon_reg,
                    "Entropic regularization strength");
}

SolverOpts solver_opts(const SolverCliOpts& cli, const CommonOpts& common) {
    SolverOpts opts;
    opts.tol = cli.tol;
    opts.max_iter = cli.max_iter;
    opts.restarts = cli.restarts;
    opts.seed = common.seed;
    opts.solver = cli.solver == "entropic" ? InnerSolver::Entropic
                                           : InnerSolver::ConditionalGradientExact;
    opts.epsilon_reg = cli.epsilon_reg;
    opts.threads = common.threads;
    return opts;
}

EvalConfig eval_config(const std::string& metric, const std::string& measure,
                       const PIOpts& pi, const SolverCliOpts& solver,
                       const CommonOpts& common) {
    EvalConfig config;
    config.metric = parse_metric_kind(metric);
    config.measure = MeasureChoice::parse(measure);
    config.pi = pi_params(pi);
    config.solver = solver_opts(solver, common);
    config.solver.threads = 1;
    config.p = solver.p;
    config.threads = common.threads;
    config.seed = common.seed;
    return config;
}

void emit(const std::string& output, const std::string& bytes) {
    if (output.empty() || output == "-")
        std::cout << bytes;
    else
        write_file(output, bytes);
}

std::vector<CorpusItem> corpus_with_labels(const std::string& dir,
                                           const std::string& labels) {
    std::vector<CorpusItem> corpus = load_corpus(dir);
    if (!labels.empty()) apply_labels(corpus, read_file(labels));
    return corpus;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reeb Gromov-Wasserstein distance toolkit"};
    app.require_subcommand(1);

    // ---- graph validate ----
    auto* graph_cmd = app.add_subcommand("graph", "Graph file utilities");
    graph_cmd->require_subcommand(1);
    auto* validate_cmd =
        graph_cmd->add_subcommand("validate", "Validate a scalar graph file");
    std::string validate_input;
    CommonOpts validate_common;
    validate_cmd->add_option("input", validate_input, "Graph JSON file")
        ->required();
    add_common(validate_cmd, validate_common);

    // ---- mapper ----
    auto* mapper_cmd =
        app.add_subcommand("mapper", "Build a Mapper graph from a point cloud");
    std::string mapper_input, mapper_shape, mapper_output;
    std::size_t mapper_points = 2000;
    double mapper_jitter = 0.0;
    MapperParams mapper_params;
    std::string mapper_ecc = "2";
    CommonOpts mapper_common;
    mapper_cmd->add_option("input", mapper_input,
                           "Point cloud file (.xyz/.csv/.off)");
    mapper_cmd->add_option("--shape", mapper_shape,
                           "Synthetic shape: sphere, torus, double-torus");
    mapper_cmd->add_option("--points", mapper_points, "Synthetic point count");
    mapper_cmd->add_option("--jitter", mapper_jitter, "Synthetic noise amplitude");
    mapper_cmd->add_option("--ecc-p", mapper_ecc,
                           "Eccentricity exponent (number or 'inf')");
    mapper_cmd->add_option("--intervals", mapper_params.n_intervals,
                           "Cover interval count");
    mapper_cmd->add_option("--overlap", mapper_params.overlap,
                           "Cover overlap fraction in [0,1)");
    mapper_cmd->add_option("--cluster-eps", mapper_params.cluster_eps,
                           "Single-linkage threshold (<=0 = auto)");
    mapper_cmd->add_option("--sample", mapper_params.sample_n,
                           "Subsample size (0 disables)");
    mapper_cmd->add_flag("--midpoint-values", mapper_params.midpoint_values,
                         "Use interval midpoints as node values");
    mapper_cmd->add_flag("--keep-components", mapper_params.keep_all_components,
                         "Keep all connected components");
    mapper_cmd->add_option("-o,--output", mapper_output, "Output graph JSON");
    add_common(mapper_cmd, mapper_common);

    // ---- metric ----
    auto* metric_cmd =
        app.add_subcommand("metric", "All-pairs intra-graph distance matrix");
    std::string metric_input, metric_kind = "sym-reeb-radius", metric_output;
    CommonOpts metric_common;
    metric_cmd->add_option("input", metric_input, "Graph JSON file")->required();
    metric_cmd->add_option("--kind", metric_kind,
                           "reeb-radius, sym-reeb-radius, max-sym-reeb-radius, "
                           "reeb-distance, shortest-path");
    metric_cmd->add_option("-o,--output", metric_output, "Output matrix CSV");
    add_common(metric_cmd, metric_common);

    // ---- persistence ----
    auto* pers_cmd =
        app.add_subcommand("persistence", "Extended persistence diagram");
    std::string pers_input, pers_output, pers_compare, pers_dist = "bottleneck";
    bool pers_pooled = false;
    CommonOpts pers_common;
    pers_cmd->add_option("input", pers_input, "Graph JSON file")->required();
    pers_cmd->add_option("-o,--output", pers_output, "Output diagram JSON");
    pers_cmd->add_option("--compare", pers_compare,
                         "Second diagram JSON; print the diagram distance");
    pers_cmd->add_option("--distance", pers_dist, "bottleneck or w1")
        ->check(CLI::IsMember({"bottleneck", "w1"}));
    pers_cmd->add_flag("--pooled", pers_pooled,
                       "Match all classes jointly instead of class-by-class");
    add_common(pers_cmd, pers_common);

    // ---- pimage ----
    auto* pimage_cmd =
        app.add_subcommand("pimage", "Persistence image of a diagram");
    std::string pimage_input, pimage_output;
    PIOpts pimage_pi;
    CommonOpts pimage_common;
    pimage_cmd->add_option("input", pimage_input, "Diagram JSON file")
        ->required();
    add_pi(pimage_cmd, pimage_pi);
    pimage_cmd->add_option("-o,--output", pimage_output, "Output image JSON");
    add_common(pimage_cmd, pimage_common);

    // ---- measure ----
    auto* measure_cmd =
        app.add_subcommand("measure", "Node probability measure of a graph");
    std::string measure_input, measure_kind = "pi", measure_output;
    PIOpts measure_pi;
    CommonOpts measure_common;
    measure_cmd->add_option("input", measure_input, "Graph JSON file")
        ->required();
    measure_cmd->add_option("--kind", measure_kind,
                            "pi, uniform, intensity, degree, lifespan");
    add_pi(measure_cmd, measure_pi);
    measure_cmd->add_option("-o,--output", measure_output,
                            "Output measure JSON");
    add_common(measure_cmd, measure_common);

    // ---- rgw ----
    auto* rgw_cmd =
        app.add_subcommand("rgw", "RGW_p distance between two graphs");
    std::string rgw_a, rgw_b, rgw_metric = "sym-reeb-radius",
                             rgw_measure = "pi", rgw_plan_output;
    PIOpts rgw_pi;
    SolverCliOpts rgw_solver;
    CommonOpts rgw_common;
    rgw_cmd->add_option("first", rgw_a, "First graph JSON")->required();
    rgw_cmd->add_option("second", rgw_b, "Second graph JSON")->required();
    rgw_cmd->add_option("--metric", rgw_metric, "Intra-graph metric kind");
    rgw_cmd->add_option("--measure", rgw_measure, "Node measure kind");
    add_pi(rgw_cmd, rgw_pi);
    add_solver(rgw_cmd, rgw_solver);
    rgw_cmd->add_option("--plan", rgw_plan_output, "Write the coupling CSV");
    add_common(rgw_cmd, rgw_common);

    // ---- pairwise ----
    auto* pairwise_cmd =
        app.add_subcommand("pairwise", "Pairwise RGW matrix over a graph dir");
    std::string pw_dir, pw_metric = "sym-reeb-radius", pw_measure = "pi",
                        pw_output;
    PIOpts pw_pi;
    SolverCliOpts pw_solver;
    CommonOpts pw_common;
    pairwise_cmd->add_option("dir", pw_dir, "Directory of graph JSON files")
        ->required();
    pairwise_cmd->add_option("--metric", pw_metric, "Intra-graph metric kind");
    pairwise_cmd->add_option("--measure", pw_measure, "Node measure kind");
    add_pi(pairwise_cmd, pw_pi);
    add_solver(pairwise_cmd, pw_solver);
    pairwise_cmd->add_option("-o,--output", pw_output, "Output matrix CSV");
    add_common(pairwise_cmd, pw_common);

    // ---- knn-eval ----
    auto* knn_cmd = app.add_subcommand("knn-eval", "recall@k of a matrix");
    std::string knn_matrix, knn_labels, knn_output;
    std::vector<std::size_t> knn_k = {5};
    CommonOpts knn_common;
    knn_cmd->add_option("--matrix", knn_matrix, "Pairwise matrix CSV")
        ->required();
    knn_cmd->add_option("--labels", knn_labels, "Labels CSV (file,label)")
        ->required();
    knn_cmd->add_option("--k", knn_k, "k values");
    knn_cmd->add_option("-o,--output", knn_output, "Output recall CSV");
    add_common(knn_cmd, knn_common);

    // ---- ablation ----
    auto* abl_cmd =
        app.add_subcommand("ablation", "Recall table over metric x measure");
    std::string abl_dir, abl_labels, abl_output;
    std::vector<std::string> abl_metrics = {"sym-reeb-radius"};
    std::vector<std::string> abl_measures = {"pi", "uniform"};
    std::size_t abl_k = 20;
    PIOpts abl_pi;
    SolverCliOpts abl_solver;
    CommonOpts abl_common;
    abl_cmd->add_option("dir", abl_dir, "Directory of graph JSON files")
        ->required();
    abl_cmd->add_option("--labels", abl_labels, "Labels CSV")->required();
    abl_cmd->add_option("--metrics", abl_metrics, "Metric kinds to ablate");
    abl_cmd->add_option("--measures", abl_measures, "Measure kinds to ablate");
    abl_cmd->add_option("--k", abl_k, "recall@k cutoff");
    add_pi(abl_cmd, abl_pi);
    add_solver(abl_cmd, abl_solver);
    abl_cmd->add_option("-o,--output", abl_output, "Output table CSV");
    add_common(abl_cmd, abl_common);

    // ---- sweep ----
    auto* sweep_cmd =
        app.add_subcommand("sweep", "PI hyperparameter grid of recall@k");
    std::string sweep_dir, sweep_labels, sweep_output,
        sweep_metric = "sym-reeb-radius";
    std::vector<double> sweep_sigmas = {0, 0.01, 0.02, 0.05, 0.1, 0.5, 1, 2};
    std::vector<int> sweep_res = {10, 20, 50};
    std::vector<double> sweep_powers = {0, 0.1, 0.5, 1, 1.5, 2};
    std::size_t sweep_k = 20;
    SolverCliOpts sweep_solver;
    CommonOpts sweep_common;
    sweep_cmd->add_option("dir", sweep_dir, "Directory of graph JSON files")
        ->required();
    sweep_cmd->add_option("--labels", sweep_labels, "Labels CSV")->required();
    sweep_cmd->add_option("--metric", sweep_metric, "Intra-graph metric kind");
    sweep_cmd->add_option("--sigmas", sweep_sigmas, "Bandwidth grid");
    sweep_cmd->add_option("--resolutions", sweep_res, "Resolution grid");
    sweep_cmd->add_option("--powers", sweep_powers, "Weight power grid");
    sweep_cmd->add_option("--k", sweep_k, "recall@k cutoff");
    add_solver(sweep_cmd, sweep_solver);
    sweep_cmd->add_option("-o,--output", sweep_output, "Output grid CSV");
    add_common(sweep_cmd, sweep_common);

    // ---- stability ----
    auto* stab_cmd =
        app.add_subcommand("stability", "Perturbation stability experiment");
    std::string stab_input, stab_output, stab_metric = "sym-reeb-radius";
    std::vector<double> stab_levels = {0.001, 0.002, 0.005, 0.01, 0.02};
    std::size_t stab_trials = 100;
    PIOpts stab_pi;
    SolverCliOpts stab_solver;
    CommonOpts stab_common;
    stab_cmd->add_option("input", stab_input, "Graph JSON file")->required();
    stab_cmd->add_option("--levels", stab_levels, "Noise levels (increasing)");
    stab_cmd->add_option("--trials", stab_trials, "Trials per level");
    stab_cmd->add_option("--metric", stab_metric, "Intra-graph metric kind");
    add_pi(stab_cmd, stab_pi);
    add_solver(stab_cmd, stab_solver);
    stab_cmd->add_option("-o,--output", stab_output, "Output report CSV");
    add_common(stab_cmd, stab_common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate_cmd) {
            const RawGraph raw = load_raw_graph(read_file(validate_input));
            const ValidationReport report = validate_raw(raw);
            std::cout << report.to_string();
            if (report.ok()) {
                std::cout << "ok\n";
                return 0;
            }
            return 1;
        }

        if (*mapper_cmd) {
            PointCloud cloud;
            if (!mapper_shape.empty())
                cloud = synth_shapes(parse_shape_class(mapper_shape),
                                     mapper_points, mapper_jitter,
                                     mapper_common.seed);
            else if (!mapper_input.empty())
                cloud = load_point_cloud_file(mapper_input);
            else
                throw error("mapper: give an input file or --shape");
            if (mapper_ecc == "inf")
                mapper_params.ecc_inf = true;
            else
                mapper_params.ecc_p = std::stod(mapper_ecc);
            const ScalarGraph graph =
                build_mapper(cloud, mapper_params, mapper_common.seed);
            emit(mapper_output, save_graph(graph));
            std::cerr << "nodes=" << graph.node_count()
                      << " edges=" << graph.edge_count() << "\n";
            return 0;
        }

        if (*metric_cmd) {
            const ScalarGraph graph = load_graph_file(metric_input);
            const DistanceMatrix matrix = distance_matrix(
                graph, parse_metric_kind(metric_kind), metric_common.threads);
            emit(metric_output, matrix.to_csv());
            return 0;
        }

        if (*pers_cmd) {
            const ExtendedDiagram diagram =
                extended_persistence(load_graph_file(pers_input));
            if (!pers_output.empty()) emit(pers_output, save_diagram(diagram));
            if (!pers_compare.empty()) {
                const ExtendedDiagram other =
                    load_diagram(read_file(pers_compare));
                const double d =
                    pers_dist == "w1"
                        ? wasserstein1_distance(diagram, other, !pers_pooled)
                        : bottleneck_distance(diagram, other, !pers_pooled);
                std::cout << format_real(d) << "\n";
            } else if (pers_output.empty()) {
                std::cout << save_diagram(diagram);
            }
            return 0;
        }

        if (*pimage_cmd) {
            const ExtendedDiagram diagram = load_diagram(read_file(pimage_input));
            const PersistenceImage image = build_pi(
                birth_persistence_transform(diagram), pi_params(pimage_pi));
            emit(pimage_output, image.to_json());
            return 0;
        }

        if (*measure_cmd) {
            const ScalarGraph graph = load_graph_file(measure_input);
            const MeasureChoice choice = MeasureChoice::parse(measure_kind);
            const ExtendedDiagram diagram = extended_persistence(graph);
            const NodeMeasure measure =
                choice.use_pi
                    ? pi_measure(graph, diagram, pi_params(measure_pi))
                    : baseline_measure(graph, &diagram, choice.baseline);
            emit(measure_output, measure.to_json());
            return 0;
        }

        if (*rgw_cmd) {
            const EvalConfig config = eval_config(rgw_metric, rgw_measure,
                                                  rgw_pi, rgw_solver, rgw_common);
            const DecoratedGraph a =
                decorate_graph(load_graph_file(rgw_a), config);
            const DecoratedGraph b =
                decorate_graph(load_graph_file(rgw_b), config);
            SolverOpts opts = config.solver;
            opts.threads = rgw_common.threads;
            const GWResult result =
                solve_rgw(a.matrix, b.matrix, a.measure, b.measure,
                          rgw_solver.p, opts);
            std::cout << format_real(result.distance) << "\n";
            if (!rgw_plan_output.empty())
                emit(rgw_plan_output, plan_heatmap_export(result));
            return 0;
        }

        if (*pairwise_cmd) {
            const EvalConfig config = eval_config(pw_metric, pw_measure, pw_pi,
                                                  pw_solver, pw_common);
            const PairwiseResult result =
                pairwise_matrix(load_corpus(pw_dir), config);
            emit(pw_output, result.matrix.to_csv());
            std::cerr << "pairs=" << result.pair_seconds.size()
                      << " wall_seconds=" << result.total_seconds << "\n";
            return 0;
        }

        if (*knn_cmd) {
            const DistanceMatrix matrix =
                DistanceMatrix::from_csv(read_file(knn_matrix));
            std::vector<CorpusItem> items;
            for (const std::string& name : matrix.node_order)
                items.push_back({name, "", {}});
            apply_labels(items, read_file(knn_labels));
            std::vector<std::string> labels;
            for (const auto& item : items) labels.push_back(item.label);
            emit(knn_output, recall_csv(knn_recall(matrix, labels, knn_k)));
            return 0;
        }

        if (*abl_cmd) {
            const EvalConfig base = eval_config("sym-reeb-radius", "pi", abl_pi,
                                                abl_solver, abl_common);
            std::vector<MetricKind> metrics;
            for (const std::string& m : abl_metrics)
                metrics.push_back(parse_metric_kind(m));
            std::vector<MeasureChoice> measures;
            for (const std::string& m : abl_measures)
                measures.push_back(MeasureChoice::parse(m));
            const AblationResult result = ablation_run(
                corpus_with_labels(abl_dir, abl_labels), metrics, measures,
                abl_k, base);
            std::string csv = "metric,measure,recall,error\n";
            for (const AblationRow& row : result.rows)
                csv += row.metric + "," + row.measure + "," +
                       format_real(row.recall) + "," + row.error + "\n";
            emit(abl_output, csv);
            return 0;
        }

        if (*sweep_cmd) {
            const EvalConfig base = eval_config(sweep_metric, "pi", PIOpts{},
                                                sweep_solver, sweep_common);
            const SweepResult result =
                sweep(sweep_sigmas, sweep_res, sweep_powers,
                      corpus_with_labels(sweep_dir, sweep_labels), sweep_k,
                      base);
            std::string csv = "sigma,resolution,weight_power,recall,best,error\n";
            for (std::size_t c = 0; c < result.cells.size(); ++c) {
                const SweepCell& cell = result.cells[c];
                csv += format_real(cell.sigma) + "," +
                       std::to_string(cell.resolution) + "," +
                       format_real(cell.weight_power) + "," +
                       format_real(cell.recall) + "," +
                       (c == result.best ? "1" : "0") + "," + cell.error + "\n";
            }
            emit(sweep_output, csv);
            return 0;
        }

        if (*stab_cmd) {
            const EvalConfig config = eval_config(stab_metric, "pi", stab_pi,
                                                  stab_solver, stab_common);
            const StabilityReport report = stability_experiment(
                load_graph_file(stab_input), stab_levels, stab_trials,
                stab_common.seed, config);
            emit(stab_output, report.to_csv());
            std::cerr << "M_emp=" << report.m_emp << " C_emp=" << report.c_emp
                      << " hard_bounds="
                      << (report.metric_bound_holds &&
                                  report.bottleneck_bound_holds
                              ? "pass"
                              : "FAIL")
                      << "\n";
            return report.metric_bound_holds && report.bottleneck_bound_holds
                       ? 0
                       : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
