// End-to-end acceptance suite: one pass/fail line per criterion.
// Exit code = number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reebgw/graph.hpp"
#include "reebgw/gw.hpp"
#include "reebgw/harness.hpp"
#include "reebgw/mapper.hpp"
#include "reebgw/metrics.hpp"
#include "reebgw/persistence.hpp"
#include "reebgw/rng.hpp"

using namespace reebgw;

namespace {

int failures = 0;

void run(int number, const std::string& name, double budget_seconds,
         const std::function<std::string()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string problem;
    try {
        problem = body();
    } catch (const std::exception& ex) {
        problem = std::string("exception: ") + ex.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (problem.empty() && elapsed > budget_seconds)
        problem = "runtime " + std::to_string(elapsed) + "s over budget " +
                  std::to_string(budget_seconds) + "s";
    if (problem.empty()) {
        std::printf("criterion %d (%s): PASS [%.2fs]\n", number, name.c_str(),
                    elapsed);
    } else {
        std::printf("criterion %d (%s): FAIL [%.2fs] — %s\n", number,
                    name.c_str(), elapsed, problem.c_str());
        ++failures;
    }
    std::fflush(stdout);
}

std::string check(bool ok, const std::string& message) {
    return ok ? "" : message;
}

// shared by criteria 5 and 6
StabilityReport stability_report() {
    EvalConfig config;
    config.solver.restarts = 2;
    config.threads = 8;
    return stability_experiment(fixtures::two_loop_graph(),
                                {0.005, 0.01, 0.02, 0.05, 0.1}, 100, 2024,
                                config);
}

// shared by criteria 8 and 9
std::vector<CorpusItem> shape_corpus() {
    // Instances vary in point count and global scale so retrieval cannot
    // rely on gross size cues alone.
    std::vector<CorpusItem> corpus;
    const std::vector<std::pair<ShapeClass, std::string>> classes = {
        {ShapeClass::Sphere, "sphere"},
        {ShapeClass::Torus, "torus"},
        {ShapeClass::DoubleTorus, "double-torus"}};
    MapperParams params;
    params.n_intervals = 10;
    params.overlap = 0.3;
    params.sample_n = 100;
    Rng rng(4000);
    for (const auto& [shape, label] : classes) {
        for (int i = 0; i < 10; ++i) {
            const std::uint64_t seed = 4000 + 100 * corpus.size() + i;
            const std::size_t n = 250 + rng.uniform_index(351);
            const double scale = rng.uniform(0.6, 1.8);
            PointCloud cloud = synth_shapes(shape, n, 0.02, seed);
            for (auto& pt : cloud.points)
                for (double& x : pt) x *= scale;
            const ScalarGraph graph = build_mapper(cloud, params, seed);
            corpus.push_back(
                {label + "_" + std::to_string(i) + ".json", label, graph});
        }
    }
    return corpus;
}

std::string criterion1() {
    SolverOpts opts;
    opts.restarts = 8;
    opts.threads = 8;
    const GWResult r = solve_rgw(
        fixtures::example_matrix_f(), fixtures::example_matrix_g(),
        fixtures::example_measure_f(), fixtures::example_measure_g(), 2.0,
        opts);
    // The reference value is the quadratic objective before the 1/p root
    // (a common solver output convention), so
    // the squared distance is the comparable quantity.
    const double squared = r.distance * r.distance;
    if (squared < fixtures::kExampleDistance * 0.95 ||
        squared > fixtures::kExampleDistance * 1.05)
        return "squared objective " + std::to_string(squared) +
               " outside 5% of " + std::to_string(fixtures::kExampleDistance);
    const auto rows = r.plan.row_sums();
    const auto cols = r.plan.col_sums();
    const auto mu = fixtures::example_measure_f().probabilities;
    const auto nu = fixtures::example_measure_g().probabilities;
    double mu_total = 0.0, nu_total = 0.0;
    for (double x : mu) mu_total += x;
    for (double x : nu) nu_total += x;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (std::abs(rows[i] - mu[i] / mu_total) > 1e-9)
            return "row marginal violated";
    for (std::size_t j = 0; j < cols.size(); ++j)
        if (std::abs(cols[j] - nu[j] / nu_total) > 1e-9)
            return "column marginal violated";
    return "";
}

std::string criterion2() {
    Rng rng(210);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 5 + rng.uniform_index(16);
        const ScalarGraph g =
            oracle::random_graph(n, rng.uniform_index(8), rng);
        if (!g.is_generic()) return "non-generic random graph";
        const DistanceMatrix d =
            distance_matrix(g, MetricKind::SymReebRadius, 4);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (d.at(i, j) < 0.0) return "negative distance";
                if (std::abs(d.at(i, j) - d.at(j, i)) > 1e-9)
                    return "asymmetric sym-reeb-radius";
                if ((d.at(i, j) == 0.0) != (i == j))
                    return "identity of indiscernibles violated";
                for (std::size_t k = 0; k < n; ++k)
                    if (d.at(i, k) > d.at(i, j) + d.at(j, k) + 1e-9)
                        return "triangle inequality violated";
            }
    }
    // asymmetric reeb-radius: symmetry violation on a fixture
    const ScalarGraph hat({{"low", 0.0}, {"top", 4.0}, {"low2", 1.0}},
                          {{"low", "top"}, {"top", "low2"}});
    if (reeb_radius(hat, "low", "low2") == reeb_radius(hat, "low2", "low"))
        return "asymmetric radius unexpectedly symmetric on fixture";
    // reeb-distance: identity of indiscernibles fails on equal heights
    const ScalarGraph fork = fixtures::equal_height_fork();
    if (reeb_distance(fork, "u", "w") <= 0.0)
        return "fixture degenerate";
    if (reeb_distance(fork, "u", "w") != reeb_distance(fork, "u", "v"))
        return "reeb-distance did not collapse distinct pairs";
    return "";
}

std::string criterion3() {
    Rng rng(310);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(7);
        const ScalarGraph g =
            oracle::random_graph(n, rng.uniform_index(5), rng);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t u = 0; u < n; ++u) {
                const std::string& a = g.id(v);
                const std::string& b = g.id(u);
                if (reeb_radius(g, a, b) != oracle::reeb_radius(g, v, u))
                    return "reeb-radius mismatch";
                if (sym_reeb_radius(g, a, b) !=
                    oracle::sym_reeb_radius(g, v, u))
                    return "sym-reeb-radius mismatch";
                if (max_sym_reeb_radius(g, a, b) !=
                    oracle::max_sym_reeb_radius(g, v, u))
                    return "max-sym-reeb-radius mismatch";
                if (reeb_distance(g, a, b) != oracle::reeb_distance(g, v, u))
                    return "reeb-distance mismatch";
                if (shortest_path(g, a, b) != oracle::shortest_path(g, v, u))
                    return "shortest-path mismatch";
            }
    }
    return "";
}

std::string criterion4() {
    Rng rng(410);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(14);
        const ScalarGraph g =
            oracle::random_graph(n, rng.uniform_index(6), rng);
        const ExtendedDiagram d = extended_persistence(g);
        if (d.count(PointClass::Ext0) != 1) return "Ext0 count != 1";
        if (d.count(PointClass::Ext1) != g.cycle_rank())
            return "Ext1 count != cycle rank";
        const auto ord = oracle::sweep_pairs(g, true);
        if (d.count(PointClass::Ord0) != ord.size())
            return "Ord0 count disagrees with sweep oracle";
        const auto rel = oracle::sweep_pairs(g, false);
        if (d.count(PointClass::Rel1) != rel.size())
            return "Rel1 count disagrees with sweep oracle";
    }

    const ExtendedDiagram d = extended_persistence(fixtures::two_loop_graph());
    auto quadrant = [&](PointClass cls) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& pt : d.of_class(cls))
            pts.emplace_back(pt.birth, pt.death);
        std::sort(pts.begin(), pts.end());
        return pts;
    };
    using V = std::vector<std::pair<double, double>>;
    if (quadrant(PointClass::Ord0) != V{{1, 2}}) return "fixture Ord0 wrong";
    if (quadrant(PointClass::Ext0) != V{{0, 11}}) return "fixture Ext0 wrong";
    if (quadrant(PointClass::Rel1) != V{{10, 8}}) return "fixture Rel1 wrong";
    if (quadrant(PointClass::Ext1) != V{{4, 3}, {7, 5}, {9, 6}})
        return "fixture Ext1 wrong";
    return "";
}

std::string criterion5(const StabilityReport& report) {
    std::string err;
    err += check(report.levels.size() == 5, "expected 5 noise levels; ");
    for (const auto& level : report.levels) {
        err += check(level.metric_deviation.size() == 100,
                     "expected 100 trials; ");
        for (double dev : level.metric_deviation)
            if (dev > 2.0 * level.epsilon + 1e-9) {
                err += "metric deviation bound broken; ";
                break;
            }
        for (double db : level.bottleneck)
            if (db > level.epsilon + 1e-9) {
                err += "bottleneck bound broken; ";
                break;
            }
    }
    err += check(report.metric_bound_holds && report.bottleneck_bound_holds,
                 "hard-bound flags not set; ");
    return err;
}

std::string criterion6(const StabilityReport& report) {
    std::string err;
    for (std::size_t l = 0; l + 1 < report.levels.size(); ++l) {
        err += check(report.levels[l].median_tv() <=
                         report.levels[l + 1].median_tv() + 1e-12,
                     "median d_TV not shrinking with noise; ");
        err += check(report.levels[l].median_rgw() <=
                         report.levels[l + 1].median_rgw() + 1e-12,
                     "median RGW_2 not shrinking with noise; ");
    }
    err += check(report.measure_bound_holds, "fitted M_emp bound broken; ");
    err += check(report.rgw_bound_holds, "fitted C_emp bound broken; ");

    // self-distance of a decorated graph
    EvalConfig config;
    const DecoratedGraph self =
        decorate_graph(fixtures::two_loop_graph(), config);
    const GWResult r = solve_rgw(self.matrix, self.matrix, self.measure,
                                 self.measure, 2.0, {});
    err += check(r.distance <= 1e-8, "RGW_2(f, f) > 1e-8; ");
    return err;
}

std::string criterion7() {
    Rng rng(710);
    for (int trial = 0; trial < 50; ++trial) {
        const double u = rng.uniform(0.1, 3.0);
        const double v = rng.uniform(0.1, 3.0);
        DistanceMatrix d1, d2;
        d1.node_order = {"a", "b"};
        d1.values = {0, u, u, 0};
        d2.node_order = {"x", "y"};
        d2.values = {0, v, v, 0};
        const double a0 = rng.uniform(0.2, 0.8);
        const double b0 = rng.uniform(0.2, 0.8);
        NodeMeasure mu{{"a", "b"}, {a0, 1.0 - a0}};
        NodeMeasure nu{{"x", "y"}, {b0, 1.0 - b0}};
        for (double p : {1.0, 2.0}) {
            SolverOpts opts;
            opts.restarts = 6;
            opts.seed = static_cast<std::uint64_t>(trial);
            const GWResult r = solve_rgw(d1, d2, mu, nu, p, opts);
            const double expected =
                oracle::gw_2x2({0, u, u, 0}, {0, v, v, 0}, mu.probabilities,
                               nu.probabilities, p);
            if (std::abs(r.distance - expected) > 1e-5)
                return "p=" + std::to_string(p) + " solver " +
                       std::to_string(r.distance) + " vs oracle " +
                       std::to_string(expected);
        }
    }
    return "";
}

std::string criterion8(const std::vector<CorpusItem>& corpus,
                       double* proposed_out) {
    EvalConfig config;
    config.solver.restarts = 4;
    config.threads = 8;
    config.seed = 7;

    const std::vector<MeasureChoice> measures = {
        MeasureChoice::parse("pi"), MeasureChoice::parse("uniform")};
    const AblationResult table = ablation_run(
        corpus, {MetricKind::SymReebRadius}, measures, 5, config);
    if (table.rows.size() != 2) return "unexpected table size";
    for (const auto& row : table.rows)
        if (!row.error.empty()) return row.metric + "/" + row.measure + ": " + row.error;
    const double proposed = table.rows[0].recall;
    const double uniform = table.rows[1].recall;
    *proposed_out = proposed;
    std::printf("  [criterion 8] recall@5 proposed=%.3f uniform=%.3f\n",
                proposed, uniform);
    if (proposed < 0.9)
        return "proposed recall@5 " + std::to_string(proposed) + " < 0.9";
    if (!(proposed > uniform))
        return "proposed does not strictly dominate uniform (" +
               std::to_string(proposed) + " vs " + std::to_string(uniform) +
               ")";
    return "";
}

std::string criterion9(const std::vector<CorpusItem>& corpus) {
    std::vector<CorpusItem> subset(corpus.begin(), corpus.begin() + 4);
    subset.insert(subset.end(), corpus.begin() + 10, corpus.begin() + 12);
    subset.insert(subset.end(), corpus.begin() + 20, corpus.begin() + 22);

    EvalConfig config;
    config.solver.restarts = 4;
    config.seed = 99;
    std::string first;
    for (int threads : {1, 4, 8}) {
        config.threads = threads;
        const std::string csv = pairwise_matrix(subset, config).matrix.to_csv();
        if (first.empty())
            first = csv;
        else if (csv != first)
            return "CSV differs between thread counts";
    }
    return "";
}

} // namespace

int main() {
    run(1, "worked-example end to end", 1.0, criterion1);
    run(2, "metric axioms", 10.0, criterion2);
    run(3, "metric oracle equivalence", 30.0, criterion3);
    run(4, "persistence invariants", 20.0, criterion4);

    StabilityReport report;
    double stability_seconds = 0.0;
    {
        const auto start = std::chrono::steady_clock::now();
        try {
            report = stability_report();
        } catch (const std::exception& ex) {
            std::printf("stability experiment failed: %s\n", ex.what());
            failures += 2;
        }
        stability_seconds = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
    }
    if (!report.levels.empty()) {
        run(5, "hard stability bounds", 60.0, [&] {
            return criterion5(report) +
                   check(stability_seconds < 60.0, "experiment over 60s; ");
        });
        run(6, "soft stability", 300.0, [&] { return criterion6(report); });
    }

    run(7, "2x2 solver oracle", 10.0, criterion7);

    std::vector<CorpusItem> corpus;
    try {
        corpus = shape_corpus();
    } catch (const std::exception& ex) {
        std::printf("corpus construction failed: %s\n", ex.what());
        failures += 2;
    }
    if (!corpus.empty()) {
        double proposed = 0.0;
        run(8, "desk-scale retrieval", 600.0,
            [&] { return criterion8(corpus, &proposed); });
        run(9, "pairwise determinism", 120.0,
            [&] { return criterion9(corpus); });
    }

    std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
