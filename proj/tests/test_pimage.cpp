#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reebgw/persistence.hpp"
#include "reebgw/pimage.hpp"
#include "reebgw/rng.hpp"

using namespace reebgw;

namespace {

double image_sum(const PersistenceImage& img) {
    return std::accumulate(img.values.begin(), img.values.end(), 0.0);
}

double gauss2(double x, double y, double cx, double cy, double sigma) {
    const double dx = x - cx, dy = y - cy;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) /
           (2.0 * M_PI * sigma * sigma);
}

} // namespace

TEST_CASE("birth-persistence transform") {
    ExtendedDiagram d{{{0.0, 2.0, PointClass::Ext0, "a", "b"},
                       {3.0, 1.0, PointClass::Rel1, "c", "d"},
                       {1.0, 1.0, PointClass::Ord0, "e", "f"}}};
    const auto pts = birth_persistence_transform(d);
    REQUIRE(pts.size() == 2); // zero-persistence point dropped
    CHECK(pts[0].b == 0.0);
    CHECK(pts[0].p == 2.0);
    CHECK(pts[1].b == 3.0);
    CHECK(pts[1].p == 2.0);
    CHECK(pts[1].birth_node == "c");
}

TEST_CASE("empty diagram gives a zero image") {
    PIParams params;
    const PersistenceImage img = build_pi({}, params);
    CHECK(img.pixel_count() == 100);
    CHECK(image_sum(img) == 0.0);
}

TEST_CASE("single unweighted point integrates to almost full mass") {
    PIParams params;
    params.sigma = 0.2;
    params.weight_power = 0.0;
    const PersistenceImage img = build_pi({{0.0, 1.0, "a", "b"}}, params);
    CHECK(image_sum(img) <= 1.0 + 1e-12);
    CHECK(image_sum(img) >= 0.99); // 3-sigma padding captures > 99.7% per axis
    for (double v : img.values) CHECK(v >= 0.0);
}

TEST_CASE("pixel values match fine numerical quadrature") {
    PIParams params;
    params.sigma = 0.3;
    params.resolution = 4;
    params.weight_power = 1.0;
    const std::vector<BPPoint> pts = {{0.2, 0.9, "a", "b"},
                                      {0.7, 0.4, "c", "d"}};
    const PersistenceImage img = build_pi(pts, params);
    const double bw = (img.bounds.b_max - img.bounds.b_min) / 4.0;
    const double pw = (img.bounds.p_max - img.bounds.p_min) / 4.0;
    for (int iy = 0; iy < 4; ++iy)
        for (int ix = 0; ix < 4; ++ix) {
            const double x0 = img.bounds.b_min + ix * bw;
            const double y0 = img.bounds.p_min + iy * pw;
            double quad = 0.0;
            const int steps = 80;
            for (int sy = 0; sy < steps; ++sy)
                for (int sx = 0; sx < steps; ++sx) {
                    const double x = x0 + (sx + 0.5) * bw / steps;
                    const double y = y0 + (sy + 0.5) * pw / steps;
                    for (const BPPoint& pt : pts)
                        quad += pt.p * gauss2(x, y, pt.b, pt.p, params.sigma) *
                                (bw / steps) * (pw / steps);
                }
            CHECK(img.values[iy * 4 + ix] == doctest::Approx(quad).epsilon(1e-4));
        }
}

TEST_CASE("mixture linearity: doubled point doubles the image") {
    PIParams params;
    params.bounds = PIBounds{-1.0, 2.0, 0.0, 2.0};
    const PersistenceImage one = build_pi({{0.5, 1.0, "a", "b"}}, params);
    const PersistenceImage two =
        build_pi({{0.5, 1.0, "a", "b"}, {0.5, 1.0, "a", "b"}}, params);
    REQUIRE(one.pixel_count() == two.pixel_count());
    for (std::size_t k = 0; k < one.pixel_count(); ++k)
        CHECK(two.values[k] == doctest::Approx(2.0 * one.values[k]).epsilon(1e-12));
}

TEST_CASE("disjoint union of diagrams sums the images on shared bounds") {
    PIParams params;
    params.bounds = PIBounds{-1.0, 3.0, 0.0, 3.0};
    Rng rng(71);
    std::vector<BPPoint> a, b, both;
    for (int i = 0; i < 5; ++i) {
        a.push_back({rng.uniform(0.0, 2.0), rng.uniform(0.1, 2.0), "x", "y"});
        b.push_back({rng.uniform(0.0, 2.0), rng.uniform(0.1, 2.0), "x", "y"});
    }
    both = a;
    both.insert(both.end(), b.begin(), b.end());
    const PersistenceImage ia = build_pi(a, params);
    const PersistenceImage ib = build_pi(b, params);
    const PersistenceImage iboth = build_pi(both, params);
    for (std::size_t k = 0; k < iboth.pixel_count(); ++k)
        CHECK(iboth.values[k] ==
              doctest::Approx(ia.values[k] + ib.values[k]).epsilon(1e-12));
}

TEST_CASE("PI stability ratio bounded by the analytic constant") {
    // ||I_f - I_g||_1 <= (sqrt(5) ||grad w||_inf + sqrt(10/pi) ||w||_inf / sigma) * W1
    PIParams params;
    params.sigma = 0.25;
    params.resolution = 30;
    params.weight_power = 1.0;
    Rng rng(73);
    for (int trial = 0; trial < 25; ++trial) {
        ExtendedDiagram da, db;
        const int n = 3 + static_cast<int>(rng.uniform_index(4));
        for (int i = 0; i < n; ++i) {
            const double b = rng.uniform(0.0, 2.0);
            const double d = b + rng.uniform(0.05, 1.5);
            da.points.push_back({b, d, PointClass::Ord0, "x", "y"});
            db.points.push_back({b + rng.uniform(-0.05, 0.05),
                                 d + rng.uniform(-0.05, 0.05), PointClass::Ord0,
                                 "x", "y"});
        }
        const auto pa = birth_persistence_transform(da);
        const auto pb = birth_persistence_transform(db);
        params.bounds = shared_bounds(pa, pb, params);
        const PersistenceImage ia = build_pi(pa, params);
        const PersistenceImage ib = build_pi(pb, params);
        const double l1 = ia.l1_distance(ib);
        const double w1 = wasserstein1_distance(da, db);
        const double p_max = params.bounds->p_max;
        const double cw = std::sqrt(5.0) * 1.0 +
                          std::sqrt(10.0 / M_PI) * p_max / params.sigma;
        CHECK(l1 <= cw * w1 + 1e-9);
    }
}

TEST_CASE("pi_measure on a single Ext0 diagram splits mass evenly") {
    const ScalarGraph g({{"v0", 0.0}, {"mid", 0.5}, {"v1", 1.0}},
                        {{"v0", "mid"}, {"mid", "v1"}});
    const ExtendedDiagram d = extended_persistence(g);
    PIParams params;
    const NodeMeasure m = pi_measure(g, d, params);
    CHECK(m.node_order == std::vector<std::string>{"mid", "v0", "v1"});
    CHECK(m.probabilities[0] == 0.0);
    CHECK(m.probabilities[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.probabilities[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("measures are probability vectors on random graphs") {
    Rng rng(79);
    PIParams params;
    for (int trial = 0; trial < 100; ++trial) {
        const ScalarGraph g = oracle::random_graph(8, 2, rng);
        const ExtendedDiagram d = extended_persistence(g);
        for (const NodeMeasure& m :
             {pi_measure(g, d, params),
              baseline_measure(g, &d, BaselineMeasureKind::Uniform),
              baseline_measure(g, &d, BaselineMeasureKind::Intensity),
              baseline_measure(g, &d, BaselineMeasureKind::Degree),
              baseline_measure(g, &d, BaselineMeasureKind::Lifespan)}) {
            double total = 0.0;
            for (double p : m.probabilities) {
                CHECK(p >= 0.0);
                total += p;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("baseline measures on hand fixtures") {
    const ScalarGraph path({{"a", 0.0}, {"b", 1.0}, {"c", 2.0}},
                           {{"a", "b"}, {"b", "c"}});
    const ExtendedDiagram d = extended_persistence(path);

    const NodeMeasure uni =
        baseline_measure(path, nullptr, BaselineMeasureKind::Uniform);
    CHECK(uni.probabilities ==
          std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});

    const NodeMeasure deg =
        baseline_measure(path, nullptr, BaselineMeasureKind::Degree);
    CHECK(deg.probabilities == std::vector<double>{0.25, 0.5, 0.25});

    const NodeMeasure inten =
        baseline_measure(path, nullptr, BaselineMeasureKind::Intensity);
    CHECK(inten.probabilities ==
          std::vector<double>{0.0, 1.0 / 3, 2.0 / 3});

    // single Ext0 point of persistence 2 scores both endpoints equally
    const NodeMeasure life =
        baseline_measure(path, &d, BaselineMeasureKind::Lifespan);
    CHECK(life.probabilities == std::vector<double>{0.5, 0.0, 0.5});

    // constant f makes the intensity scores vanish
    const ScalarGraph flat({{"a", 1.0}, {"b", 1.0}}, {{"a", "b"}});
    CHECK_THROWS_AS(
        (void)baseline_measure(flat, nullptr, BaselineMeasureKind::Intensity),
        error);
    CHECK_THROWS_AS(
        (void)baseline_measure(path, nullptr, BaselineMeasureKind::Lifespan),
        error);
}

TEST_CASE("pi_measure error cases") {
    const ScalarGraph g({{"v0", 0.0}, {"v1", 1.0}}, {{"v0", "v1"}});
    const ExtendedDiagram d = extended_persistence(g);

    // bounds far away from every point: all contributions vanish
    PIParams far;
    far.sigma = 1e-3;
    far.bounds = PIBounds{100.0, 101.0, 100.0, 101.0};
    CHECK_THROWS_AS((void)pi_measure(g, d, far), error);

    ExtendedDiagram degenerate{{{1.0, 1.0, PointClass::Ord0, "v0", "v1"}}};
    PIParams params;
    CHECK_THROWS_AS((void)pi_measure(g, degenerate, params), error);
}

TEST_CASE("total variation distance") {
    NodeMeasure a{{"x", "y"}, {0.5, 0.5}};
    NodeMeasure b{{"x", "y"}, {1.0, 0.0}};
    NodeMeasure c{{"y", "x"}, {0.5, 0.5}};
    CHECK(total_variation(a, a) == 0.0);
    CHECK(total_variation(a, b) == doctest::Approx(0.5));
    CHECK(total_variation(a, b) == total_variation(b, a));
    CHECK_THROWS_AS((void)total_variation(a, c), error);
}

TEST_CASE("PI params validation") {
    PIParams bad;
    bad.sigma = 0.0;
    CHECK_THROWS_AS(bad.check(), error);
    bad.sigma = 0.1;
    bad.resolution = 0;
    CHECK_THROWS_AS(bad.check(), error);
    bad.resolution = 5;
    bad.weight_power = -1.0;
    CHECK_THROWS_AS(bad.check(), error);
}
