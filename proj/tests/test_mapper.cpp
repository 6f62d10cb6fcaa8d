#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "reebgw/graph.hpp"
#include "reebgw/mapper.hpp"
#include "reebgw/persistence.hpp"

using namespace reebgw;

TEST_CASE("eccentricity on hand fixtures") {
    SUBCASE("two points at distance 2, p = 1") {
        PointCloud cloud;
        cloud.points = {{0, 0, 0}, {2, 0, 0}};
        const auto ecc = eccentricity(cloud, 1.0);
        CHECK(ecc[0] == doctest::Approx(1.0)); // mean includes the self term
        CHECK(ecc[1] == doctest::Approx(1.0));
    }
    SUBCASE("identical points give zero") {
        PointCloud cloud;
        cloud.points = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
        for (double e : eccentricity(cloud, 2.0)) CHECK(e == 0.0);
    }
    SUBCASE("p = inf on unit square corners") {
        PointCloud cloud;
        cloud.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
        for (double e : eccentricity(cloud, 2.0, true))
            CHECK(e == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("empty cloud is an error") {
        CHECK_THROWS_AS((void)eccentricity(PointCloud{}, 2.0), error);
    }
}

TEST_CASE("single interval with huge eps collapses to one node") {
    PointCloud cloud = synth_shapes(ShapeClass::Sphere, 200, 0.0, 5);
    MapperParams params;
    params.n_intervals = 1;
    params.overlap = 0.0;
    params.cluster_eps = 1e9;
    params.sample_n = 0;
    const ScalarGraph g = build_mapper(cloud, params, 1);
    REQUIRE(g.node_count() == 1);
    const auto ecc = eccentricity(cloud, params.ecc_p);
    double mean = 0.0;
    for (double e : ecc) mean += e;
    mean /= static_cast<double>(ecc.size());
    CHECK(g.value(0) == doctest::Approx(mean));
}

TEST_CASE("mapper is deterministic and validates") {
    const PointCloud cloud = synth_shapes(ShapeClass::Torus, 600, 0.01, 9);
    MapperParams params;
    params.sample_n = 256;
    const ScalarGraph a = build_mapper(cloud, params, 4);
    const ScalarGraph b = build_mapper(cloud, params, 4);
    CHECK(a == b);
    CHECK(a.is_connected());
    RawGraph raw;
    for (std::size_t i = 0; i < a.node_count(); ++i)
        raw.nodes.emplace_back(a.id(i), a.value(i));
    for (const auto& [x, y] : a.edges())
        raw.edges.emplace_back(a.id(x), a.id(y));
    CHECK(validate_raw(raw).ok());

    // node values lie within the eccentricity range of the input
    const auto ecc = eccentricity(cloud, params.ecc_p);
    const auto [lo, hi] = std::minmax_element(ecc.begin(), ecc.end());
    for (std::size_t i = 0; i < a.node_count(); ++i) {
        CHECK(a.value(i) >= *lo - 1e-12);
        CHECK(a.value(i) <= *hi + 1e-12);
    }
}

TEST_CASE("torus mapper graph carries at least one cycle") {
    const PointCloud cloud = synth_shapes(ShapeClass::Torus, 1200, 0.0, 11);
    MapperParams params;
    params.n_intervals = 10;
    params.overlap = 0.3;
    params.sample_n = 512;
    const ScalarGraph g = build_mapper(cloud, params, 2);
    CHECK(g.cycle_rank() >= 1);
    CHECK(extended_persistence(g).count(PointClass::Ext1) == g.cycle_rank());
}

TEST_CASE("refining the cover does not lose nodes on clean data") {
    const PointCloud cloud = synth_shapes(ShapeClass::Sphere, 800, 0.0, 13);
    MapperParams coarse;
    coarse.n_intervals = 5;
    coarse.sample_n = 400;
    MapperParams fine = coarse;
    fine.n_intervals = 10;
    const ScalarGraph a = build_mapper(cloud, coarse, 3);
    const ScalarGraph b = build_mapper(cloud, fine, 3);
    CHECK(b.node_count() >= a.node_count());
}

TEST_CASE("degenerate all-equal filter gives a single node") {
    PointCloud cloud;
    cloud.points = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    MapperParams params;
    params.sample_n = 0;
    const ScalarGraph g = build_mapper(cloud, params, 1);
    CHECK(g.node_count() == 1);
}

TEST_CASE("parameter validation") {
    MapperParams params;
    params.overlap = 1.0;
    CHECK_THROWS_AS(params.check(), error);
    params.overlap = 0.3;
    params.n_intervals = 0;
    CHECK_THROWS_AS(params.check(), error);
    params.n_intervals = 5;
    params.ecc_p = 0.5;
    CHECK_THROWS_AS(params.check(), error);
}

TEST_CASE("component split covers the whole graph") {
    const ScalarGraph g({{"a", 0.0}, {"b", 1.0}, {"c", 2.0}, {"d", 3.0}},
                        {{"a", "b"}, {"c", "d"}});
    const auto parts = split_components(g);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].node_count() + parts[1].node_count() == 4);
    for (const auto& part : parts) CHECK(part.is_connected());
}
