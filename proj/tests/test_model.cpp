#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicke/model.hpp"

using namespace dicke;

TEST_CASE("coupling quoted in meV lands near the 5000:1 timescale ratio") {
    ModelParams p;
    p.N = 5;
    p.gamma = 1.0;  // 1/ns
    p.g = mev_to_rate(3.3);
    ModelParams q = to_internal_units(p);
    CHECK(q.gamma == doctest::Approx(1.0));
    CHECK(q.g == doctest::Approx(5.01e3).epsilon(2e-3));
}

TEST_CASE("gamma = 1 with everything else zero is unchanged") {
    ModelParams p;
    p.gamma = 1.0;
    p.g = p.E = p.kappa = p.delta = p.delta0 = p.delta1 = 0.0;
    ModelParams q = to_internal_units(p);
    CHECK(q.gamma == 1.0);
    CHECK(q.g == 0.0);
    CHECK(q.kappa == 0.0);
}

TEST_CASE("ratios survive the rescale") {
    ModelParams p;
    p.gamma = 2.0;
    p.kappa = 4.0;
    p.E = 1.0;
    ModelParams q = to_internal_units(p);
    CHECK(q.gamma == doctest::Approx(1.0));
    CHECK(q.kappa == doctest::Approx(2.0));
    CHECK(q.E == doctest::Approx(0.5));
}

TEST_CASE("gamma = 0 falls back to the coupling as the unit") {
    ModelParams p;
    p.gamma = 0.0;
    p.g = 7.0;
    p.kappa = 3.5;
    ModelParams q = to_internal_units(p);
    CHECK(q.g == doctest::Approx(1.0));
    CHECK(q.kappa == doctest::Approx(0.5));

    p.g = 0.0;
    CHECK_THROWS_AS(to_internal_units(p), std::invalid_argument);
}

TEST_CASE("invalid parameters are rejected") {
    ModelParams p;
    p.N = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.N = 2;
    p.gamma = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.gamma = 1.0;
    p.E = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
