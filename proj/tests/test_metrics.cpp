#include <doctest.h>

#include <stdexcept>

#include "hhlsim/metrics.hpp"

using namespace hhlsim;

TEST_CASE("histogram accumulation and normalization") {
    CountsHistogram h;
    h.add("01");
    h.add("01");
    h.add("11");
    h.add("11");
    h.add("11");
    CHECK(h.total == 5);
    const auto d = h.to_distribution();
    CHECK(d.at("01") == doctest::Approx(0.4));
    CHECK(d.at("11") == doctest::Approx(0.6));

    CountsHistogram other;
    other.add("01");
    h.merge(other);
    CHECK(h.total == 6);
    CHECK(h.counts.at("01") == 3);

    CHECK_THROWS_AS(CountsHistogram{}.to_distribution(), std::invalid_argument);
}

TEST_CASE("solution ratio post-selects on the ancilla") {
    OutcomeDistribution d{{"00", 0.1875}, {"10", 0.1875}, {"01", 0.0625}, {"11", 0.5625}};
    const auto r = solution_ratio(d);
    REQUIRE(r.has_value());
    CHECK(*r == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

    OutcomeDistribution no_success{{"00", 0.5}, {"10", 0.5}};
    CHECK(!solution_ratio(no_success).has_value());

    OutcomeDistribution bad{{"0", 1.0}};
    CHECK_THROWS_AS(solution_ratio(bad), std::invalid_argument);
}

TEST_CASE("variational distance") {
    OutcomeDistribution a{{"00", 0.5}, {"11", 0.5}};
    OutcomeDistribution b{{"00", 0.25}, {"01", 0.25}, {"11", 0.5}};
    CHECK(variational_distance(a, b) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(variational_distance(a, a) == doctest::Approx(0.0));

    OutcomeDistribution unnormalized{{"00", 0.7}};
    CHECK_THROWS_AS(variational_distance(a, unnormalized), std::invalid_argument);
}

TEST_CASE("marginal projection") {
    OutcomeDistribution d{{"abc", 0.25}, {"abd", 0.25}, {"xbc", 0.5}};
    const auto m = project_marginal(d, {0, 2});
    CHECK(m.at("ac") == doctest::Approx(0.25));
    CHECK(m.at("ad") == doctest::Approx(0.25));
    CHECK(m.at("xc") == doctest::Approx(0.5));

    const auto swapped = project_marginal(d, {2, 0});
    CHECK(swapped.at("ca") == doctest::Approx(0.25));

    CHECK_THROWS_AS(project_marginal(d, {3}), std::invalid_argument);
}
