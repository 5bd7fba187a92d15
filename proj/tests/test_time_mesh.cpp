#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mtf/time_mesh.hpp"

using namespace mtf;

TEST_CASE("constructor validates its arguments") {
    CHECK_THROWS_AS(GradedTimeMesh(0.0, 8, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(GradedTimeMesh(-1.0, 8, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(GradedTimeMesh(1.0, 0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(GradedTimeMesh(1.0, 8, 0.5), std::invalid_argument);
    CHECK_NOTHROW(GradedTimeMesh(1.0, 1, 1.0));
}

TEST_CASE("dyadic graded mesh is reproduced exactly") {
    // T = 1, N = 4, r = 2: t_n = (n/4)^2 and every value is a dyadic
    // rational, so the comparisons below are exact in floating point.
    const GradedTimeMesh mesh(1.0, 4, 2.0);
    CHECK(mesh.t(0) == 0.0);
    CHECK(mesh.t(1) == 1.0 / 16.0);
    CHECK(mesh.t(2) == 4.0 / 16.0);
    CHECK(mesh.t(3) == 9.0 / 16.0);
    CHECK(mesh.t(4) == 1.0);
    CHECK(mesh.tau(1) == 1.0 / 16.0);
    CHECK(mesh.tau(2) == 3.0 / 16.0);
    CHECK(mesh.tau(3) == 5.0 / 16.0);
    CHECK(mesh.tau(4) == 7.0 / 16.0);
    CHECK(mesh.max_tau() == 7.0 / 16.0);
    CHECK(mesh.times().size() == 5);
    CHECK(mesh.steps().size() == 4);
}

TEST_CASE("uniform mesh has equal steps and unit step ratio") {
    const GradedTimeMesh mesh(2.0, 8, 1.0);
    for (std::size_t n = 1; n <= 8; ++n)
        CHECK(mesh.tau(n) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mesh.max_ratio() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("graded mesh satisfies the power law and monotone growth") {
    const double T = 3.0, r = 2.5;
    const std::size_t N = 40;
    const GradedTimeMesh mesh(T, N, r);
    CHECK(mesh.t(0) == 0.0);
    CHECK(mesh.t(N) == doctest::Approx(T).epsilon(1e-15));
    for (std::size_t n = 0; n <= N; ++n) {
        const double expected = T * std::pow(double(n) / double(N), r);
        CHECK(mesh.t(n) == doctest::Approx(expected).epsilon(1e-15));
    }
    // for r >= 1 step sizes increase, so earlier/later ratio stays <= 1
    for (std::size_t n = 2; n <= N; ++n) CHECK(mesh.tau(n - 1) <= mesh.tau(n));
    CHECK(mesh.max_ratio() <= 1.0 + 1e-12);
}

TEST_CASE("accessors are range checked") {
    const GradedTimeMesh mesh(1.0, 4, 2.0);
    CHECK_THROWS_AS((void)mesh.t(5), std::out_of_range);
    CHECK_THROWS_AS((void)mesh.tau(0), std::out_of_range);
    CHECK_THROWS_AS((void)mesh.tau(5), std::out_of_range);
}

TEST_CASE("step-size criterion reproduces the closed-form bound") {
    const FractionalOrders single({{1.0, 0.5}});
    // bound = (11/2 * mu * Lambda)^(-1/alpha1) with mu = 1/Gamma(1.5)
    const double bound = 0.025963575649502423458;

    const GradedTimeMesh coarse(1.0, 16, 1.0);  // tau = 1/16 > bound
    const auto bad = check_stepsize_criterion(coarse, single, 1.0);
    CHECK(bad.bound == doctest::Approx(bound).epsilon(1e-13));
    CHECK(bad.tau_max == coarse.max_tau());
    CHECK(!bad.satisfied);

    const GradedTimeMesh fine(1.0, 64, 1.0);  // tau = 1/64 < bound
    const auto good = check_stepsize_criterion(fine, single, 1.0);
    CHECK(good.satisfied);

    // larger Lipschitz bound shrinks the admissible step
    const auto strict = check_stepsize_criterion(fine, single, 100.0);
    CHECK(strict.bound < good.bound);
}

TEST_CASE("step-size criterion uses the smallest scaled coefficient") {
    // adding a lower-order term with a larger mu/Gamma(2-alpha) must not
    // change the floor (and the leading order is unchanged), so the bound
    // stays the same
    const FractionalOrders one({{1.0, 0.5}});
    const FractionalOrders two({{1.0, 0.5}, {5.0, 0.3}});
    const GradedTimeMesh mesh(1.0, 32, 2.0);
    const auto a = check_stepsize_criterion(mesh, one, 1.0);
    const auto b = check_stepsize_criterion(mesh, two, 1.0);
    CHECK(a.bound == doctest::Approx(b.bound).epsilon(1e-15));
}
