#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "rwspt/ctmc.hpp"
#include "rwspt/errors.hpp"
#include "test_oracles.hpp"

using namespace rwspt;

namespace {

// 0 --lambda--> 1 (absorbing).
LumpedCTMC twoState(double lambda) {
    LumpedCTMC c;
    c.n = 2;
    c.initialDistribution = {1.0, 0.0};
    c.diag = {-lambda, 0.0};
    c.rows = {{{1, lambda}}, {}};
    c.labeledOut = {{{"hop", lambda}}, {}};
    c.stateKeys = {"up", "down"};
    return c;
}

} // namespace

TEST_CASE("time grids hit both endpoints") {
    const std::vector<double> lin = timeGrid(0.0, 10.0, 5);
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 0.0);
    CHECK(lin.back() == 10.0);
    CHECK(lin[2] == 5.0);

    const std::vector<double> geo = timeGrid(1.0, 100.0, 3, true);
    REQUIRE(geo.size() == 3);
    CHECK(geo.front() == 1.0);
    CHECK(geo.back() == 100.0);
    CHECK(geo[1] == doctest::Approx(10.0));

    CHECK(timeGrid(2.0, 9.0, 1) == std::vector<double>{2.0});
    CHECK_THROWS_AS(timeGrid(1.0, 0.5, 5), ValidationError);  // t1 < t0
    CHECK_THROWS_AS(timeGrid(-1.0, 1.0, 5), ValidationError); // negative start
    CHECK_THROWS_AS(timeGrid(1.0, 2.0, 0), ValidationError);  // empty grid
    CHECK_THROWS_AS(timeGrid(0.0, 1.0, 5, true), ValidationError); // geometric needs t0 > 0
}

TEST_CASE("transient input validation") {
    const LumpedCTMC c = twoState(1.0);
    CHECK_THROWS_AS(transient(c, {0.0, 1.0}, 0.0), ValidationError);
    CHECK_THROWS_AS(transient(c, {0.0, 1.0}, 1.0), ValidationError);
    CHECK_THROWS_AS(transient(c, {1.0, 0.5}), ValidationError); // decreasing times
    CHECK_THROWS_AS(transient(c, {-1.0}), ValidationError);
    CHECK_THROWS_AS(transient(LumpedCTMC{}, {1.0}), ValidationError); // empty chain

    LumpedCTMC broken = twoState(1.0);
    broken.labeledOut.pop_back();
    CHECK_THROWS_AS(transient(broken, {1.0}), ValidationError);
}

TEST_CASE("two-state decay matches the closed form everywhere") {
    const double lambda = 0.37;
    const LumpedCTMC c = twoState(lambda);
    const std::vector<double> times = timeGrid(0.0, 20.0, 41);
    const TransientResult r = transient(c, times);
    REQUIRE(r.distributions.size() == times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expected = std::exp(-lambda * times[k]);
        CHECK(std::abs(r.distributions[k][0] - expected) <= 1e-10);
        CHECK(std::abs(r.distributions[k][1] - (1.0 - expected)) <= 1e-10);
    }
}

TEST_CASE("time zero returns the initial distribution exactly") {
    const LumpedCTMC c = twoState(2.0);
    const TransientResult r = transient(c, {0.0});
    CHECK(r.distributions[0][0] == 1.0);
    CHECK(r.distributions[0][1] == 0.0);
}

TEST_CASE("a chain with no transitions stays put") {
    LumpedCTMC c;
    c.n = 2;
    c.initialDistribution = {0.25, 0.75};
    c.diag = {0.0, 0.0};
    c.rows = {{}, {}};
    c.labeledOut = {{}, {}};
    c.stateKeys = {"a", "b"};
    const TransientResult r = transient(c, {0.0, 5.0, 500.0});
    for (const auto& dist : r.distributions) {
        CHECK(dist[0] == 0.25);
        CHECK(dist[1] == 0.75);
    }
}

TEST_CASE("transient agrees with the dense exponential oracle") {
    oracles::Rng rng(4242);
    for (int i = 0; i < 20; ++i) {
        const LumpedCTMC c = oracles::randomChain(rng, 12);
        const std::vector<double> times = {0.1, 1.0, 7.5};
        const TransientResult r = transient(c, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const std::vector<double> expected = oracles::transientRef(c, times[k]);
            double sum = 0;
            for (std::size_t j = 0; j < c.n; ++j) {
                CHECK(std::abs(r.distributions[k][j] - expected[j]) <= 1e-9);
                sum += r.distributions[k][j];
            }
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("thread count never changes transient results") {
    oracles::Rng rng(11);
    const LumpedCTMC c = oracles::randomChain(rng, 16);
    const std::vector<double> times = timeGrid(0.5, 50.0, 7, true);
    const TransientResult serial = transient(c, times, 1e-10, 1);
    const TransientResult parallel = transient(c, times, 1e-10, 4);
    for (std::size_t k = 0; k < times.size(); ++k)
        for (std::size_t j = 0; j < c.n; ++j)
            CHECK(serial.distributions[k][j] == parallel.distributions[k][j]); // bitwise
}

TEST_CASE("reliability is the mass outside absorbing states") {
    const double lambda = 0.5;
    const Curve curve = reliability(twoState(lambda), {0.0, 1.0, 4.0});
    REQUIRE(curve.size() == 3);
    CHECK(curve[0].second == 1.0);
    CHECK(std::abs(curve[1].second - std::exp(-0.5)) <= 1e-10);
    CHECK(std::abs(curve[2].second - std::exp(-2.0)) <= 1e-10);
}

TEST_CASE("throughput weights the distribution by matching out-rates") {
    // Two-state flip-flop with distinct labels in each direction.
    LumpedCTMC c;
    c.n = 2;
    c.initialDistribution = {1.0, 0.0};
    c.diag = {-2.0, -3.0};
    c.rows = {{{1, 2.0}}, {{0, 3.0}}};
    c.labeledOut = {{{"go", 2.0}}, {{"back", 3.0}}};
    c.stateKeys = {"a", "b"};

    // At equilibrium pi = (0.6, 0.4): go-throughput 1.2, back-throughput 1.2.
    const std::vector<double> late = {200.0};
    const Curve go = throughput(c, [](const std::string& l) { return l == "go"; }, late);
    const Curve back = throughput(c, [](const std::string& l) { return l == "back"; }, late);
    CHECK(std::abs(go[0].second - 1.2) <= 1e-9);
    CHECK(std::abs(back[0].second - 1.2) <= 1e-9);

    const Curve all = throughput(c, [](const std::string&) { return true; }, {0.0});
    CHECK(all[0].second == 2.0); // only state a occupied at t = 0
}

TEST_CASE("transient agreement holds under repeated evaluation") {
    // Each time point is computed independently from t = 0, so permuting the
    // grid never changes any individual answer.
    oracles::Rng rng(5);
    const LumpedCTMC c = oracles::randomChain(rng, 10);
    const TransientResult joint = transient(c, {0.5, 2.0, 9.0});
    for (std::size_t k = 0; k < 3; ++k) {
        const TransientResult single = transient(c, {joint.timePoints[k]});
        for (std::size_t j = 0; j < c.n; ++j)
            CHECK(single.distributions[0][j] == joint.distributions[k][j]);
    }
}

TEST_CASE("csv writers render generators, trajectories and curves") {
    const LumpedCTMC c = twoState(0.5);
    std::ostringstream gen;
    writeGeneratorCsv(gen, c);
    CHECK(gen.str() == "source,target,rate\n0,0,-0.5\n0,1,0.5\n1,1,0\n");

    std::ostringstream tr;
    writeTransientCsv(tr, transient(c, {0.0}));
    CHECK(tr.str() == "t,state_0,state_1\n0,1,0\n");

    std::ostringstream cu;
    writeCurveCsv(cu, Curve{{0.0, 1.0}, {2.5, 0.125}});
    CHECK(cu.str() == "t,value\n0,1\n2.5,0.125\n");
}
