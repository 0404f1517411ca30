#include <string>
#include <vector>

#include "doctest.h"

#include "rwspt/algebra.hpp"
#include "rwspt/canon.hpp"
#include "rwspt/errors.hpp"
#include "rwspt/net.hpp"
#include "rwspt/rewriting.hpp"
#include "rwspt/symmetry.hpp"

using namespace rwspt;

namespace {

Place pl(const char* tag, std::uint32_t i) { return Place(tag, i); }

Marking bag(std::initializer_list<std::pair<Place, std::uint64_t>> items) {
    Marking m;
    for (const auto& [p, k] : items) m.add(p, k);
    return m;
}

// k identical branches draining a shared pool at the given rate.
Net branches(std::uint32_t k, double rate) {
    std::vector<Transition> ts;
    for (std::uint32_t i = 0; i < k; ++i)
        ts.emplace_back(bag({{pl("z", 0), 1}}), bag({{pl("x", i), 1}}), Marking{}, "take", rate);
    return Net(std::move(ts));
}

} // namespace

TEST_CASE("the firing rule matches enabled transitions in net order") {
    const Net net = branches(3, 0.5);
    const System s(net, bag({{pl("z", 0), 1}}));
    const Rule rule = firingRule();

    const std::vector<Match> ms = matches(rule, s);
    REQUIRE(ms.size() == 3);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(ms[i].tranIndex == i);
        CHECK(matchRate(rule, s, ms[i]) == 0.5);
        CHECK(matchLabel(rule, s, ms[i]) == "take");
    }

    const System next = apply(rule, s, ms[1]);
    CHECK(next.marking() == bag({{pl("x", 1), 1}}));

    // Stale: no tokens left after the first application.
    CHECK_THROWS_AS(apply(rule, next, ms[0]), ValidationError);
}

TEST_CASE("rule-level rates override transition rates") {
    const Net net = branches(1, 0.5);
    const System s(net, bag({{pl("z", 0), 1}}));
    Rule r = firingRule();
    r.name = "boosted";
    r.rate = 2.25;
    const std::vector<Match> ms = matches(r, s);
    REQUIRE(ms.size() == 1);
    CHECK(matchRate(r, s, ms[0]) == 2.25);
    CHECK(matchLabel(r, s, ms[0]) == "boosted");
}

TEST_CASE("match rates require a transition for per-transition rules") {
    const Net net = branches(1, 0.5);
    const System s(net, bag({{pl("z", 0), 1}}));
    Match detached;
    detached.witness = "bogus";
    CHECK_THROWS_AS(matchRate(firingRule(), s, detached), ValidationError);
}

TEST_CASE("successors merge symmetric matches with exact rate sums") {
    // Three equal branches from one token: all three targets are the same
    // normal form, so one successor with rate exactly 3 * 0.1.
    const Net net = branches(3, 0.1);
    const System s0 = normalize(System(net, bag({{pl("z", 0), 1}})));
    const std::vector<SuccessorEntry> succ = successorDistribution(s0, {firingRule()});
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].total == 3 * 0.1);
    CHECK(succ[0].labelRates.at("take") == 3 * 0.1);
    CHECK(succ[0].target.marking() == bag({{pl("x", 0), 1}}));
}

TEST_CASE("successors keep distinct targets and labels apart") {
    // Two asymmetric sinks: transitions with different tags and rates.
    std::vector<Transition> ts;
    ts.emplace_back(bag({{pl("z", 0), 1}}), bag({{pl("x", 0), 1}}), Marking{}, "left", 0.25);
    ts.emplace_back(bag({{pl("z", 0), 1}}), bag({{pl("y", 0), 1}}), Marking{}, "right", 0.75);
    const Net net(std::move(ts));
    const System s0 = normalize(System(net, bag({{pl("z", 0), 1}})));

    const std::vector<SuccessorEntry> succ = successorDistribution(s0, {firingRule()});
    REQUIRE(succ.size() == 2);
    double total = 0;
    for (const SuccessorEntry& e : succ) {
        REQUIRE(e.labelRates.size() == 1);
        CHECK(e.total == e.labelRates.begin()->second);
        total += e.total;
    }
    CHECK(total == 1.0);
}

TEST_CASE("successor keys are the canonical keys of the targets") {
    const Net net = branches(2, 0.1);
    const System s0 = normalize(System(net, bag({{pl("z", 0), 1}})));
    for (const SuccessorEntry& e : successorDistribution(s0, {firingRule()})) {
        CHECK(e.key == sysKey(e.target));
        CHECK(e.target == normalize(e.target)); // targets come pre-normalized
    }
}

TEST_CASE("a rate-free rule with no matched transition is rejected") {
    // Custom matcher that produces a match pointing nowhere.
    Rule r;
    r.name = "broken";
    r.matcher = [](const System&) {
        Match m;
        m.witness = "w";
        return std::vector<Match>{m};
    };
    r.transformer = [](const System& s, const Match&) { return s; };
    const Net net = branches(1, 0.5);
    const System s(net, bag({{pl("z", 0), 1}}));
    CHECK_THROWS_AS(successorDistribution(normalize(s), {r}), ValidationError);
}
