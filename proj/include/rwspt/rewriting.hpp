#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rwspt/net.hpp"

namespace rwspt {

// One ground instance of a rule in a state. The witness is unique within
// (rule, state) — successor multiplicity counting depends on that. The firing
// rule sets tranIndex; model rules put their coordinates in coords.
struct Match {
    std::string witness;
    std::size_t tranIndex = static_cast<std::size_t>(-1);
    std::vector<std::uint32_t> coords;
};

// A stochastic rewrite rule. A missing rate means "per transition": the rate
// of each match is taken from the matched net transition (the firing rule).
// Matchers and transformers must be pure, and parametric: permuting a state
// by a net automorphism must permute matches and commute with the transform.
struct Rule {
    std::string name;
    std::optional<double> rate;
    std::function<std::vector<Match>(const System&)> matcher;
    std::function<System(const System&, const Match&)> transformer;
};

// The built-in PT firing rule: one match per enabled transition, in net
// order; the transform fires it.
Rule firingRule();

std::vector<Match> matches(const Rule& r, const System& s);

// Applies one match; throws if the match is stale (no longer applicable).
System apply(const Rule& r, const System& s, const Match& m);

double matchRate(const Rule& r, const System& s, const Match& m);

// Edge label: the transition's tag for the firing rule, the rule name
// otherwise.
std::string matchLabel(const Rule& r, const System& s, const Match& m);

// One normalized successor with the cumulative rates that lead to it.
struct SuccessorEntry {
    System target;
    std::string key; // canonical system key of target
    std::map<std::string, double> labelRates;
    double total = 0;
};

// Aggregates all (rule, match) successors of s by normal form: the edge rate
// toward each distinct normalized target is the sum over contributing
// matches. Per-label sums are bucketed by rate value and multiplied out, so
// k matches of equal rate contribute exactly k*rate. Expects s itself to be
// in normal form (the quotient builder maintains this).
std::vector<SuccessorEntry> successorDistribution(const System& s, const std::vector<Rule>& rules);

} // namespace rwspt
