#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rwspt/net.hpp"
#include "rwspt/rewriting.hpp"

namespace rwspt {

// Exponential rates of the production-line model. The first three belong to
// net transitions, the last three to rewrite rules.
struct PLRates {
    double load = 0.5;
    double process = 0.1;
    double assemble = 0.2;
    double fault = 0.001;
    double reconfigure = 0.01;
    double disconnect = 0.01;
};

struct PLConfig {
    std::uint32_t lines = 1;          // N
    std::uint32_t robotsPerLine = 2;  // K
    std::uint32_t loadMultiplier = 2; // M
    PLRates rates;
};

// NPLsys(N, K, M): N production lines sharing one store. Per line, a "ld"
// transition takes K raw items from the store and hands one to each robot's
// w place; each robot's "ln" transition works an item into its a place
// unless the robot's f place is marked; an "asm" transition joins K worked
// items back into the store as one batch. The store starts with K*M items.
// Lines are replicated under tag "L" with the store shared, so the labeling
// is symmetric both across lines and across robots within a line.
System buildNPLsys(const PLConfig& cfg);

// The firing rule plus the degradation rewrites, in match order:
//   fault      - marks a robot's f place; at most one unresolved fault per
//                line, any robot of a fault-free line can fail
//   reconfigure- on a faulted line with >= 2 robots: removes the faulted
//                branch, moves its in-progress tokens onto a chosen
//                surviving robot, adds the faulted branch's load share to
//                that robot's ld/asm arcs (batch size stays K), and
//                renumbers the line's robots contiguously
//   disconnect - on a faulted single-robot line when other lines remain:
//                removes the line's transitions and returns its w/a tokens
//                to the store; line indices of survivors are kept as-is
std::vector<Rule> degradationRules(const PLConfig& cfg);

// "key=value" list separated by commas or newlines; '#' starts a comment.
// Keys: N, K, M, load, process, assemble, fault, reconfigure, disconnect.
PLConfig parsePLConfig(const std::string& text);

} // namespace rwspt
