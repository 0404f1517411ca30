#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rwspt/ctmc.hpp"
#include "rwspt/errors.hpp"
#include "rwspt/net.hpp"
#include "rwspt/rewriting.hpp"

namespace rwspt {

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    std::string label;
    double rate = 0;
};

// Reachability graph. States are numbered in BFS level order with each
// level's new states sorted by canonical key, so numbering is deterministic
// and independent of thread schedule. Net keys are interned once per
// distinct net since rewrites share most structure.
struct TransitionSystem {
    std::vector<System> states;
    std::size_t initial = 0;
    std::vector<Edge> edges;
    std::vector<bool> finalFlag; // out-degree 0

    std::vector<std::string> netKeys;
    std::vector<std::size_t> stateNet;        // per state: index into netKeys
    std::vector<std::string> stateMarkingKey; // per state: marking bag key

    std::size_t finalCount() const;
    std::string fullKey(std::size_t i) const; // net key, 0x07, marking key
};

struct ExploreOptions {
    std::size_t stateLimit = 5'000'000; // 0 = unlimited
    double wallBudgetSec = 0;           // 0 = unlimited
    int threads = 1;
};

// Exploration aborted on a resource budget; carries the consistent BFS
// prefix explored so far.
class StateLimitError : public Error {
public:
    StateLimitError(const std::string& what, std::shared_ptr<TransitionSystem> partialTs,
                    bool wallClockHit)
        : Error(what), partial(std::move(partialTs)), wallClock(wallClockHit) {}

    std::shared_ptr<TransitionSystem> partial;
    bool wallClock = false;
};

// BFS closure of the raw successor relation: one edge per (rule, match),
// states stored un-normalized.
TransitionSystem buildOrdinary(const System& s0, const std::vector<Rule>& rules,
                               const ExploreOptions& opt = {});

struct QuotientResult {
    TransitionSystem ts;
    LumpedCTMC chain;
};

// BFS over normal forms using the cumulative successor distribution; the
// lumped generator is assembled from the quotient edges (self-loops
// dropped). The initial distribution is a point mass on normalize(s0).
QuotientResult buildQuotient(const System& s0, const std::vector<Rule>& rules,
                             const ExploreOptions& opt = {});

struct LumpingViolation {
    std::size_t ordinaryState = 0;
    std::size_t fromClass = 0;
    std::size_t toClass = 0;
    double ordinaryRate = 0;
    double quotientRate = 0;
};

struct LumpingReport {
    std::vector<LumpingViolation> violations;
    std::size_t statesChecked = 0;

    bool ok() const { return violations.empty(); }
};

// Strong-lumpability cross-check: partitions ordinary states by normal form
// and requires every state's cumulative rate into every other class to match
// its class's generator row within 1e-9 relative tolerance. Throws
// ValidationError if some normal form is missing from the quotient.
LumpingReport verifyLumping(const TransitionSystem& ordinary, const LumpedCTMC& chain);

std::string exportDot(const TransitionSystem& ts);
void writeStatesCsv(std::ostream& os, const TransitionSystem& ts);
void writeEdgesCsv(std::ostream& os, const TransitionSystem& ts);

} // namespace rwspt
