#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rwspt/net.hpp"

namespace rwspt {

// A maximal set of exchangeable indices at one hierarchy level. `context` is
// the common root-side label suffix enclosing the level (leaf-first, empty at
// the root); `tags` are the companion tags whose pairs carry the same index
// set at that context and therefore permute together; `members` are the
// indices any two of which can be swapped by a net automorphism.
struct PermutableGroup {
    std::vector<LabelPair> context;
    std::vector<std::string> tags;          // sorted
    std::vector<std::uint32_t> members;     // sorted

    std::size_t level() const { return context.size(); }
};

// Result of analyzing one net. `violations` lists index pairs that share a
// context, tag set and label skeleton but fail the swap test; the labeling is
// symmetric iff it is empty. Groups are ordered deepest context first, which
// is the order normalization consumes them in.
struct SymmetryInfo {
    std::vector<PermutableGroup> groups;
    std::vector<std::string> violations;

    bool symmetric() const { return violations.empty(); }
};

// Cached per canonical net key; safe for concurrent use.
std::shared_ptr<const SymmetryInfo> analyzeNet(const Net& n);

bool checkSymmetricLabeling(const Net& n);

// Groups of the net; throws NotSymmetricError when the labeling fails.
std::vector<PermutableGroup> permutableGroups(const Net& n);

// Canonical representative of the system's automorphism class: indices are
// first rank-compacted per (context, tag) so they span 0..k-1, then sibling
// subtrees are sorted bottom-up by a marking signature that abstracts their
// own index away. Throws NotSymmetricError when the labeling fails.
System normalize(const System& s);

// True iff the two systems' markings are related by a net automorphism.
// Requires equal nets (up to transition order); throws ValidationError
// otherwise.
bool automorphicEquivalent(const System& a, const System& b);

// One permutation within one group: members[k] is renamed to image[k].
// `image` must be a permutation of the group's members.
struct GroupPerm {
    std::size_t group = 0;
    std::vector<std::uint32_t> image;
};

// Applies group permutations (net automorphisms) to the marking; the net is
// unchanged by construction. Used by property tests and the brute-force
// normalization oracle.
System applyGroupPerms(const System& s, const std::vector<PermutableGroup>& groups,
                       const std::vector<GroupPerm>& perms);

} // namespace rwspt
