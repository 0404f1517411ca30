#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "rwspt/net.hpp"

namespace rwspt {

// Concatenates the transition lists of two nets (a's transitions first).
// Places are identified by label, so equal labels fuse automatically; the
// Net constructor rejects the result if any transition quadruple collides.
Net juxtapose(const Net& a, const Net& b);

// Appends <tag;index> as the new root pair of every place label in n.
// Bijective on places, so the net's shape is preserved one level deeper.
Net prefixLabel(const Net& n, const std::string& tag, std::uint32_t index);

// Juxtaposes k copies of n where copy i has prefixLabel(tag, i) applied to
// every place except those in `shared`, which keep their labels and are
// thereby fused across all copies. Indices run 0..k-1.
Net replicate(const Net& n, const std::string& tag, std::uint32_t k,
              const std::set<Place>& shared = {});

} // namespace rwspt
