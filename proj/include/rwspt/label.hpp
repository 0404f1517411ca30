#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "rwspt/errors.hpp"

namespace rwspt {

// One (tag, index) component of a composite place label. Tag bytes are
// restricted to [0x20, 0xFE] and indices to < 10^8 so that the canonical
// binary key (see canon.hpp) is order-isomorphic to the semantic order.
struct LabelPair {
    std::string tag;
    std::uint32_t index = 0;

    LabelPair() = default;
    LabelPair(std::string tag, std::uint32_t index);

    std::strong_ordering operator<=>(const LabelPair& o) const {
        if (auto c = tag.compare(o.tag); c != 0)
            return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
        return index <=> o.index;
    }
    bool operator==(const LabelPair&) const = default;
};

// Nonempty pair sequence, stored leaf-first: pairs.front() is the leaf and
// pairs.back() the hierarchy root, matching the textual form
// p(< leaf > ... < root >). Comparison proceeds root-first.
class Label {
public:
    Label() = default;
    explicit Label(std::vector<LabelPair> pairs);
    Label(std::string tag, std::uint32_t index) : Label({LabelPair(std::move(tag), index)}) {}

    const std::vector<LabelPair>& pairs() const { return pairs_; }
    std::size_t depth() const { return pairs_.size(); }
    const LabelPair& leaf() const { return pairs_.front(); }
    const LabelPair& root() const { return pairs_.back(); }

    // Appends (tag, index) at the root end; used by the net algebra.
    Label prefixed(const LabelPair& p) const;

    // Tag sequence root-first with indices abstracted away.
    std::vector<std::string> skeleton() const;

    std::strong_ordering operator<=>(const Label& o) const {
        auto a = pairs_.rbegin(), b = o.pairs_.rbegin();
        for (; a != pairs_.rend() && b != o.pairs_.rend(); ++a, ++b)
            if (auto c = *a <=> *b; c != 0) return c;
        return pairs_.size() <=> o.pairs_.size();
    }
    bool operator==(const Label&) const = default;

private:
    std::vector<LabelPair> pairs_;
};

// Places are identified by their labels.
using Place = Label;

namespace detail {
void validateTag(const std::string& tag);
}

} // namespace rwspt
