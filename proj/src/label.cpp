#include "rwspt/label.hpp"

namespace rwspt {

namespace {
constexpr std::uint32_t kMaxIndex = 99'999'999; // must fit the fixed-width key field
} // namespace

namespace detail {

void validateTag(const std::string& tag) {
    if (tag.empty()) throw ValidationError("tag must be nonempty");
    for (unsigned char c : tag)
        if (c < 0x20 || c == 0xFF)
            throw ValidationError("tag contains a reserved byte");
}

} // namespace detail

LabelPair::LabelPair(std::string t, std::uint32_t i) : tag(std::move(t)), index(i) {
    detail::validateTag(tag);
    if (index > kMaxIndex) throw ValidationError("label index out of range");
}

Label::Label(std::vector<LabelPair> pairs) : pairs_(std::move(pairs)) {
    if (pairs_.empty()) throw ValidationError("label must have at least one pair");
    for (const auto& p : pairs_) {
        detail::validateTag(p.tag);
        if (p.index > kMaxIndex) throw ValidationError("label index out of range");
    }
}

Label Label::prefixed(const LabelPair& p) const {
    std::vector<LabelPair> out = pairs_;
    out.push_back(p);
    return Label(std::move(out));
}

std::vector<std::string> Label::skeleton() const {
    std::vector<std::string> out;
    out.reserve(pairs_.size());
    for (auto it = pairs_.rbegin(); it != pairs_.rend(); ++it) out.push_back(it->tag);
    return out;
}

} // namespace rwspt
