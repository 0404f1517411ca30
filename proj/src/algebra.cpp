#include "rwspt/algebra.hpp"

#include <iterator>
#include <utility>
#include <vector>

#include "rwspt/errors.hpp"
#include "rwspt/netio.hpp"

namespace rwspt {

namespace {

// Rebuilds a bag with every non-shared place pushed one level down.
Marking liftBag(const Marking& bag, const LabelPair& pair, const std::set<Place>* keep) {
    Marking out;
    for (const auto& [place, mult] : bag) {
        if (keep != nullptr && keep->count(place) != 0)
            out.add(place, mult);
        else
            out.add(place.prefixed(pair), mult);
    }
    return out;
}

std::vector<Transition> liftTransitions(const Net& n, const LabelPair& pair,
                                        const std::set<Place>* keep) {
    std::vector<Transition> out;
    out.reserve(n.transitions().size());
    for (const Transition& t : n.transitions())
        out.emplace_back(liftBag(t.input, pair, keep), liftBag(t.output, pair, keep),
                         liftBag(t.inhibitor, pair, keep), t.tag, t.rate);
    return out;
}

} // namespace

Net juxtapose(const Net& a, const Net& b) {
    std::vector<Transition> ts = a.transitions();
    ts.insert(ts.end(), b.transitions().begin(), b.transitions().end());
    return Net(std::move(ts));
}

Net prefixLabel(const Net& n, const std::string& tag, std::uint32_t index) {
    return Net(liftTransitions(n, LabelPair(tag, index), nullptr));
}

Net replicate(const Net& n, const std::string& tag, std::uint32_t k,
              const std::set<Place>& shared) {
    if (k < 1) throw ValidationError("replicate requires at least one copy");
    for (const Place& p : shared)
        if (n.places().count(p) == 0)
            throw ValidationError("unknown shared place: " + placeText(p));
    const std::set<Place>* keep = shared.empty() ? nullptr : &shared;
    std::vector<Transition> all;
    all.reserve(n.transitions().size() * k);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::vector<Transition> copy = liftTransitions(n, LabelPair(tag, i), keep);
        all.insert(all.end(), std::make_move_iterator(copy.begin()),
                   std::make_move_iterator(copy.end()));
    }
    return Net(std::move(all));
}

} // namespace rwspt
