#include "rwspt/net.hpp"

#include <cmath>

#include "rwspt/canon.hpp"

namespace rwspt {

Transition::Transition(Marking in, Marking out, Marking inh, std::string t, double r)
    : input(std::move(in)), output(std::move(out)), inhibitor(std::move(inh)),
      tag(std::move(t)), rate(r) {
    detail::validateTag(tag);
    if (!(rate > 0) || !std::isfinite(rate))
        throw ValidationError("transition rate must be positive and finite");
}

Net::Net(std::vector<Transition> transitions) : transitions_(std::move(transitions)) {
    for (std::size_t i = 0; i < transitions_.size(); ++i)
        for (std::size_t j = i + 1; j < transitions_.size(); ++j)
            if (transitions_[i].sameQuadruple(transitions_[j]))
                throw ValidationError("duplicate transition (equal input, output, inhibitor, tag)");
    for (const auto& t : transitions_) {
        for (const auto& [p, n] : t.input) places_.insert(p);
        for (const auto& [p, n] : t.output) places_.insert(p);
        for (const auto& [p, n] : t.inhibitor) places_.insert(p);
    }
    key_ = netKeyOf(transitions_);
}

System::System(Net net, Marking marking)
    : System(std::make_shared<const Net>(std::move(net)), std::move(marking)) {}

System::System(std::shared_ptr<const Net> net, Marking marking)
    : net_(std::move(net)), marking_(std::move(marking)) {
    if (!net_) throw ValidationError("system requires a net");
    for (const auto& [p, n] : marking_)
        if (!net_->places().contains(p))
            throw ValidationError("marking uses a place absent from the net");
}

const std::set<Place>& places(const Net& n) { return n.places(); }

namespace {

bool enabledIn(const Transition& t, const Marking& m) {
    if (!t.input.leq(m)) return false;
    for (const auto& [p, h] : t.inhibitor)
        if (m.multiplicity(p) >= h) return false;
    return true;
}

std::size_t findTransition(const Net& n, const Transition& t) {
    const auto& ts = n.transitions();
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] == t) return i;
    throw ValidationError("unknown transition: not part of the system's net");
}

} // namespace

bool enabled(const Transition& t, const System& s) {
    findTransition(s.net(), t);
    return enabledIn(t, s.marking());
}

System fire(const Transition& t, const System& s) {
    findTransition(s.net(), t);
    if (!enabledIn(t, s.marking()))
        throw ValidationError("transition is not enabled");
    return System(s.netPtr(), s.marking().minus(t.input).plus(t.output));
}

std::vector<Transition> enabledTransitions(const System& s) {
    std::vector<Transition> out;
    for (const auto& t : s.net().transitions())
        if (enabledIn(t, s.marking())) out.push_back(t);
    return out;
}

bool enabledAt(const System& s, std::size_t index) {
    const auto& ts = s.net().transitions();
    if (index >= ts.size()) throw ValidationError("transition index out of range");
    return enabledIn(ts[index], s.marking());
}

System fireAt(const System& s, std::size_t index) {
    const auto& ts = s.net().transitions();
    if (index >= ts.size()) throw ValidationError("transition index out of range");
    const Transition& t = ts[index];
    if (!enabledIn(t, s.marking()))
        throw ValidationError("transition is not enabled");
    return System(s.netPtr(), s.marking().minus(t.input).plus(t.output));
}

std::vector<std::size_t> enabledIndices(const System& s) {
    std::vector<std::size_t> out;
    const auto& ts = s.net().transitions();
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (enabledIn(ts[i], s.marking())) out.push_back(i);
    return out;
}

} // namespace rwspt
