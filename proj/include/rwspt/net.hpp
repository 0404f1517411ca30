#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "rwspt/label.hpp"
#include "rwspt/multiset.hpp"

namespace rwspt {

using Marking = Bag<Place>;

struct Transition {
    Marking input;
    Marking output;
    Marking inhibitor;
    std::string tag;
    double rate = 0;

    Transition() = default;
    Transition(Marking input, Marking output, Marking inhibitor, std::string tag, double rate);

    // Structural identity used by the duplicate check; the rate is excluded
    // deliberately so that equal-structure transitions differing only in rate
    // collide and are rejected.
    bool sameQuadruple(const Transition& o) const {
        return tag == o.tag && input == o.input && output == o.output && inhibitor == o.inhibitor;
    }
    bool operator==(const Transition&) const = default;
};

// Transition sequence; order-insensitive for semantics and equality,
// order-preserving for document serialization.
class Net {
public:
    Net() = default;
    explicit Net(std::vector<Transition> transitions);

    const std::vector<Transition>& transitions() const { return transitions_; }
    const std::set<Place>& places() const { return places_; }

    // Canonical binary key: equal keys iff equal transition multisets
    // (rates included). Computed once at construction.
    const std::string& canonicalKey() const { return key_; }

    bool operator==(const Net& o) const { return key_ == o.key_; }

private:
    std::vector<Transition> transitions_;
    std::set<Place> places_;
    std::string key_;
};

// A net paired with a marking over its places. The net is held behind a
// shared pointer purely as an immutable-value optimization: marking-only
// successors share structure.
class System {
public:
    System() = default;
    System(Net net, Marking marking);
    System(std::shared_ptr<const Net> net, Marking marking);

    const Net& net() const { return *net_; }
    const std::shared_ptr<const Net>& netPtr() const { return net_; }
    const Marking& marking() const { return marking_; }

    bool operator==(const System& o) const {
        return *net_ == *o.net_ && marking_ == o.marking_;
    }

private:
    std::shared_ptr<const Net> net_;
    Marking marking_;
};

const std::set<Place>& places(const Net& n);

bool enabled(const Transition& t, const System& s);
System fire(const Transition& t, const System& s);
std::vector<Transition> enabledTransitions(const System& s);

// Engine-facing variants addressing transitions by net order.
bool enabledAt(const System& s, std::size_t index);
System fireAt(const System& s, std::size_t index);
std::vector<std::size_t> enabledIndices(const System& s);

} // namespace rwspt
