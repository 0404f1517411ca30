#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <utility>

#include "rwspt/errors.hpp"

namespace rwspt {

// Finite multiset over a totally ordered domain. Entries never store
// multiplicity 0; iteration order is the order on E.
template <typename E>
class Bag {
public:
    using Map = std::map<E, std::uint64_t>;

    Bag() = default;
    Bag(std::initializer_list<std::pair<E, std::uint64_t>> items) {
        for (const auto& [e, n] : items) add(e, n);
    }

    void add(const E& e, std::uint64_t n = 1) {
        if (n == 0) return;
        std::uint64_t& slot = entries_[e];
        if (std::numeric_limits<std::uint64_t>::max() - slot < n)
            throw ValidationError("bag multiplicity overflow");
        slot += n;
    }

    void subtract(const E& e, std::uint64_t n = 1) {
        if (n == 0) return;
        auto it = entries_.find(e);
        if (it == entries_.end() || it->second < n)
            throw ValidationError("bag multiplicity underflow");
        it->second -= n;
        if (it->second == 0) entries_.erase(it);
    }

    std::uint64_t multiplicity(const E& e) const {
        auto it = entries_.find(e);
        return it == entries_.end() ? 0 : it->second;
    }

    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& [e, n] : entries_) {
            if (std::numeric_limits<std::uint64_t>::max() - sum < n)
                throw ValidationError("bag total overflow");
            sum += n;
        }
        return sum;
    }

    bool empty() const { return entries_.empty(); }
    std::size_t distinct() const { return entries_.size(); }

    bool leq(const Bag& other) const {
        for (const auto& [e, n] : entries_)
            if (other.multiplicity(e) < n) return false;
        return true;
    }

    Bag plus(const Bag& other) const {
        Bag out = *this;
        for (const auto& [e, n] : other.entries_) out.add(e, n);
        return out;
    }

    Bag minus(const Bag& other) const {
        Bag out = *this;
        for (const auto& [e, n] : other.entries_) out.subtract(e, n);
        return out;
    }

    typename Map::const_iterator begin() const { return entries_.begin(); }
    typename Map::const_iterator end() const { return entries_.end(); }

    bool operator==(const Bag&) const = default;

private:
    Map entries_;
};

template <typename E>
Bag<E> add(const Bag<E>& a, const Bag<E>& b) { return a.plus(b); }

template <typename E>
Bag<E> subtract(const Bag<E>& a, const Bag<E>& b) { return a.minus(b); }

template <typename E>
bool leq(const Bag<E>& a, const Bag<E>& b) { return a.leq(b); }

template <typename E>
std::uint64_t multiplicity(const Bag<E>& a, const E& e) { return a.multiplicity(e); }

} // namespace rwspt
