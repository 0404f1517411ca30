#pragma once

#include <string>

#include "rwspt/net.hpp"

namespace rwspt {

// Canonical binary serialization. This is the order authority for state
// identity, state sorting, and normal-form selection. The layout makes byte
// order coincide with semantic order:
//   - pair:  tag bytes, 0x02, index as 8 zero-padded decimal digits
//   - place: pairs root-to-leaf joined by 0x03, terminated by 0x01
//   - bag:   entries in place order, each place key followed by the
//            multiplicity as 20 zero-padded decimal digits
//   - tran:  tag, 0x02, then I/O/H bag keys separated by 0x05, then the
//            rate's IEEE-754 bits as 16 hex digits
//   - net:   sorted transition keys joined by 0x06
//   - sys:   net key, 0x07, marking bag key
// Tag bytes are restricted to [0x20, 0xFE], so every separator sorts below
// tag content and 0xFF is free for use as a comparison sentinel.
std::string placeKey(const Place& p);
std::string bagKey(const Marking& b);
std::string tranKey(const Transition& t);
std::string netKeyOf(const std::vector<Transition>& transitions);
std::string sysKey(const System& s);

namespace detail {
void appendDec(std::string& out, std::uint64_t value, int width);
void appendPlaceKey(std::string& out, const Place& p);
}

} // namespace rwspt
