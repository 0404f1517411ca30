#include "rwspt/canon.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace rwspt {

namespace detail {

void appendDec(std::string& out, std::uint64_t value, int width) {
    char buf[24];
    int i = width;
    while (i-- > 0) {
        buf[i] = static_cast<char>('0' + value % 10);
        value /= 10;
    }
    out.append(buf, static_cast<std::size_t>(width));
}

void appendPlaceKey(std::string& out, const Place& p) {
    const auto& pairs = p.pairs();
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
        if (it != pairs.rbegin()) out.push_back('\x03');
        out.append(it->tag);
        out.push_back('\x02');
        appendDec(out, it->index, 8);
    }
    out.push_back('\x01');
}

namespace {

void appendBagKey(std::string& out, const Marking& b) {
    for (const auto& [place, mult] : b) {
        appendPlaceKey(out, place);
        appendDec(out, mult, 20);
    }
}

void appendTranKey(std::string& out, const Transition& t) {
    out.append(t.tag);
    out.push_back('\x02');
    appendBagKey(out, t.input);
    out.push_back('\x05');
    appendBagKey(out, t.output);
    out.push_back('\x05');
    appendBagKey(out, t.inhibitor);
    out.push_back('\x05');
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(t.rate);
    static const char hex[] = "0123456789abcdef";
    for (int shift = 60; shift >= 0; shift -= 4)
        out.push_back(hex[(bits >> shift) & 0xF]);
}

} // namespace
} // namespace detail

std::string placeKey(const Place& p) {
    std::string out;
    detail::appendPlaceKey(out, p);
    return out;
}

std::string bagKey(const Marking& b) {
    std::string out;
    detail::appendBagKey(out, b);
    return out;
}

std::string tranKey(const Transition& t) {
    std::string out;
    detail::appendTranKey(out, t);
    return out;
}

std::string netKeyOf(const std::vector<Transition>& transitions) {
    std::vector<std::string> keys;
    keys.reserve(transitions.size());
    for (const auto& t : transitions) keys.push_back(tranKey(t));
    std::sort(keys.begin(), keys.end());
    std::string out;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i) out.push_back('\x06');
        out.append(keys[i]);
    }
    return out;
}

std::string sysKey(const System& s) {
    std::string out = s.net().canonicalKey();
    out.push_back('\x07');
    detail::appendBagKey(out, s.marking());
    return out;
}

} // namespace rwspt
