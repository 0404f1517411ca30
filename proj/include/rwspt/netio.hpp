#pragma once

#include <optional>
#include <string>

#include "rwspt/net.hpp"

namespace rwspt {

// Textual interchange form (.rwspt):
//   doc   ::= "net" "=" tran (";" tran)* ["m0" "=" bag]
//   tran  ::= "[" bag "," bag "," bag "]" ("|->"|"->") "<<" string "," float ">>"
//   bag   ::= "nilP" | term ("+" term)*      term ::= nat "." place
//   place ::= "p(" pair+ ")"                 pair ::= "<" string ";" nat ">"
// Whitespace-insensitive; strings are double-quoted, escaping only backslash
// and quote; "|->" is emitted, "->" accepted.
struct NetDocument {
    Net net;
    std::optional<Marking> initialMarking;

    bool operator==(const NetDocument& o) const {
        return net.transitions() == o.net.transitions() && initialMarking == o.initialMarking;
    }
};

NetDocument parseNet(const std::string& text);

// Order-preserving document form; parse(serialize(d)) == d.
std::string serialize(const NetDocument& doc);

// Canonical display form of a full state: transitions sorted by
// (tag, serialized arcs), marking in bag order. Injective on System values.
std::string serializeSystem(const System& s);

// Shared renderers for CSV/DOT output and tests.
std::string placeText(const Place& p);
std::string bagText(const Marking& b);
std::string doubleText(double v);
Marking parseMarking(const std::string& text);

} // namespace rwspt
