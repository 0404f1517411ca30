#include <string>
#include <vector>

#include "doctest.h"

#include "rwspt/errors.hpp"
#include "rwspt/net.hpp"
#include "rwspt/netio.hpp"

using namespace rwspt;

namespace {

Place pl(const char* tag, std::uint32_t i) { return Place(tag, i); }

// One load transition plus one robot, as rendered in the interchange format.
const char* kLineFragment = R"(net =
  [2 . p(< "s" ; 0 >), 1 . p(< "w" ; 0 >) + 1 . p(< "w" ; 1 >), nilP] |-> << "ld", 0.5 >> ;
  [1 . p(< "w" ; 0 >), 1 . p(< "a" ; 0 >), 1 . p(< "f" ; 0 >)] |-> << "ln", 0.1 >>
)";

} // namespace

TEST_CASE("parses the two-transition line fragment") {
    const NetDocument doc = parseNet(kLineFragment);
    REQUIRE(doc.net.transitions().size() == 2);
    CHECK(!doc.initialMarking.has_value());

    const Transition& ld = doc.net.transitions()[0];
    CHECK(ld.tag == "ld");
    CHECK(ld.rate == 0.5);
    CHECK(ld.input.multiplicity(pl("s", 0)) == 2);
    CHECK(ld.output.multiplicity(pl("w", 0)) == 1);
    CHECK(ld.output.multiplicity(pl("w", 1)) == 1);
    CHECK(ld.inhibitor.empty());

    const Transition& ln = doc.net.transitions()[1];
    CHECK(ln.tag == "ln");
    CHECK(ln.rate == 0.1);
    CHECK(ln.input.multiplicity(pl("w", 0)) == 1);
    CHECK(ln.output.multiplicity(pl("a", 0)) == 1);
    CHECK(ln.inhibitor.multiplicity(pl("f", 0)) == 1);
}

TEST_CASE("plain arrow is accepted, mapped arrow is emitted") {
    const NetDocument doc =
        parseNet("net = [nilP, nilP, nilP] -> << \"t\", 1.0 >>");
    REQUIRE(doc.net.transitions().size() == 1);
    CHECK(serialize(doc).find("|->") != std::string::npos);
}

TEST_CASE("initial marking section is optional and parsed as a bag") {
    const NetDocument doc = parseNet(
        "net = [2 . p(< \"s\" ; 0 >), nilP, nilP] |-> << \"t\", 1.0 >> m0 = 4 . p(< \"s\" ; 0 >)");
    REQUIRE(doc.initialMarking.has_value());
    CHECK(doc.initialMarking->multiplicity(pl("s", 0)) == 4);
}

TEST_CASE("round trip preserves documents") {
    for (const char* text :
         {kLineFragment,
          "net = [nilP, nilP, nilP] |-> << \"t\", 1.0 >>",
          "net = [1 . p(< \"x\" ; 2 > < \"L\" ; 0 >), nilP, 2 . p(< \"y\" ; 0 >)] |-> "
          "<< \"u v\", 0.0625 >> m0 = 3 . p(< \"y\" ; 0 >)"}) {
        const NetDocument doc = parseNet(text);
        CHECK(parseNet(serialize(doc)) == doc);
    }
}

TEST_CASE("whitespace and newlines are insignificant") {
    const NetDocument compact =
        parseNet("net=[2 . p(<\"s\";0>),nilP,nilP]|-><<\"t\",0.5>>m0=1 . p(<\"s\";0>)");
    const NetDocument spaced = parseNet(
        "net\n=\n[ 2 . p( < \"s\" ; 0 > ) ,\n nilP , nilP ]\n |-> << \"t\" , 0.5 >>\n m0 = 1 . "
        "p(< \"s\" ; 0 >)");
    CHECK(compact == spaced);
}

TEST_CASE("duplicate bag terms accumulate") {
    const Marking m = parseMarking("3 . p(< \"a\" ; 0 >) + 1 . p(< \"b\" ; 0 >) + 2 . p(< \"a\" ; 0 >)");
    CHECK(m.multiplicity(pl("a", 0)) == 5);
    CHECK(m.multiplicity(pl("b", 0)) == 1);
    CHECK(parseMarking("nilP").empty());
    CHECK(parseMarking("0 . p(< \"a\" ; 0 >)").empty());
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parseNet("net =\n  [nilP nilP, nilP] |-> << \"t\", 1.0 >>");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col == 9); // the second nilP, where ',' was expected
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    try {
        parseNet("wrong = [nilP, nilP, nilP] |-> << \"t\", 1.0 >>");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 1);
        CHECK(e.col == 1);
    }

    CHECK_THROWS_AS(parseNet(""), ParseError);
    CHECK_THROWS_AS(parseNet("net = [nilP, nilP, nilP]"), ParseError);          // no arrow
    CHECK_THROWS_AS(parseNet("net = [nilP, nilP] |-> << \"t\", 1.0 >>"),        // two bags only
                    ParseError);
    CHECK_THROWS_AS(parseNet("net = [nilP, nilP, nilP] |-> << t, 1.0 >>"),      // unquoted tag
                    ParseError);
    CHECK_THROWS_AS(parseNet("net = [nilP, nilP, nilP] |-> << \"t\", 1.0"),     // unclosed
                    ParseError);
    CHECK_THROWS_AS(parseMarking("1 . p()"), ParseError);                        // empty label
    CHECK_THROWS_AS(parseMarking("1.5 . p(< \"a\" ; 0 >)"), ParseError);         // fractional mult
    CHECK_THROWS_AS(parseMarking("1 . p(< \"a\" ; 2.5 >)"), ParseError);         // fractional index
    CHECK_THROWS_AS(parseMarking("1 . p(< \"a\" ; 100000000 >)"), ParseError);   // index too large
}

TEST_CASE("semantic violations surface as positioned parse errors") {
    // Zero rate.
    try {
        parseNet("net =\n  [nilP, nilP, nilP] |-> << \"t\", 0.0 >>");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("rate") != std::string::npos);
    }
    // Duplicate transition quadruple, rates differing.
    CHECK_THROWS_AS(
        parseNet("net = [nilP, nilP, nilP] |-> << \"t\", 1.0 >> ; [nilP, nilP, nilP] |-> << \"t\", 2.0 >>"),
        ParseError);
}

TEST_CASE("unterminated strings are rejected") {
    CHECK_THROWS_AS(parseNet("net = [nilP, nilP, nilP] |-> << \"t, 1.0 >>"), ParseError);
}

TEST_CASE("system display form sorts transitions and is injective") {
    const NetDocument doc = parseNet(kLineFragment);
    Marking m;
    m.add(pl("s", 0), 2);
    const System a(doc.net, m);

    // Same system assembled with reversed transition order.
    std::vector<Transition> rev{doc.net.transitions()[1], doc.net.transitions()[0]};
    const System b(Net(rev), m);
    CHECK(serializeSystem(a) == serializeSystem(b));
    CHECK(serializeSystem(a).find(" m0 = ") != std::string::npos);

    Marking m2 = m;
    m2.add(pl("s", 0));
    const System c(doc.net, m2);
    CHECK(serializeSystem(a) != serializeSystem(c));

    // Empty marking still renders the bag section.
    const System d(doc.net, Marking{});
    CHECK(serializeSystem(d).find("m0 = nilP") != std::string::npos);
}

TEST_CASE("floating point rates round trip in shortest form") {
    CHECK(doubleText(0.5) == "0.5");
    CHECK(doubleText(0.001) == "0.001");
    CHECK(doubleText(1.0) == "1");
    CHECK(doubleText(0.1 + 0.2) != doubleText(0.3)); // distinct values stay distinct
    const NetDocument doc = parseNet("net = [nilP, nilP, nilP] |-> << \"t\", 0.30000000000000004 >>");
    CHECK(doc.net.transitions()[0].rate == 0.1 + 0.2);
}

TEST_CASE("tag strings escape quotes and backslashes") {
    Marking m;
    m.add(Place("he said \"hi\"\\", 0));
    const std::string text = bagText(m);
    CHECK(parseMarking(text) == m);
}
