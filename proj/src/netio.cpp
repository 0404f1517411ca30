#include "rwspt/netio.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <utility>
#include <vector>

#include "rwspt/errors.hpp"

namespace rwspt {

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string tranText(const Transition& t) {
    std::string out = "[";
    out += bagText(t.input);
    out += ", ";
    out += bagText(t.output);
    out += ", ";
    out += bagText(t.inhibitor);
    out += "] |-> << ";
    out += quoted(t.tag);
    out += ", ";
    out += doubleText(t.rate);
    out += " >>";
    return out;
}

// ---- lexer ----

enum class Tok {
    Ident, Number, String,
    Eq, LBracket, RBracket, Comma, Semi, Plus, Dot,
    MapsTo, LAngle2, RAngle2, LAngle, RAngle, LParen, RParen,
    End
};

struct Token {
    Tok kind;
    std::string text; // ident name, number text, or unescaped string body
    bool numberHasDotOrExp = false;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { next(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        next();
        return t;
    }

private:
    void advance() {
        if (pos_ < src_.size()) {
            if (src_[pos_] == '\n') { ++line_; col_ = 1; } else ++col_;
            ++pos_;
        }
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

    void next() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            advance();
        tok_ = Token{Tok::End, "", false, line_, col_};
        if (pos_ >= src_.size()) return;
        const char c = src_[pos_];
        if (c == '"') { lexString(); return; }
        if (c >= '0' && c <= '9') { lexNumber(); return; }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') { lexIdent(); return; }
        switch (c) {
            case '=': tok_.kind = Tok::Eq; advance(); return;
            case '[': tok_.kind = Tok::LBracket; advance(); return;
            case ']': tok_.kind = Tok::RBracket; advance(); return;
            case ',': tok_.kind = Tok::Comma; advance(); return;
            case ';': tok_.kind = Tok::Semi; advance(); return;
            case '+': tok_.kind = Tok::Plus; advance(); return;
            case '.': tok_.kind = Tok::Dot; advance(); return;
            case '(': tok_.kind = Tok::LParen; advance(); return;
            case ')': tok_.kind = Tok::RParen; advance(); return;
            case '<':
                advance();
                if (pos_ < src_.size() && src_[pos_] == '<') { tok_.kind = Tok::LAngle2; advance(); }
                else tok_.kind = Tok::LAngle;
                return;
            case '>':
                advance();
                if (pos_ < src_.size() && src_[pos_] == '>') { tok_.kind = Tok::RAngle2; advance(); }
                else tok_.kind = Tok::RAngle;
                return;
            case '|':
                advance();
                if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
                    advance(); advance();
                    tok_.kind = Tok::MapsTo;
                    return;
                }
                fail("expected '|->'");
            case '-':
                advance();
                if (pos_ < src_.size() && src_[pos_] == '>') {
                    advance();
                    tok_.kind = Tok::MapsTo;
                    return;
                }
                fail("expected '->'");
            default:
                fail("unexpected character");
        }
    }

    void lexString() {
        tok_.kind = Tok::String;
        advance(); // opening quote
        std::string body;
        while (true) {
            if (pos_ >= src_.size()) fail("unterminated string");
            char c = src_[pos_];
            if (c == '"') { advance(); break; }
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size()) fail("unterminated escape");
                char e = src_[pos_];
                if (e != '"' && e != '\\') fail("unknown escape (only \\\" and \\\\)");
                body.push_back(e);
                advance();
                continue;
            }
            body.push_back(c);
            advance();
        }
        tok_.text = std::move(body);
    }

    void lexNumber() {
        tok_.kind = Tok::Number;
        std::string text;
        while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
            text.push_back(src_[pos_]);
            advance();
        }
        // A dot is part of the number only when a digit follows; this is what
        // separates the float "0.5" from the bag term "3 . place".
        if (pos_ + 1 < src_.size() && src_[pos_] == '.' && src_[pos_ + 1] >= '0' &&
            src_[pos_ + 1] <= '9') {
            tok_.numberHasDotOrExp = true;
            text.push_back('.');
            advance();
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
                text.push_back(src_[pos_]);
                advance();
            }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && src_[look] >= '0' && src_[look] <= '9') {
                tok_.numberHasDotOrExp = true;
                while (pos_ < look) { text.push_back(src_[pos_]); advance(); }
                while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') {
                    text.push_back(src_[pos_]);
                    advance();
                }
            }
        }
        tok_.text = std::move(text);
    }

    void lexIdent() {
        tok_.kind = Tok::Ident;
        std::string text;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '_') {
                text.push_back(c);
                advance();
            } else break;
        }
        tok_.text = std::move(text);
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// ---- parser ----

class Parser {
public:
    explicit Parser(const std::string& src) : lex_(src) {}

    NetDocument parseDocument() {
        expectIdent("net");
        expect(Tok::Eq, "'='");
        std::vector<Transition> trans;
        Token first = lex_.peek();
        trans.push_back(parseTran());
        while (lex_.peek().kind == Tok::Semi) {
            lex_.take();
            trans.push_back(parseTran());
        }
        NetDocument doc;
        try {
            doc.net = Net(std::move(trans));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), first.line, first.col);
        }
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "m0") {
            lex_.take();
            expect(Tok::Eq, "'='");
            doc.initialMarking = parseBag();
        }
        expect(Tok::End, "end of input");
        return doc;
    }

    Marking parseBagOnly() {
        Marking b = parseBag();
        expect(Tok::End, "end of input");
        return b;
    }

private:
    [[noreturn]] void fail(const Token& at, const std::string& msg) {
        throw ParseError(msg, at.line, at.col);
    }

    Token expect(Tok kind, const std::string& what) {
        Token t = lex_.take();
        if (t.kind != kind) fail(t, "expected " + what);
        return t;
    }

    void expectIdent(const std::string& name) {
        Token t = lex_.take();
        if (t.kind != Tok::Ident || t.text != name) fail(t, "expected '" + name + "'");
    }

    Transition parseTran() {
        Token start = lex_.peek();
        expect(Tok::LBracket, "'['");
        Marking input = parseBag();
        expect(Tok::Comma, "','");
        Marking output = parseBag();
        expect(Tok::Comma, "','");
        Marking inhibitor = parseBag();
        expect(Tok::RBracket, "']'");
        expect(Tok::MapsTo, "'|->'");
        expect(Tok::LAngle2, "'<<'");
        Token tag = expect(Tok::String, "transition tag string");
        expect(Tok::Comma, "','");
        Token rateTok = expect(Tok::Number, "rate");
        double rate = 0;
        auto [p, ec] = std::from_chars(rateTok.text.data(), rateTok.text.data() + rateTok.text.size(), rate);
        if (ec != std::errc() || p != rateTok.text.data() + rateTok.text.size())
            fail(rateTok, "malformed rate");
        expect(Tok::RAngle2, "'>>'");
        try {
            return Transition(std::move(input), std::move(output), std::move(inhibitor),
                              tag.text, rate);
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), start.line, start.col);
        }
    }

    Marking parseBag() {
        if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "nilP") {
            lex_.take();
            return Marking{};
        }
        Marking b;
        parseTerm(b);
        while (lex_.peek().kind == Tok::Plus) {
            lex_.take();
            parseTerm(b);
        }
        return b;
    }

    void parseTerm(Marking& into) {
        Token n = expect(Tok::Number, "multiplicity");
        if (n.numberHasDotOrExp) fail(n, "multiplicity must be a natural number");
        std::uint64_t mult = 0;
        auto [p, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), mult);
        if (ec != std::errc()) fail(n, "multiplicity out of range");
        (void)p;
        expect(Tok::Dot, "'.'");
        into.add(parsePlace(), mult);
    }

    Place parsePlace() {
        Token start = lex_.take();
        if (start.kind != Tok::Ident || start.text != "p") fail(start, "expected place 'p(...)'");
        expect(Tok::LParen, "'('");
        std::vector<LabelPair> pairs;
        while (lex_.peek().kind == Tok::LAngle) {
            Token open = lex_.take();
            Token tag = expect(Tok::String, "tag string");
            expect(Tok::Semi, "';'");
            Token idx = expect(Tok::Number, "index");
            if (idx.numberHasDotOrExp) fail(idx, "index must be a natural number");
            std::uint64_t index = 0;
            auto [p, ec] = std::from_chars(idx.text.data(), idx.text.data() + idx.text.size(), index);
            if (ec != std::errc() || index > 0xFFFFFFFFull) fail(idx, "index out of range");
            (void)p;
            expect(Tok::RAngle, "'>'");
            try {
                pairs.emplace_back(tag.text, static_cast<std::uint32_t>(index));
            } catch (const ValidationError& e) {
                throw ParseError(e.what(), open.line, open.col);
            }
        }
        Token close = expect(Tok::RParen, "')'");
        try {
            return Label(std::move(pairs));
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), close.line, close.col);
        }
    }

    Lexer lex_;
};

} // namespace

NetDocument parseNet(const std::string& text) { return Parser(text).parseDocument(); }

Marking parseMarking(const std::string& text) { return Parser(text).parseBagOnly(); }

std::string serialize(const NetDocument& doc) {
    std::string out = "net = ";
    const auto& ts = doc.net.transitions();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (i) out += "; ";
        out += tranText(ts[i]);
    }
    if (doc.initialMarking) {
        out += " m0 = ";
        out += bagText(*doc.initialMarking);
    }
    return out;
}

std::string serializeSystem(const System& s) {
    std::vector<std::pair<std::string, std::string>> rows; // (tag, rendered)
    for (const auto& t : s.net().transitions()) rows.emplace_back(t.tag, tranText(t));
    std::sort(rows.begin(), rows.end());
    std::string out = "net = ";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += "; ";
        out += rows[i].second;
    }
    out += " m0 = ";
    out += bagText(s.marking());
    return out;
}

std::string placeText(const Place& p) {
    std::string out = "p(";
    const auto& pairs = p.pairs();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) out.push_back(' ');
        out += "< ";
        out += quoted(pairs[i].tag);
        out += " ; ";
        out += std::to_string(pairs[i].index);
        out += " >";
    }
    out.push_back(')');
    return out;
}

std::string bagText(const Marking& b) {
    if (b.empty()) return "nilP";
    std::string out;
    bool first = true;
    for (const auto& [place, mult] : b) {
        if (!first) out += " + ";
        first = false;
        out += std::to_string(mult);
        out += " . ";
        out += placeText(place);
    }
    return out;
}

std::string doubleText(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

} // namespace rwspt
