#pragma once

#include <stdexcept>
#include <string>

namespace rwspt {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Construction-time invariant violations: empty labels, nonpositive rates,
// duplicate transitions, markings outside the net's places, bag underflow, ...
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int col)
        : Error(what + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
          line(line), col(col) {}
    int line;
    int col;
};

class NotSymmetricError : public Error {
public:
    explicit NotSymmetricError(const std::string& what) : Error(what) {}
};

} // namespace rwspt
