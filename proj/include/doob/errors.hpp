#pragma once

#include <stdexcept>
#include <string>

namespace doob {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A table would need more support positions than the configured cap allows.
class SupportCapError : public Error {
public:
    SupportCapError(std::size_t requested, std::size_t cap)
        : Error("support cap exceeded: need " + std::to_string(requested) +
                " positions, cap is " + std::to_string(cap)),
          requested(requested), cap(cap) {}
    std::size_t requested;
    std::size_t cap;
};

// Violated precondition (bad argument, stake over capital, a >= b, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Malformed input file / JSON, with a location hint where available.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::string where = {})
        : Error(where.empty() ? what : where + ": " + what), location(std::move(where)) {}
    std::string location;
};

}  // namespace doob
