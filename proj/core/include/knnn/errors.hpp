#pragma once

#include <stdexcept>
#include <string>

namespace knnn {

/// Base class for all library errors. Everything thrown on a domain
/// failure derives from this, so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateSample : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class NotEnoughNeighbors : public Error {
public:
    using Error::Error;
};

class BadWidth : public Error {
public:
    using Error::Error;
};

class PlanMismatch : public Error {
public:
    using Error::Error;
};

class BadSpec : public Error {
public:
    using Error::Error;
};

class DegenerateLabels : public Error {
public:
    using Error::Error;
};

class ChecksumMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedVersion : public Error {
public:
    using Error::Error;
};

class TruncatedFile : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

} // namespace knnn
