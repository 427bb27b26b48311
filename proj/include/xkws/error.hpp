#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xkws {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or empty XML input. `offset` is the byte position reported by the parser.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class NotFound : public Error {
public:
    using Error::Error;
};

/// A caller violated a precondition (mismatched keyword sets, empty query, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class BundleError : public Error {
public:
    enum class Kind { Io, Version, Checksum, Truncated, Format };
    BundleError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace xkws
