#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specmerge {

/// Malformed or unsupported file content. Reported with the byte offset at
/// which decoding gave up.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// The stream ended before the declared payload did.
class TruncatedError : public std::runtime_error {
public:
    TruncatedError(const std::string& what, std::size_t expected, std::size_t actual,
                   const std::string& unit = "bytes")
        : std::runtime_error(what + ": expected " + std::to_string(expected) + " " + unit + ", got " +
                             std::to_string(actual)),
          expected_(expected),
          actual_(actual) {}

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

/// Wrong magic or version.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structurally valid stream whose content violates an invariant
/// (index out of range, unsorted or duplicate entries).
class CorruptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace specmerge
