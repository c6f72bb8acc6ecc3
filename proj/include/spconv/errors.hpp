#pragma once

#include <stdexcept>
#include <string>

namespace spconv {

// Malformed kernel file: bad magic, wrong dtype tag, truncated payload.
class FileFormatError : public std::runtime_error {
public:
    explicit FileFormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape, stride or rank constraint violated.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Input is degenerate for the requested operation (e.g. normalizing a zero kernel).
class DegenerateInputError : public std::runtime_error {
public:
    explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spconv
