#pragma once

#include <stdexcept>
#include <string>

namespace shs {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed file content or schema violation.
struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Value outside its documented domain (e.g. confidence not in [0,1]).
struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error(msg) {}
};

// Caller passed an argument violating an operation precondition.
struct ArgumentError : Error {
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

// Invalid polygon or raster geometry.
struct GeometryError : Error {
    explicit GeometryError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace shs
