#pragma once

#include <stdexcept>
#include <string>

namespace quib {

// Dimension or register-compatibility violation (CLI exit code 3).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Filesystem / serialization failure (CLI exit code 4).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace quib
