#pragma once

#include <stdexcept>
#include <string>

namespace aqsp {

// Bad arguments or malformed input files. CLI exit code 2.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem size beyond what a routine is built for. CLI exit code 3.
class capacity_error : public std::runtime_error {
public:
  explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown at runtime (NaN amplitudes, eigensolver failure). CLI exit code 4.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aqsp
