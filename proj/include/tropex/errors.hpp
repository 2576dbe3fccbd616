#pragma once

#include <stdexcept>
#include <string>

namespace tropex {

// Malformed or contract-violating input (CLI exit code 1).
struct invalid_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A requested verification failed (CLI exit code 2).
struct verification_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A configured resource bound was exceeded (CLI exit code 3).
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tropex
