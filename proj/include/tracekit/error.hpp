#pragma once

#include <stdexcept>
#include <string>

namespace tracekit {

// Malformed or inconsistent user input (unknown letters, bad logs, bad configs).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Two structures that must agree (alphabets, process sets, trees) do not.
class StructuralError : public InputError {
public:
  using InputError::InputError;
};

// An exploration exceeded its configured state budget.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace tracekit
