#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

#include "tracekit/error.hpp"

namespace tracekit {

// Non-empty opaque identifier, distinguished at compile time by Tag.
template <class Tag>
class Name {
public:
  Name() = default;
  explicit Name(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw InputError(std::string(Tag::kind) + " name must be non-empty");
  }
  explicit Name(const char* value) : Name(std::string(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend bool operator==(const Name&, const Name&) = default;
  friend auto operator<=>(const Name&, const Name&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Name& n) { return os << n.value_; }

private:
  std::string value_;
};

struct ActionTag { static constexpr const char* kind = "action"; };
struct ProcessTag { static constexpr const char* kind = "process"; };
struct ThreadTag { static constexpr const char* kind = "thread"; };
struct VariableTag { static constexpr const char* kind = "variable"; };
struct LockTag { static constexpr const char* kind = "lock"; };

using ActionId = Name<ActionTag>;
using ProcessId = Name<ProcessTag>;
using ThreadId = Name<ThreadTag>;
using VariableId = Name<VariableTag>;
using LockId = Name<LockTag>;

// Events are identified by their 1-based position in the word they come from.
using EventId = std::size_t;

}  // namespace tracekit

template <class Tag>
struct std::hash<tracekit::Name<Tag>> {
  std::size_t operator()(const tracekit::Name<Tag>& n) const noexcept {
    return std::hash<std::string>{}(n.str());
  }
};
