#pragma once

#include <stdexcept>
#include <string>

namespace lcbp {

// State space or intermediate table exceeds a configured guard.
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// A quantity that must be positive (a table total, a message, an update
// denominator) collapsed to zero everywhere.
struct degenerate_error : std::runtime_error {
  explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

// A random generator exhausted its restart budget.
struct generation_error : std::runtime_error {
  explicit generation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lcbp
