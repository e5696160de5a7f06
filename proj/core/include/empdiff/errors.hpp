#pragma once

#include <stdexcept>
#include <string>

namespace empdiff {

// Bad knob values: out-of-range parameters, inconsistent shapes, unsupported
// target kinds, missing required config keys.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad call-site values: step indices out of range, shape mismatches between
// arguments, evaluation points a predictor cannot accept.
class argument_error : public std::invalid_argument {
 public:
  explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input files. Carries the byte offset at which parsing gave up.
class format_error : public std::runtime_error {
 public:
  format_error(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}

  std::size_t byte_offset() const { return offset_; }

 private:
  std::size_t offset_ = 0;
};

}  // namespace empdiff
