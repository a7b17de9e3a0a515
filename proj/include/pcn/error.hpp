#pragma once

#include <stdexcept>
#include <string>

namespace pcn {

// Bad caller input: invalid arguments, unknown nodes, malformed experiment specs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad input data: unparsable or structurally incomplete snapshot files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pcn
