#pragma once

#include <stdexcept>
#include <string>

namespace coklab {

/// Contract violation on user-provided data (bad prime, malformed spec, guard exceeded).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested precision p^k cannot certify the requested classification.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace coklab
