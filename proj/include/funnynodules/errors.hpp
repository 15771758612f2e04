#pragma once

#include <stdexcept>
#include <string>

namespace funnynodules {

// Invalid inputs: bad config fields, schema violations, rule defects.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem failures; the message names the failing path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace funnynodules
