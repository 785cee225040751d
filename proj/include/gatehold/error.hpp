#pragma once

#include <stdexcept>
#include <string>

namespace gatehold {

/// Raised for malformed inputs, violated preconditions and infeasible requests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gatehold
