#pragma once

#include <stdexcept>
#include <string>

namespace reviewbomb {

/// Bad user input: missing files, malformed configs, unusable data.
/// The CLI maps these to exit status 1.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated. The CLI maps these to exit status 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace reviewbomb
