#pragma once

#include <stdexcept>
#include <string>

namespace stylemine {

// Bad input: malformed files, schema mismatches, out-of-range parameters.
// The CLI maps this to exit status 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure while talking to an embedding backend. Retriable; carries the
// number of attempts already made.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(const std::string& what, int attempts)
      : std::runtime_error(what + " (after " + std::to_string(attempts) +
                           " attempt" + (attempts == 1 ? "" : "s") + ")"),
        attempts_(attempts) {}

  int attempts() const { return attempts_; }
  bool retriable() const { return true; }

 private:
  int attempts_;
};

}  // namespace stylemine
