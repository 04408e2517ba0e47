#pragma once

#include <stdexcept>
#include <string>

namespace noise_logic {

// Parameter outside an operation's domain (probabilities, counts, windows).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two signals that must share a clock have different lengths.
class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An orthogonal set with k * p > 1 cannot be constructed.
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Circuit or neuron refers to a signal that does not exist (or not yet).
class UnresolvedReference : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed train / circuit file contents.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

inline void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
}

}  // namespace detail
}  // namespace noise_logic
