#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace optomech {

/// Input outside an operation's domain (negative squeezing, eta > 1, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A computed quantity violated a numerical guard beyond its clamp tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed object, e.g. a covariance matrix that is not symmetric.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Threshold search bracket does not straddle the zero/positive boundary.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad configuration text or unknown parameter name.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Non-fatal notes (truncation leakage, quadrature convergence) collected
/// alongside a result instead of being logged globally.
struct Warnings {
  std::vector<std::string> messages;

  void add(std::string msg) { messages.push_back(std::move(msg)); }
  void append(const Warnings& other) {
    messages.insert(messages.end(), other.messages.begin(), other.messages.end());
  }
  bool empty() const { return messages.empty(); }
};

namespace detail {

inline void require_finite(double v, const char* what) {
  if (!(v - v == 0.0)) throw DomainError(std::string(what) + " must be finite");
}

// Values in (-tol, 0) are rounding noise and become 0; anything below is an error.
inline double clamp_tiny_negative(double v, double tol, const char* what) {
  if (v >= 0.0) return v;
  if (v > -tol) return 0.0;
  throw NumericalError(std::string(what) + " is negative beyond tolerance: " + std::to_string(v));
}

}  // namespace detail
}  // namespace optomech
