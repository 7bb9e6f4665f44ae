#pragma once

#include <stdexcept>
#include <string>

namespace gsq {

// Bad user-supplied input: config keys, malformed graphs, out-of-domain args.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Graph whose eigenmodes cannot be routed onto the cavity-coupled mode by
// sign flips alone.
struct UnroutableGraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-physical covariance, integrator drift, fit
// divergence.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gsq
