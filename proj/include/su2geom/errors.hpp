#pragma once

#include <stdexcept>
#include <string>

namespace su2 {

// Logarithm requested at (or within 1e-12 of) -I, where it is non-unique.
struct AntipodeError : std::domain_error {
  explicit AntipodeError(const std::string& what) : std::domain_error(what) {}
};

// Quadratic form is not symmetric positive definite.
struct NotSPDError : std::invalid_argument {
  explicit NotSPDError(const std::string& what) : std::invalid_argument(what) {}
};

// Operation defined only for Riemannian metrics was called with an
// infinite parameter.
struct SubRiemannianUnsupportedError : std::invalid_argument {
  explicit SubRiemannianUnsupportedError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Neighbor graph failed to connect; caller should raise n or k.
struct DisconnectedGraphError : std::runtime_error {
  explicit DisconnectedGraphError(const std::string& what)
      : std::runtime_error(what) {}
};

// Expected sample spacing exceeds half the curvature scale a1*a2/a3, so the
// chord approximation backing the graph edges is not trustworthy.
struct AnisotropyTooHighError : std::runtime_error {
  AnisotropyTooHighError(const std::string& what, double gate)
      : std::runtime_error(what), gate_value(gate) {}
  double gate_value;
};

// Conservation drift in the geodesic integrator exceeded 1e-6.
struct StepTooLargeError : std::runtime_error {
  explicit StepTooLargeError(const std::string& what)
      : std::runtime_error(what) {}
};

// Too few grid radii survive the variance gate for a ratio statistic.
struct InsufficientResolutionError : std::runtime_error {
  explicit InsufficientResolutionError(const std::string& what)
      : std::runtime_error(what) {}
};

// Requested spin exceeds the hard representation cap (2j+1 <= 512).
struct CutoffExceededError : std::invalid_argument {
  explicit CutoffExceededError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Eigenvalue count at this threshold may miss omitted irreps.
struct CountTruncatedError : std::runtime_error {
  explicit CountTruncatedError(const std::string& what)
      : std::runtime_error(what) {}
};

// Heat-trace tail bound above 1e-8 at the requested time.
struct TraceTruncatedError : std::runtime_error {
  TraceTruncatedError(const std::string& what, double bound)
      : std::runtime_error(what), tail_bound(bound) {}
  double tail_bound;
};

}  // namespace su2
