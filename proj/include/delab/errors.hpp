#pragma once

#include <stdexcept>
#include <string>

namespace delab {

/// Argument outside the mathematical domain of a function (cap diameter too
/// large, k > n in a binomial, T = 0 in an interval, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Invalid experiment or query configuration (n <= d+1, eps outside (0,1),
/// unsupported dimension for a closed form, ...).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input violating a documented precondition, e.g. a point that is not on
/// the sphere it claims to be on.
class PreconditionError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Geometric degeneracy the floating-point hull or LP cannot resolve.
class DegeneracyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Experiment-level failure (too many failed trials, I/O trouble).
class ExperimentError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace delab
