#pragma once

#include <stdexcept>
#include <string>

namespace tamed {

/// Invalid arguments, malformed config, or a precondition violation by the caller.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failures (unwritable output directory, missing config file).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// An evaluation was requested at (or numerically indistinguishable from) the
/// boundary of the open domain, e.g. coincident particles.
class DomainBoundaryError : public std::runtime_error {
public:
    explicit DomainBoundaryError(const std::string& what) : std::runtime_error(what) {}
};

/// A drift or Lyapunov evaluation produced a non-finite value at an
/// in-domain point. Signals a broken problem definition, not a taming event.
class ComputationalDomainError : public std::runtime_error {
public:
    explicit ComputationalDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A simulated state became non-finite. Simulation aborts; nothing is clamped.
class NonFiniteStateError : public std::runtime_error {
public:
    explicit NonFiniteStateError(const std::string& what) : std::runtime_error(what) {}
};

/// A Monte Carlo experiment exceeded its per-path quarantine budget.
class ExperimentError : public std::runtime_error {
public:
    explicit ExperimentError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tamed
