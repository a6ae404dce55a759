#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ddae {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, bounds or model descriptions.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Mismatched matrix or vector dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A rational growth function was evaluated at its pole.
class PoleError : public Error {
public:
    using Error::Error;
};

/// Newton iteration failed to reach its tolerance.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

    /// Step index of the failing integration step, when raised from a simulation.
    std::optional<std::size_t> step() const noexcept { return step_; }
    void set_step(std::size_t step) noexcept { step_ = step; }

private:
    int iterations_;
    double residual_;
    std::optional<std::size_t> step_;
};

/// Rank-deficient Jacobian in the equilibrium solver.
class SingularJacobian : public Error {
public:
    using Error::Error;
};

/// Numerically singular Newton matrix inside an integration step.
class SingularIteration : public Error {
public:
    using Error::Error;

    std::optional<std::size_t> step() const noexcept { return step_; }
    void set_step(std::size_t step) noexcept { step_ = step; }

private:
    std::optional<std::size_t> step_;
};

/// Finite-difference probing produced non-finite Jacobian entries.
class JacobianError : public Error {
public:
    using Error::Error;
};

/// The dense generalized eigensolver reported a failure.
class EigensolveError : public Error {
public:
    using Error::Error;
};

/// Iterative refinement of a root did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The spectrum contains a zero-magnitude root where a ratio is required.
class DegenerateSpectrum : public Error {
public:
    using Error::Error;
};

/// The damping mismatch has the same sign at both ends of the theta bracket.
class NoSignChange : public Error {
public:
    NoSignChange(const std::string& what, double phi_lo, double phi_hi)
        : Error(what), phi_lo_(phi_lo), phi_hi_(phi_hi) {}

    double phi_lo() const noexcept { return phi_lo_; }
    double phi_hi() const noexcept { return phi_hi_; }

private:
    double phi_lo_;
    double phi_hi_;
};

/// Nearest-neighbour continuation lost the tracked root.
class TrackingLost : public Error {
public:
    using Error::Error;
};

}  // namespace ddae
