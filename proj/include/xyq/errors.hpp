#pragma once

#include <stdexcept>
#include <string>

namespace xyq {

// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
// Usually means the requested evolution time is too large for the spec.
class ConvergenceFailure : public std::runtime_error {
public:
    explicit ConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

// A constructed density matrix has an eigenvalue below the accepted noise floor.
class NotPositive : public std::runtime_error {
public:
    explicit NotPositive(const std::string& what) : std::runtime_error(what) {}
};

// An entropy was requested for a spectrum with an eigenvalue below -1e-9.
class InvalidSpectrum : public std::runtime_error {
public:
    explicit InvalidSpectrum(const std::string& what) : std::runtime_error(what) {}
};

// The measurement-basis optimizer exhausted its iteration budget.
class OptimizerFailure : public std::runtime_error {
public:
    explicit OptimizerFailure(const std::string& what) : std::runtime_error(what) {}
};

// The finite-difference discord slope failed its step-halving consistency check.
class UnstableDerivative : public std::runtime_error {
public:
    explicit UnstableDerivative(const std::string& what) : std::runtime_error(what) {}
};

} // namespace xyq
