#ifndef QFILT_ERRORS_HPP
#define QFILT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qfilt {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A square matrix was required.
class NonSquareError : public Error {
public:
    using Error::Error;
};

/// Operands have incompatible shapes.
class ShapeMismatchError : public Error {
public:
    using Error::Error;
};

/// A matrix expected to be Hermitian is too far from its adjoint.
class NotHermitianError : public Error {
public:
    using Error::Error;
};

/// A matrix expected to be a density matrix is not positive semidefinite
/// (beyond tolerance) or has vanishing trace.
class NotDensityError : public Error {
public:
    using Error::Error;
};

/// An iterative numerical routine failed to converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// An operation received an empty collection.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Intermediate values left the representable floating-point range.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Detection efficiency outside the admissible interval (0, 1].
class BadEtaError : public Error {
public:
    using Error::Error;
};

/// Filter step diagnostics indicate the time step is too coarse.
class StepTooLargeError : public Error {
public:
    using Error::Error;
};

/// A counting-filter jump was requested while the jump intensity vanishes.
class JumpFromDarkStateError : public Error {
public:
    using Error::Error;
};

/// Requested evaluation times do not align with the simulation grid.
class GridMisalignedError : public Error {
public:
    using Error::Error;
};

/// Configuration file could not be parsed or validated.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace qfilt

#endif // QFILT_ERRORS_HPP
