#pragma once

#include <stdexcept>
#include <string>

namespace ctlab {

/// Bad input: malformed files, violated preconditions, invalid parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to reach the required accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A straight line meets a lattice point, so its cutting sequence is ambiguous.
class GridIncidenceError : public InputError {
public:
    using InputError::InputError;
};

/// Classification of a map too close to the identity to be meaningful.
class IndeterminateError : public InputError {
public:
    using InputError::InputError;
};

/// The trace solver landed on (or was handed) a real, Fuchsian solution.
class FuchsianBranchError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace ctlab
