#pragma once

#include <stdexcept>
#include <string>

namespace fracridge {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values, mismatched shapes, out-of-range parameters.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Every singular value of the design falls under the truncation cutoff.
class DegenerateDesign : public Error {
public:
    using Error::Error;
};

/// R^2 requested on a test target with zero variance.
class UndefinedScore : public Error {
public:
    using Error::Error;
};

/// Unreadable, unwritable or malformed files.
class IoError : public Error {
public:
    using Error::Error;
};

/// A condition the algorithm guarantees cannot happen did happen.
class InternalInvariant : public Error {
public:
    using Error::Error;
};

}  // namespace fracridge
