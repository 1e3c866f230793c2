#pragma once

#include <stdexcept>
#include <string>

namespace fracderiv {

/// Parameter outside the range where an operator or integral is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A quantity that should be non-zero vanished, or a result is unusable.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The integrand carries no usable bound on [Xi, inf).
class TailBoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fracderiv
