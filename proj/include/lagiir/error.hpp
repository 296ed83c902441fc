#pragma once

#include <stdexcept>
#include <string>

namespace lagiir {

/// Invalid design parameters (out-of-range sigma, degree, derivative order, ...).
class DesignError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A derived quantity failed its internal consistency check.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unreadable file / stream.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lagiir
