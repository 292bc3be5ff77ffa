#pragma once

#include <stdexcept>
#include <string>

namespace wavedyn {

/// Bad argument or unsupported configuration (maps to CLI exit code 1).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical contract was broken: non-normalized input, truncation tail too
/// heavy, failed orthonormality, empty neighborhoods... (CLI exit code 2).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ContractViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Throws InvalidArgument(what) unless `ok`.
inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}
}  // namespace wavedyn
