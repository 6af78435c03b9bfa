#pragma once

#include <stdexcept>
#include <string>

namespace wsprox {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates a value invariant (non-finite entries, empty buffers).
class InvalidInput : public Error
{
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (d < 2, bad eps, ...).
class DomainError : public Error
{
public:
    using Error::Error;
};

/// Caller broke an operation precondition (e.g. addressing a hole particle).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

} // namespace wsprox
