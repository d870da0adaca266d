#pragma once

#include <stdexcept>
#include <string>

namespace soefrac
{

/// Base class of every error thrown by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the supported domain of a function.
class domain_error : public error
{
public:
    using error::error;
};

/// An iterative procedure (series, quadrature, fixed point) failed its own check.
class convergence_error : public error
{
public:
    using error::error;
};

/// The pole pencil produced eigenvalues off the real line.
class complex_pole_error : public error
{
public:
    using error::error;
};

/// Kernel coefficients violate c_k >= 0 or d_k >= 0.
class positivity_error : public error
{
public:
    using error::error;
};

/// The transformed kernel does not reproduce the fitted rational function.
class self_check_error : public error
{
public:
    using error::error;
};

/// Malformed input file.
class schema_error : public error
{
public:
    using error::error;
};

/// Well-formed data that breaks an invariant of its type.
class invariant_error : public error
{
public:
    using error::error;
};

/// A documented precondition of an operation does not hold.
class precondition_error : public error
{
public:
    using error::error;
};

} // namespace soefrac
