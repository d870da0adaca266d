#pragma once

/// \file scalar.hpp
/// Scalar linear problem D^a u = lambda u, lambda <= 0, with solution
/// u(t) = E_{a,1}(lambda t^a) u0.

#include <cmath>

#include "soefrac/errors.hpp"
#include "soefrac/specfun.hpp"

namespace soefrac
{

struct ScalarLinear
{
    double lambda = -1.0;
};

class ScalarOperator
{
public:
    using field_type = double;

    explicit ScalarOperator(ScalarLinear p) : lambda_(p.lambda)
    {
        if (!(p.lambda <= 0.0) || !std::isfinite(p.lambda))
        {
            throw precondition_error("scalar problem: lambda must be finite and <= 0");
        }
    }

    double lambda() const { return lambda_; }

    double apply_minus(double, double u) const { return lambda_ * u; }
    double apply_plus(double, double) const { return 0.0; }
    double apply(double, double u) const { return lambda_ * u; }
    double solve_implicit(double beta, double rhs) const { return rhs / (1.0 - beta * lambda_); }
    double solve_implicit_full(double beta, double rhs) const { return solve_implicit(beta, rhs); }
    double norm(double u) const { return std::abs(u); }

private:
    double lambda_;
};

inline ScalarOperator scalar_operator(ScalarLinear p) { return ScalarOperator(p); }

/// E_{a,1}(lambda t^a) u0
inline double scalar_analytic(double alpha, double lambda, double t, double u0 = 1.0)
{
    return u0 * mittag_leffler(alpha, lambda * std::pow(t, alpha));
}

} // namespace soefrac
