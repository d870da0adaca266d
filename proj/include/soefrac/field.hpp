#pragma once

/// \file field.hpp
/// State spaces handled by the steppers: a real scalar or an Eigen vector
/// (a grid function stored row-major).

#include <cmath>
#include <concepts>

#include <Eigen/Dense>

namespace soefrac
{

template <typename V>
concept Field = std::same_as<V, double> || std::same_as<V, Eigen::VectorXd>;

inline double zero_like(double) { return 0.0; }

inline Eigen::VectorXd zero_like(const Eigen::VectorXd& v)
{
    return Eigen::VectorXd::Zero(v.size());
}

inline bool all_finite(double v) { return std::isfinite(v); }

inline bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

/// Operator F = F_minus + F_plus acting on fields of type field_type.
///
/// solve_implicit(beta, rhs) returns the solution of u - beta F_minus(u) = rhs.
/// The time argument is passed through for non-autonomous problems.
template <typename Op>
concept SplitOperator = Field<typename Op::field_type> &&
    requires(const Op& op, const typename Op::field_type& u, double t, double beta) {
        { op.apply_minus(t, u) } -> std::convertible_to<typename Op::field_type>;
        { op.apply_plus(t, u) } -> std::convertible_to<typename Op::field_type>;
        { op.apply(t, u) } -> std::convertible_to<typename Op::field_type>;
        { op.solve_implicit(beta, u) } -> std::convertible_to<typename Op::field_type>;
        { op.norm(u) } -> std::convertible_to<double>;
    };

/// A split operator that can also solve u - beta F(u) = rhs with the full F,
/// as required by the theta-scheme.
template <typename Op>
concept FullyImplicitOperator = SplitOperator<Op> &&
    requires(const Op& op, const typename Op::field_type& u, double beta) {
        { op.solve_implicit_full(beta, u) } -> std::convertible_to<typename Op::field_type>;
    };

} // namespace soefrac
