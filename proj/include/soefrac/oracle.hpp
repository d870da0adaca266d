#pragma once

///
/// \file oracle.hpp
///
/// Reference solver for u = u0 + K_a * F[u] by direct product-rectangle
/// quadrature of the convolution, independent of the kernel compression,
/// and the a priori error bound of the compressed schemes.
///

#include <cmath>
#include <vector>

#include "soefrac/errors.hpp"
#include "soefrac/field.hpp"
#include "soefrac/schemes.hpp"
#include "soefrac/specfun.hpp"

namespace soefrac
{

namespace detail
{

inline constexpr long   oracle_max_steps      = 100000;
inline constexpr double oracle_fixed_point_tol = 1e-12;
inline constexpr int    oracle_max_iterations  = 100;

} // namespace detail

///
/// Lag weights b_i = h^a [(i+1)^a - i^a] / Gamma(a+1), i = 0..count-1, so that
/// a_{n,j} = [(t_n - t_{j-1})^a - (t_n - t_j)^a] / Gamma(a+1) = b_{n-j}.
///
inline std::vector<double> volterra_weights(double alpha, double h, long count)
{
    if (!(alpha > 0.0 && alpha <= 1.0) || !(h > 0.0) || count < 0)
    {
        throw precondition_error("volterra_weights: need alpha in (0,1], h > 0");
    }
    const double scale = std::pow(h, alpha) / gamma_fn(alpha + 1.0);
    std::vector<double> b(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
    {
        double diff = 1.0;
        if (i > 0 && alpha != 1.0)
        {
            const double x = static_cast<double>(i);
            diff = std::pow(x, alpha) * std::expm1(alpha * std::log1p(1.0 / x));
        }
        b[static_cast<std::size_t>(i)] = scale * diff;
    }
    return b;
}

///
/// Solves u^n = u0 + sum_{j=1}^n a_{n,j} F(u^j) step by step. The implicit
/// part a_{n,n} F(u^n) is resolved by the fixed point
/// u <- solve_implicit(a_nn, rhs + a_nn F_plus(u)), tolerance 1e-12 relative
/// to the operator norm, at most 100 iterations.
///
template <SplitOperator Op>
RunRecord volterra_reference(const typename Op::field_type& u0, const Op& op, double alpha,
                             double h, double T,
                             const Observers<typename Op::field_type>& obs = {})
{
    using V = typename Op::field_type;
    const long steps = step_count(h, T);
    if (steps > detail::oracle_max_steps)
    {
        throw precondition_error("volterra_reference: more than 1e5 steps");
    }
    const auto b     = volterra_weights(alpha, h, steps);
    const double a_nn = steps > 0 ? b[0] : 0.0;

    RunRecord record;
    std::vector<V> f_hist; // F(u^j), j = 1..n
    f_hist.reserve(static_cast<std::size_t>(steps));
    V u = u0;

    auto sample = [&](long n, double t) {
        record.t.push_back(t);
        record.norm.push_back(op.norm(u));
        if (obs.energy)
        {
            record.energy.push_back(obs.energy(u));
        }
        if (obs.error)
        {
            record.err.push_back(obs.error(t, u));
        }
        if (obs.on_step)
        {
            obs.on_step(n, t, u);
        }
    };
    sample(0, 0.0);

    for (long n = 1; n <= steps; ++n)
    {
        const double t = static_cast<double>(n) * h;
        V memory = zero_like(u0);
        for (long j = 1; j < n; ++j)
        {
            memory += b[static_cast<std::size_t>(n - j)] * f_hist[static_cast<std::size_t>(j - 1)];
        }
        const V rhs = u0 + memory;

        V iterate = u;
        bool converged = false;
        for (int it = 0; it < detail::oracle_max_iterations; ++it)
        {
            V next = op.solve_implicit(a_nn, rhs + a_nn * op.apply_plus(t, iterate));
            const double change = op.norm(V(next - iterate));
            iterate = std::move(next);
            if (!all_finite(iterate))
            {
                break;
            }
            if (change <= detail::oracle_fixed_point_tol * std::max(1.0, op.norm(iterate)))
            {
                converged = true;
                break;
            }
        }
        if (!converged)
        {
            throw convergence_error("volterra_reference: fixed point did not converge at t = " +
                                    std::to_string(t));
        }
        u = std::move(iterate);
        f_hist.push_back(op.apply(t, u));
        sample(n, t);
    }
    return record;
}

struct BoundInputs
{
    double C_alpha  = 0.0; // kernel approximation constant
    double C1       = 0.0; // Lipschitz constant of F in u
    double C2       = 0.0; // Lipschitz constant of F in t
    double h        = 0.0;
    double T        = 0.0;
    double alpha    = 1.0;
    double rhs_norm = 0.0; // norm of D^a u
};

///
/// h^(1+a) 2 C_alpha E_{a,1}(C1 T^a) (C2 + rhs_norm), valid when
/// C1 C_alpha h^(1+a) <= 1/2.
///
inline double theorem_bound(const BoundInputs& b)
{
    if (!(b.C_alpha >= 0.0 && b.C1 >= 0.0 && b.C2 >= 0.0 && b.h >= 0.0 && b.T >= 0.0 &&
          b.rhs_norm >= 0.0))
    {
        throw precondition_error("theorem_bound: inputs must be non-negative");
    }
    if (!(b.alpha > 0.0 && b.alpha <= 1.0))
    {
        throw precondition_error("theorem_bound: alpha must lie in (0, 1]");
    }
    const double h_pow = std::pow(b.h, 1.0 + b.alpha);
    if (b.C1 * b.C_alpha * h_pow > 0.5)
    {
        throw precondition_error("theorem_bound: C1 C_alpha h^(1+alpha) exceeds 1/2");
    }
    return h_pow * 2.0 * b.C_alpha * mittag_leffler(b.alpha, b.C1 * std::pow(b.T, b.alpha)) *
           (b.C2 + b.rhs_norm);
}

} // namespace soefrac
