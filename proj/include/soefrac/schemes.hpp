#pragma once

///
/// \file schemes.hpp
///
/// Time steppers for D^a u = F[u] with the compressed kernel. The solution is
/// u = u0 + sum_k u_k + c_inf F[u], where each mode obeys
/// u_k' + d_k u_k = c_k F[u], u_k(0) = 0. One step computes the history
/// H = u0 + sum_k gamma_k u_k, solves an implicit equation for u^{n+1}, and
/// updates the modes with
///
///     u_k^{n+1} = gamma_k u_k^n + beta1_k F(u^{n+1}) + beta2_k F(u^n).
///

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "soefrac/errors.hpp"
#include "soefrac/field.hpp"
#include "soefrac/kernel.hpp"
#include "soefrac/specfun.hpp"

namespace soefrac
{

enum class Scheme
{
    theta, ///< theta-scheme on the modal system, full F implicit
    ie,    ///< implicit Euler, IMEX splitting
    mcn,   ///< modified Crank-Nicolson (exponential integrator), IMEX splitting
};

inline std::string_view to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::theta: return "theta";
    case Scheme::ie:    return "ie";
    case Scheme::mcn:   return "mcn";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name)
{
    if (name == "theta") return Scheme::theta;
    if (name == "ie")    return Scheme::ie;
    if (name == "mcn")   return Scheme::mcn;
    throw precondition_error("unknown scheme \"" + std::string(name) + "\"");
}

struct SchemeCoefficients
{
    Scheme scheme = Scheme::ie;
    double theta  = 1.0;
    double h      = 0.0;
    std::vector<double> gamma;
    std::vector<double> beta1;
    std::vector<double> beta2;
    double beta1_total = 0.0; // sum beta1_k + c_inf
    double beta2_total = 0.0; // sum beta2_k
    double beta_total  = 0.0; // beta1_total + beta2_total

    std::size_t modes() const { return gamma.size(); }
};

namespace detail
{

inline constexpr double mcn_taylor_switch = 1e-4;

inline void finish_totals(SchemeCoefficients& s, double c_inf)
{
    s.beta1_total = c_inf;
    s.beta2_total = 0.0;
    for (std::size_t k = 0; k < s.modes(); ++k)
    {
        s.beta1_total += s.beta1[k];
        s.beta2_total += s.beta2[k];
    }
    s.beta_total = s.beta1_total + s.beta2_total;
}

} // namespace detail

inline SchemeCoefficients theta_coefficients(const RationalKernel& k, double h, double theta)
{
    if (!(h > 0.0))
    {
        throw precondition_error("theta_coefficients: h must be positive");
    }
    if (!(theta >= 0.0 && theta <= 1.0))
    {
        throw precondition_error("theta_coefficients: theta must lie in [0, 1]");
    }
    SchemeCoefficients s;
    s.scheme = Scheme::theta;
    s.theta  = theta;
    s.h      = h;
    for (std::size_t j = 0; j < k.modes(); ++j)
    {
        const double dh  = k.d[j] * h;
        const double den = 1.0 + theta * dh;
        s.gamma.push_back((1.0 - (1.0 - theta) * dh) / den);
        s.beta1.push_back(k.c[j] * theta * h / den);
        s.beta2.push_back(k.c[j] * (1.0 - theta) * h / den);
    }
    detail::finish_totals(s, k.c_inf);
    return s;
}

inline SchemeCoefficients ie_coefficients(const RationalKernel& k, double h)
{
    if (!(h > 0.0))
    {
        throw precondition_error("ie_coefficients: h must be positive");
    }
    SchemeCoefficients s;
    s.scheme = Scheme::ie;
    s.h      = h;
    for (std::size_t j = 0; j < k.modes(); ++j)
    {
        const double den = 1.0 + k.d[j] * h;
        s.gamma.push_back(1.0 / den);
        s.beta1.push_back(k.c[j] * h / den);
        s.beta2.push_back(0.0);
    }
    detail::finish_totals(s, k.c_inf);
    return s;
}

/// (beta1, beta2) of one mode (c, d) of the modified Crank-Nicolson scheme.
/// For d h < 1e-4 the three-term Taylor expansions are used.
inline std::pair<double, double> mcn_mode_weights(double c, double d, double h)
{
    const double x = d * h;
    if (x < detail::mcn_taylor_switch)
    {
        return {c * h * (0.5 - x / 6.0 + x * x / 24.0), c * h * (0.5 - x / 3.0 + x * x / 8.0)};
    }
    const double em1   = std::expm1(-x); // gamma - 1
    const double gamma = em1 + 1.0;
    const double scale = c / (d * x);    // c / (d^2 h)
    return {scale * (em1 + x), scale * (-em1 - x * gamma)};
}

inline SchemeCoefficients mcn_coefficients(const RationalKernel& k, double h)
{
    if (!(h > 0.0))
    {
        throw precondition_error("mcn_coefficients: h must be positive");
    }
    SchemeCoefficients s;
    s.scheme = Scheme::mcn;
    s.h      = h;
    for (std::size_t j = 0; j < k.modes(); ++j)
    {
        const auto [b1, b2] = mcn_mode_weights(k.c[j], k.d[j], h);
        s.gamma.push_back(std::exp(-k.d[j] * h));
        s.beta1.push_back(b1);
        s.beta2.push_back(b2);
    }
    detail::finish_totals(s, k.c_inf);
    return s;
}

inline SchemeCoefficients make_coefficients(const RationalKernel& k, Scheme scheme, double h,
                                            double theta = 0.5)
{
    switch (scheme)
    {
    case Scheme::theta: return theta_coefficients(k, h, theta);
    case Scheme::ie:    return ie_coefficients(k, h);
    case Scheme::mcn:   return mcn_coefficients(k, h);
    }
    throw precondition_error("make_coefficients: unknown scheme");
}

/// Second-order fractional Adams-Moulton pair (h^a / Gamma(a+2), a h^a / Gamma(a+2)).
inline std::pair<double, double> adams_moulton_reference(double alpha, double h)
{
    if (!(alpha > 0.0 && alpha <= 1.0) || !(h >= 0.0))
    {
        throw precondition_error("adams_moulton_reference: need alpha in (0,1], h >= 0");
    }
    const double b = std::pow(h, alpha) / gamma_fn(alpha + 2.0);
    return {b, alpha * b};
}

template <Field V>
struct SolverState
{
    double t  = 0.0;
    long   n  = 0;
    V      u0;
    V      u;
    std::vector<V> modes; // ascending d_k
    V      f_prev;        // F(u^n)
};

template <SplitOperator Op>
SolverState<typename Op::field_type> initial_state(const typename Op::field_type& u0,
                                                   const Op& op, std::size_t mode_count)
{
    using V = typename Op::field_type;
    SolverState<V> s;
    s.u0     = u0;
    s.u      = u0;
    s.modes  = std::vector<V>(mode_count, zero_like(u0));
    s.f_prev = op.apply(0.0, u0);
    return s;
}

/// Advances `state` by one step of size coeffs.h.
template <SplitOperator Op>
void step(SolverState<typename Op::field_type>& state, const Op& op,
          const SchemeCoefficients& coeffs)
{
    using V = typename Op::field_type;
    if (state.modes.size() != coeffs.modes())
    {
        throw precondition_error("step: state and coefficients have different mode counts");
    }

    V history = state.u0;
    for (std::size_t k = 0; k < coeffs.modes(); ++k)
    {
        history += coeffs.gamma[k] * state.modes[k];
    }

    V next;
    if (coeffs.scheme == Scheme::theta)
    {
        if constexpr (FullyImplicitOperator<Op>)
        {
            V rhs = history + coeffs.beta2_total * state.f_prev;
            next  = op.solve_implicit_full(coeffs.beta1_total, rhs);
        }
        else
        {
            throw precondition_error("step: the theta-scheme needs a fully implicit solver, "
                                     "which this operator does not provide");
        }
    }
    else
    {
        V rhs = history + coeffs.beta_total * op.apply_plus(state.t, state.u);
        next  = op.solve_implicit(coeffs.beta_total, rhs);
    }

    const double t_next = state.t + coeffs.h;
    V f_next = op.apply(t_next, next);
    for (std::size_t k = 0; k < coeffs.modes(); ++k)
    {
        V& mode = state.modes[k];
        mode    = coeffs.gamma[k] * mode + coeffs.beta1[k] * f_next;
        if (coeffs.beta2[k] != 0.0)
        {
            mode += coeffs.beta2[k] * state.f_prev;
        }
    }

    state.u      = std::move(next);
    state.f_prev = std::move(f_next);
    state.t      = t_next;
    state.n += 1;
}

/// Time series produced by run(); one entry per step including t = 0.
struct RunRecord
{
    std::vector<double> t;
    std::vector<double> norm;
    std::vector<double> energy; // empty when no energy observer was given
    std::vector<double> err;    // empty when no error observer was given
};

template <Field V>
struct Observers
{
    std::function<double(const V&)> energy;
    std::function<double(double, const V&)> error;
    /// Called with (n, t, u) after every step and once for the initial state.
    std::function<void(long, double, const V&)> on_step;
};

/// Number of steps T/h, requiring T/h to be an integer up to rounding.
inline long step_count(double h, double T)
{
    if (!(h > 0.0) || !(T >= 0.0))
    {
        throw precondition_error("run: need h > 0 and T >= 0");
    }
    const double ratio = T / h;
    const double n     = std::round(ratio);
    if (std::abs(ratio - n) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, n))
    {
        throw precondition_error("run: T/h is not an integer");
    }
    return static_cast<long>(n);
}

/// Runs N = T/h steps from u0 and samples the observers at every step.
template <SplitOperator Op>
RunRecord run(const typename Op::field_type& u0, const Op& op, const RationalKernel& k,
              Scheme scheme, double h, double T,
              const Observers<typename Op::field_type>& obs = {}, double theta = 0.5)
{
    const long steps    = step_count(h, T);
    const auto coeffs   = make_coefficients(k, scheme, h, theta);
    auto state          = initial_state(u0, op, coeffs.modes());
    RunRecord record;

    auto sample = [&]() {
        if (!all_finite(state.u))
        {
            throw convergence_error("run: non-finite solution at t = " +
                                    std::to_string(state.t));
        }
        record.t.push_back(state.t);
        record.norm.push_back(op.norm(state.u));
        if (obs.energy)
        {
            record.energy.push_back(obs.energy(state.u));
        }
        if (obs.error)
        {
            record.err.push_back(obs.error(state.t, state.u));
        }
        if (obs.on_step)
        {
            obs.on_step(state.n, state.t, state.u);
        }
    };

    sample();
    for (long n = 0; n < steps; ++n)
    {
        step(state, op, coeffs);
        state.t = static_cast<double>(state.n) * h;
        sample();
    }
    return record;
}

} // namespace soefrac
