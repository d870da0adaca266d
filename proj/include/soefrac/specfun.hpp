#pragma once

///
/// \file specfun.hpp
///
/// Gamma and two-parameter Mittag-Leffler functions on the real line.
///
/// The Mittag-Leffler function E_{a,b}(x) = sum_k x^k / Gamma(a k + b) is
/// evaluated by its Taylor series where that series can be summed in double
/// precision without destructive cancellation, and otherwise by a real
/// integral representation obtained by collapsing the Hankel contour of
/// the inverse Laplace transform onto the negative real axis.
///

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "soefrac/errors.hpp"

namespace soefrac
{

/// Parameters (alpha, beta) of E_{alpha,beta}.
struct MLParams
{
    double alpha = 1.0;
    double beta  = 1.0;
};

namespace detail
{

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients). Source of
// truth: tests compare against factorials, sqrt(pi) and std::tgamma.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr std::array<double, 23> factorials = {
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0,
    1124000727777607680000.0};

inline double lanczos_sum(double z)
{
    double acc = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i)
    {
        acc += lanczos_coef[i] / (z + static_cast<double>(i));
    }
    return acc;
}

} // namespace detail

///
/// Gamma function for x > 0. Exact for integer arguments up to 23.
///
inline double gamma_fn(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
    {
        throw domain_error("gamma_fn: argument must be positive and finite, got " +
                           std::to_string(x));
    }
    if (x <= 23.0 && x == std::floor(x))
    {
        return detail::factorials[static_cast<std::size_t>(x) - 1];
    }
    if (x < 0.5)
    {
        return gamma_fn(x + 1.0) / x;
    }
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    // split the power so that t^(z+1/2) does not overflow before exp(-t)
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * std::exp(-t) * half *
           detail::lanczos_sum(z);
}

///
/// log Gamma(x) for x > 0.
///
inline double log_gamma_fn(double x)
{
    if (!(x > 0.0) || !std::isfinite(x))
    {
        throw domain_error("log_gamma_fn: argument must be positive and finite");
    }
    if (x < 0.5)
    {
        return log_gamma_fn(x + 1.0) - std::log(x);
    }
    if (x <= 100.0)
    {
        return std::log(gamma_fn(x));
    }
    const double z = x - 1.0;
    const double t = z + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(detail::lanczos_sum(z));
}

namespace detail
{

inline constexpr double ml_series_floor = -5.0;   // series never tried below this
inline constexpr double ml_x_min        = -50.0;
inline constexpr double ml_x_max        = 10.0;
inline constexpr int    ml_max_terms    = 500;
inline constexpr double ml_accept_tol   = 1e-11;  // a posteriori series error budget
inline constexpr double ml_quad_tol     = 1e-14;

struct ml_series_result
{
    double value          = 0.0;
    double abs_sum        = 0.0;  // sum of |term_k|, the cancellation scale
    double error_estimate = 0.0;
    int    terms          = 0;
    bool   converged      = false;

    bool accepted() const
    {
        return converged && std::isfinite(value) &&
               error_estimate <= ml_accept_tol * std::abs(value);
    }
};

///
/// Taylor series with Neumaier-compensated summation. Stops once three
/// consecutive terms fall below 1e-17 of the partial sum, or after 500 terms.
///
inline ml_series_result ml_series(double alpha, double beta, double x)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    ml_series_result out;

    double sum  = 1.0 / gamma_fn(beta);
    double comp = 0.0;
    out.abs_sum        = std::abs(sum);
    out.error_estimate = 10.0 * eps * out.abs_sum;
    out.terms          = 1;
    if (x == 0.0)
    {
        out.value     = sum;
        out.converged = true;
        return out;
    }

    const double log_abs_x = std::log(std::abs(x));
    int small_run          = 0;
    for (int k = 1; k < ml_max_terms; ++k)
    {
        const double arg = alpha * k + beta;
        double term;
        double term_err;
        if (arg <= 170.0)
        {
            term     = std::pow(x, k) / gamma_fn(arg);
            term_err = 10.0 * eps;
        }
        else
        {
            const double log_mag = k * log_abs_x - log_gamma_fn(arg);
            term = std::exp(log_mag);
            if (x < 0.0 && (k % 2) == 1)
            {
                term = -term;
            }
            term_err = (10.0 + std::abs(log_mag) + k * std::abs(log_abs_x)) * eps;
        }
        if (!std::isfinite(term))
        {
            out.value = term;
            return out;
        }

        const double next = sum + term;
        if (std::abs(sum) >= std::abs(term))
        {
            comp += (sum - next) + term;
        }
        else
        {
            comp += (term - next) + sum;
        }
        sum = next;
        out.abs_sum += std::abs(term);
        out.error_estimate += term_err * std::abs(term);
        out.terms = k + 1;

        if (std::abs(term) < 1e-17 * std::abs(sum + comp))
        {
            if (++small_run == 3)
            {
                out.converged = true;
                break;
            }
        }
        else
        {
            small_run = 0;
        }
    }
    out.value = sum + comp;
    out.error_estimate += 2.0 * eps * std::abs(out.value);
    return out;
}

///
/// Real integral representation, valid for 0 < alpha < 1, beta < 1 + alpha
/// and z != 0. With s = r^(1/alpha) the Hankel integrand becomes
///
///   (1/pi) s^(alpha-beta) e^(-s) [s^alpha sin(pi(1-beta)) - z sin(pi(1-beta+alpha))]
///          / (s^(2 alpha) - 2 z s^alpha cos(alpha pi) + z^2)
///
/// For z > 0 the pole s = z^(1/alpha) lies on the principal sheet and its
/// residue (1/alpha) z^((1-beta)/alpha) exp(z^(1/alpha)) is added.
///
inline double ml_integral_reduced(double alpha, double beta, double z)
{
    constexpr double pi = std::numbers::pi;
    const double sin_b  = std::sin(pi * (1.0 - beta));
    const double sin_ab = std::sin(pi * (1.0 - beta + alpha));
    const double cos_a  = std::cos(pi * alpha);

    auto integrand = [=](double s) -> double {
        if (s <= 0.0)
        {
            return 0.0;
        }
        const double sa  = std::pow(s, alpha);
        const double den = sa * sa - 2.0 * z * sa * cos_a + z * z;
        const double num = sa * sin_b - z * sin_ab;
        return std::pow(s, alpha - beta) * std::exp(-s) * num / (pi * den);
    };

    // The denominator is smallest at s^alpha = z cos(alpha pi); place a panel
    // boundary there so both double-exponential rules cluster nodes on it.
    double split = 1.0;
    if (z * cos_a > 0.0)
    {
        const double peak = std::pow(z * cos_a, 1.0 / alpha);
        if (peak < 200.0)
        {
            split = std::max(peak, 1e-8);
        }
    }

    boost::math::quadrature::tanh_sinh<double> finite_rule(15);
    boost::math::quadrature::exp_sinh<double>  tail_rule(15);
    double err_head = 0.0;
    double err_tail = 0.0;
    double l1_head  = 0.0;
    double l1_tail  = 0.0;
    const double head =
        finite_rule.integrate(integrand, 0.0, split, ml_quad_tol, &err_head, &l1_head);
    const double tail = tail_rule.integrate(integrand, split,
                                            std::numeric_limits<double>::infinity(),
                                            ml_quad_tol, &err_tail, &l1_tail);
    double value = head + tail;
    double err   = err_head + err_tail;

    if (z > 0.0)
    {
        const double root = std::pow(z, 1.0 / alpha);
        value += std::pow(z, (1.0 - beta) / alpha) * std::exp(root) / alpha;
    }
    if (!std::isfinite(value) || err > ml_accept_tol * std::abs(value))
    {
        throw convergence_error("mittag_leffler: integral representation failed its "
                                "error check (alpha=" +
                                std::to_string(alpha) + ", beta=" + std::to_string(beta) +
                                ", x=" + std::to_string(z) + ")");
    }
    return value;
}

/// Integral path for any beta > 0 via E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z.
inline double ml_integral(double alpha, double beta, double z)
{
    if (beta >= 1.0 + alpha)
    {
        const double lower = ml_integral(alpha, beta - alpha, z);
        return (lower - 1.0 / gamma_fn(beta - alpha)) / z;
    }
    return ml_integral_reduced(alpha, beta, z);
}

/// alpha == 1: closed form for integer beta, E_{1,n+1}(z) = (E_{1,n}(z) - 1/(n-1)!) / z.
inline double ml_alpha_one(double beta, double z)
{
    if (beta != std::floor(beta) || beta > 23.0)
    {
        throw domain_error("mittag_leffler: alpha = 1 with non-integer beta is only "
                           "supported for x >= -5");
    }
    double value = std::exp(z);
    for (int b = 1; b < static_cast<int>(beta); ++b)
    {
        value = (value - 1.0 / gamma_fn(b)) / z;
    }
    return value;
}

} // namespace detail

///
/// Two-parameter Mittag-Leffler function E_{alpha,beta}(x) for
/// alpha in (0, 1], beta > 0 and x in [-50, 10].
///
/// Throws domain_error outside that range or if the value overflows, and
/// convergence_error if the selected evaluation path fails its error check.
///
inline double mittag_leffler(MLParams p, double x)
{
    if (!(p.alpha > 0.0 && p.alpha <= 1.0) || !(p.beta > 0.0) || !std::isfinite(p.beta))
    {
        throw domain_error("mittag_leffler: need alpha in (0,1] and beta > 0");
    }
    if (!(x >= detail::ml_x_min && x <= detail::ml_x_max))
    {
        throw domain_error("mittag_leffler: x=" + std::to_string(x) +
                           " outside supported range [-50, 10]");
    }
    if (p.alpha == 1.0 && p.beta == 1.0)
    {
        return std::exp(x);
    }
    if (x == 0.0)
    {
        return 1.0 / gamma_fn(p.beta);
    }
    if (x >= detail::ml_series_floor)
    {
        const auto series = detail::ml_series(p.alpha, p.beta, x);
        if (series.accepted())
        {
            return series.value;
        }
    }
    if (p.alpha == 1.0)
    {
        if (x > 0.0)
        {
            throw domain_error("mittag_leffler: series did not converge");
        }
        return detail::ml_alpha_one(p.beta, x);
    }
    const double value = detail::ml_integral(p.alpha, p.beta, x);
    if (!std::isfinite(value))
    {
        throw domain_error("mittag_leffler: value overflows double");
    }
    return value;
}

/// Convenience overload for E_{alpha,1}.
inline double mittag_leffler(double alpha, double x)
{
    return mittag_leffler(MLParams{alpha, 1.0}, x);
}

} // namespace soefrac
