#pragma once

// Extended-precision reference for E_{alpha,beta}(x), independent of the
// library's evaluation paths. Two regimes:
//   |x|^(1/alpha) <= 100 : Taylor series summed in 100-digit arithmetic;
//   otherwise (x < 0)    : the algebraic asymptotic expansion
//                          -sum_k z^-k / Gamma(beta - alpha k), truncated
//                          before its smallest term (error ~ exp(-|x|^(1/alpha))).

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace soefrac::testing
{

using mp_real = boost::multiprecision::cpp_bin_float_100;

inline mp_real ml_series_mp(double alpha, double beta, double x, int max_terms = 20000)
{
    const mp_real a = alpha;
    const mp_real b = beta;
    const mp_real z = x;
    mp_real sum     = 1 / boost::math::tgamma(b);
    if (x == 0.0)
    {
        return sum;
    }
    mp_real power = 1;
    mp_real prev_abs = 0;
    int quiet        = 0;
    for (int k = 1; k < max_terms; ++k)
    {
        power *= z;
        const mp_real term = power / boost::math::tgamma(a * k + b);
        sum += term;
        const mp_real mag = abs(term);
        if (mag < mp_real(1e-40) * abs(sum) && mag < prev_abs)
        {
            if (++quiet == 3)
            {
                return sum;
            }
        }
        else
        {
            quiet = 0;
        }
        prev_abs = mag;
    }
    throw std::runtime_error("ml_series_mp: no convergence");
}

inline mp_real ml_asymptotic_mp(double alpha, double beta, double x)
{
    if (!(x < 0.0))
    {
        throw std::invalid_argument("ml_asymptotic_mp: negative arguments only");
    }
    const mp_real a = alpha;
    const mp_real b = beta;
    const mp_real z = x;
    mp_real sum      = 0;
    mp_real inv_pow  = 1;
    mp_real envelope = -1;
    int quiet        = 0;
    for (int k = 1; k < 100000; ++k)
    {
        inv_pow /= z;
        // |1/Gamma(b - a k)| = Gamma(a k + 1 - b) |sin(pi (b - a k))| / pi; the
        // sine makes term magnitudes oscillate, so truncate on the envelope.
        const mp_real shifted = a * k + 1 - b;
        if (shifted > 1)
        {
            const mp_real env = boost::math::tgamma(shifted) * abs(inv_pow);
            if (envelope >= 0 && env > envelope)
            {
                break;
            }
            envelope = env;
        }
        const mp_real arg = b - a * k;
        if (arg <= 0 && arg == floor(arg))
        {
            continue; // 1/Gamma vanishes at the poles
        }
        const mp_real term = -inv_pow / boost::math::tgamma(arg);
        sum += term;
        if (abs(term) < mp_real(1e-40) * abs(sum))
        {
            if (++quiet == 3)
            {
                break;
            }
        }
        else
        {
            quiet = 0;
        }
    }
    return sum;
}

inline double ml_reference(double alpha, double beta, double x)
{
    if (x < 0.0 && std::pow(-x, 1.0 / alpha) > 100.0)
    {
        return static_cast<double>(ml_asymptotic_mp(alpha, beta, x));
    }
    return static_cast<double>(ml_series_mp(alpha, beta, x));
}

} // namespace soefrac::testing
