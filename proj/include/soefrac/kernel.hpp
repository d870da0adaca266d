#pragma once

///
/// \file kernel.hpp
///
/// Sum-of-exponentials compression of the fractional integration kernel
/// K_a(t) = t^(a-1) / Gamma(a).
///
/// The Laplace symbol s^(-a) is approximated on [1/T, 1/h] by
///
///     K^(s) = sum_k c_k / (s + d_k) + c_inf,
///
/// which corresponds to K~(t) = sum_k c_k exp(-d_k t) + c_inf delta(t). The
/// coefficients come from an AAA fit of z^a on a logarithmic grid of [h, T],
/// mapped through z = 1/s.
///

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "soefrac/errors.hpp"
#include "soefrac/raprox.hpp"
#include "soefrac/specfun.hpp"

namespace soefrac
{

struct RationalKernel
{
    double alpha = 1.0;
    double h     = 1.0;
    double T     = 1.0;
    double tol   = 0.0;
    std::vector<double> c; // mode weights, >= 0
    std::vector<double> d; // mode rates, >= 0, strictly increasing
    double c_inf = 0.0;    // weight of the Dirac term

    std::size_t modes() const { return c.size(); }

    /// K^(s) = sum_k c_k / (s + d_k) + c_inf
    double laplace(double s) const
    {
        double acc = c_inf;
        for (std::size_t k = 0; k < c.size(); ++k)
        {
            acc += c[k] / (s + d[k]);
        }
        return acc;
    }

    /// Throws invariant_error if the coefficients break the kernel invariants.
    void validate() const
    {
        if (c.size() != d.size())
        {
            throw invariant_error("RationalKernel: c and d differ in length");
        }
        if (!(alpha >= 0.0 && alpha <= 1.0))
        {
            throw invariant_error("RationalKernel: alpha outside [0, 1]");
        }
        if (!(h > 0.0) || !(T >= h))
        {
            throw invariant_error("RationalKernel: need 0 < h <= T");
        }
        if (!(c_inf >= 0.0 && c_inf <= 1.0))
        {
            throw invariant_error("RationalKernel: c_inf outside [0, 1]");
        }
        if (c.empty() && alpha != 0.0)
        {
            throw invariant_error("RationalKernel: no modes although alpha != 0");
        }
        for (std::size_t k = 0; k < c.size(); ++k)
        {
            if (!std::isfinite(c[k]) || !std::isfinite(d[k]))
            {
                throw invariant_error("RationalKernel: non-finite coefficient");
            }
            if (c[k] < 0.0)
            {
                throw invariant_error("RationalKernel: negative mode weight c_" +
                                      std::to_string(k));
            }
            if (d[k] < 0.0)
            {
                throw invariant_error("RationalKernel: negative mode rate d_" +
                                      std::to_string(k));
            }
            if (k > 0 && !(d[k] > d[k - 1]))
            {
                throw invariant_error("RationalKernel: mode rates not strictly increasing");
            }
        }
    }
};

/// Exact kernel for alpha = 1: one undamped mode.
inline RationalKernel unit_kernel(double h, double T, double tol = 0.0)
{
    return RationalKernel{1.0, h, T, tol, {1.0}, {0.0}, 0.0};
}

/// Exact kernel for alpha = 0: the Dirac term only.
inline RationalKernel identity_kernel(double h, double T, double tol = 0.0)
{
    return RationalKernel{0.0, h, T, tol, {}, {}, 1.0};
}

namespace detail
{

inline constexpr double drop_mode_rel   = 1e-14;
inline constexpr double clamp_negative  = 1e-12;
inline constexpr double self_check_tol  = 1e-9;
inline constexpr int    self_check_grid = 1000;
inline constexpr int    kernel_max_degree = 60;

inline std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

/// (1 - exp(-d h)) / d with its d -> 0 limit h.
inline double exp_mass(double d, double h)
{
    if (d == 0.0)
    {
        return h;
    }
    return -std::expm1(-d * h) / d;
}

} // namespace detail

/// Everything produced while building a kernel; the CLI reports from it.
struct KernelBuild
{
    RationalKernel      kernel;
    BarycentricRational fit;
    PoleResidueForm     partial_fractions;
    double              self_check_error = 0.0;
};

///
/// Builds K~_alpha from an AAA fit of z^alpha on `n_samples` logarithmically
/// spaced points of [h, T].
///
/// Each finite pole p of the fit gives a mode with d = -1/p and
/// c = -rho/p^2; a linear term L z gives the mode (c = L, d = 0); and
/// c_inf = r(inf) - sum rho/p. The result is checked against the fit:
/// |K^(s) - r(1/s)| <= 1e-9 on [1/T, 1/h], else self_check_error.
///
inline KernelBuild build_kernel_report(double alpha, double h, double T, double tol,
                                       int n_samples = 100)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
    {
        throw precondition_error("build_kernel: alpha must lie in [0, 1]");
    }
    if (!(h > 0.0) || !(T >= h) || !std::isfinite(T))
    {
        throw precondition_error("build_kernel: need 0 < h <= T");
    }
    if (!(tol >= 1e-13 && tol <= 1e-3))
    {
        throw precondition_error("build_kernel: tol must lie in [1e-13, 1e-3]");
    }
    if (n_samples < 20)
    {
        throw precondition_error("build_kernel: n_samples must be >= 20");
    }

    KernelBuild out;
    if (alpha == 1.0)
    {
        out.kernel = unit_kernel(h, T, tol);
        return out;
    }
    if (alpha == 0.0)
    {
        out.kernel = identity_kernel(h, T, tol);
        return out;
    }
    if (T == h)
    {
        throw precondition_error("build_kernel: need h < T for 0 < alpha < 1");
    }

    const auto samples = sample_log_grid([alpha](double z) { return std::pow(z, alpha); },
                                         h, T, static_cast<std::size_t>(n_samples));
    out.fit = aaa_fit(samples, tol, detail::kernel_max_degree);
    out.partial_fractions = extract_poles(out.fit);
    const auto& pf = out.partial_fractions;

    std::vector<std::pair<double, double>> modes; // (d, c)
    double c_inf = pf.const_at_infinity;
    for (std::size_t j = 0; j < pf.poles.size(); ++j)
    {
        const double p   = pf.poles[j];
        const double rho = pf.residues[j];
        modes.emplace_back(-1.0 / p, -rho / (p * p));
        c_inf -= rho / p;
    }
    if (pf.linear_coeff != 0.0)
    {
        modes.emplace_back(0.0, pf.linear_coeff);
    }

    double c_max = 0.0;
    for (const auto& m : modes)
    {
        c_max = std::max(c_max, std::abs(m.second));
    }
    std::vector<std::pair<double, double>> kept;
    for (auto [dk, ck] : modes)
    {
        if (std::abs(ck) <= detail::drop_mode_rel * c_max)
        {
            continue;
        }
        if (ck < 0.0 && ck > -detail::clamp_negative)
        {
            ck = 0.0;
        }
        if (ck < 0.0 || dk < 0.0)
        {
            throw positivity_error("build_kernel: mode (c=" + std::to_string(ck) +
                                   ", d=" + std::to_string(dk) +
                                   ") violates c >= 0, d >= 0");
        }
        kept.emplace_back(dk, ck);
    }
    std::sort(kept.begin(), kept.end());

    RationalKernel& k = out.kernel;
    k.alpha = alpha;
    k.h     = h;
    k.T     = T;
    k.tol   = tol;
    k.c_inf = c_inf;
    for (const auto& [dk, ck] : kept)
    {
        k.d.push_back(dk);
        k.c.push_back(ck);
    }

    double worst = 0.0;
    for (double s : logspace(1.0 / T, 1.0 / h, detail::self_check_grid))
    {
        worst = std::max(worst, std::abs(k.laplace(s) - eval(out.fit, 1.0 / s)));
    }
    out.self_check_error = worst;
    if (!(worst <= detail::self_check_tol))
    {
        throw self_check_error("build_kernel: transformed kernel deviates from the fit by " +
                               detail::sci(worst));
    }
    if (k.c_inf < 0.0 && k.c_inf > -detail::clamp_negative)
    {
        k.c_inf = 0.0;
    }
    k.validate();
    return out;
}

inline RationalKernel build_kernel(double alpha, double h, double T, double tol,
                                   int n_samples = 100)
{
    return build_kernel_report(alpha, h, T, tol, n_samples).kernel;
}

/// sum_k c_k exp(-d_k t)
inline double eval_exp_kernel(const RationalKernel& k, double t)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < k.c.size(); ++j)
    {
        acc += k.c[j] * std::exp(-k.d[j] * t);
    }
    return acc;
}

/// max over n_grid log-spaced s in [1/T, 1/h] of |s^-alpha - K^(s)|.
inline double spectrum_sup_error(const RationalKernel& k, int n_grid = 1000)
{
    double worst = 0.0;
    for (double s : logspace(1.0 / k.T, 1.0 / k.h, static_cast<std::size_t>(n_grid)))
    {
        worst = std::max(worst, std::abs(std::pow(s, -k.alpha) - k.laplace(s)));
    }
    return worst;
}

/// Same as spectrum_sup_error, relative to s^-alpha.
inline double spectrum_rel_error(const RationalKernel& k, int n_grid = 1000)
{
    double worst = 0.0;
    for (double s : logspace(1.0 / k.T, 1.0 / k.h, static_cast<std::size_t>(n_grid)))
    {
        const double exact = std::pow(s, -k.alpha);
        worst = std::max(worst, std::abs(exact - k.laplace(s)) / exact);
    }
    return worst;
}

/// Closed form of int_0^h K~exp(s) ds.
inline double exp_kernel_mass(const RationalKernel& k, double h)
{
    double acc = 0.0;
    for (std::size_t j = 0; j < k.c.size(); ++j)
    {
        acc += k.c[j] * detail::exp_mass(k.d[j], h);
    }
    return acc;
}

namespace detail
{

inline constexpr double quad_abs_tol       = 1e-13;
inline constexpr int    quad_max_depth     = 40;
inline constexpr int    panels_per_decade  = 8;
inline constexpr int    sign_scan_points   = 32;

struct gk_result
{
    double value = 0.0;
    double error = 0.0; // |Kronrod - Gauss|
    double l1    = 0.0; // Kronrod estimate of the integral of |f|
};

// Gauss-Kronrod 7/15 pair on [a, b], nodes and weights from Boost.Math.
template <typename Function>
gk_result gauss_kronrod_15(const Function& f, double a, double b)
{
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss   = boost::math::quadrature::gauss<double, 7>;
    const auto& x  = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    const double mid   = 0.5 * (a + b);
    const double scale = 0.5 * (b - a);

    const double f0 = f(mid);
    double k_sum = wk[0] * f0;
    double g_sum = wg[0] * f0; // node 0 is shared; Gauss nodes are the even ones
    double l1    = wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        const double fp = f(mid + scale * x[i]);
        const double fm = f(mid - scale * x[i]);
        k_sum += wk[i] * (fp + fm);
        l1 += wk[i] * (std::abs(fp) + std::abs(fm));
        if (i % 2 == 0)
        {
            g_sum += wg[i / 2] * (fp + fm);
        }
    }
    return {scale * k_sum, scale * std::abs(k_sum - g_sum), scale * l1};
}

// Adaptive Gauss-Kronrod (7/15) with an absolute tolerance. Subintervals
// whose error estimate is below noise(a, b), the rounding level of the
// integrand there, are accepted as is.
template <typename Function, typename Noise>
double adaptive_gk(const Function& f, const Noise& noise, double a, double b, double tol,
                   int depth)
{
    const auto [value, err, l1] = gauss_kronrod_15(f, a, b);
    const double floor = std::max(64.0 * std::numeric_limits<double>::epsilon() * l1,
                                  noise(a, b));
    if (err <= tol || err <= floor)
    {
        return value;
    }
    if (depth >= quad_max_depth)
    {
        throw convergence_error("time_domain_error: quadrature did not converge on [" +
                                std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const double mid = 0.5 * (a + b);
    return adaptive_gk(f, noise, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gk(f, noise, mid, b, 0.5 * tol, depth + 1);
}

// int_a^b |g| where g is smooth: sign changes found on a scan are bracketed
// and refined so each piece is integrated without a kink.
template <typename Function, typename Noise>
double integrate_abs(const Function& g, const Noise& noise, double a, double b, double tol)
{
    std::vector<double> cuts{a};
    double prev_x = a;
    double prev_g = g(a);
    for (int i = 1; i <= sign_scan_points; ++i)
    {
        const double x  = a + (b - a) * static_cast<double>(i) / sign_scan_points;
        const double gx = g(x);
        if ((prev_g < 0.0 && gx > 0.0) || (prev_g > 0.0 && gx < 0.0))
        {
            boost::uintmax_t iters = 100;
            const auto bracket = boost::math::tools::toms748_solve(
                g, prev_x, x, prev_g, gx, boost::math::tools::eps_tolerance<double>(50), iters);
            cuts.push_back(0.5 * (bracket.first + bracket.second));
        }
        prev_x = x;
        prev_g = gx;
    }
    cuts.push_back(b);

    double total = 0.0;
    const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        total += adaptive_gk([&g](double t) { return std::abs(g(t)); }, noise, cuts[i],
                             cuts[i + 1], piece_tol, 0);
    }
    return total;
}

} // namespace detail

///
/// E_ra = || K_a - K~exp ||_L1([h,T]) + | int_0^h (K_a - K~exp) - c_inf |.
///
/// The L1 term uses adaptive quadrature on logarithmic panels of [h, T]
/// (absolute tolerance 1e-13 per panel); the local term is closed form.
///
inline double time_domain_error(const RationalKernel& k)
{
    if (!(k.alpha > 0.0 && k.alpha < 1.0))
    {
        if (k.alpha == 1.0 && k.modes() == 1 && k.c[0] == 1.0 && k.d[0] == 0.0 &&
            k.c_inf == 0.0)
        {
            return 0.0;
        }
        throw precondition_error("time_domain_error: alpha must lie in (0, 1)");
    }
    const double inv_gamma = 1.0 / gamma_fn(k.alpha);
    auto diff = [&k, inv_gamma](double t) {
        return std::pow(t, k.alpha - 1.0) * inv_gamma - eval_exp_kernel(k, t);
    };

    // K_a - K~exp cancels terms of size K_a; its rounding level over [a, b]
    // is a small multiple of eps * int_a^b K_a.
    const double inv_gamma1 = 1.0 / gamma_fn(k.alpha + 1.0);
    auto noise = [&k, inv_gamma1](double a, double b) {
        return 256.0 * std::numeric_limits<double>::epsilon() *
               (std::pow(b, k.alpha) - std::pow(a, k.alpha)) * inv_gamma1;
    };

    const double decades = std::log10(k.T / k.h);
    const int panels = std::max(1, static_cast<int>(std::ceil(decades * detail::panels_per_decade)));
    const auto edges = logspace(k.h, k.T, static_cast<std::size_t>(panels) + 1);
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    {
        l1 += detail::integrate_abs(diff, noise, edges[i], edges[i + 1], detail::quad_abs_tol);
    }

    const double local_exact = std::pow(k.h, k.alpha) * inv_gamma1;
    const double local       = std::abs(local_exact - exp_kernel_mass(k, k.h) - k.c_inf);
    return l1 + local;
}

} // namespace soefrac
