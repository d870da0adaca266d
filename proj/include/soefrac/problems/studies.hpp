#pragma once

/// \file studies.hpp
/// Convergence studies for the three model problems. Each study builds one
/// kernel at its finest step size and reuses it for every run.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "soefrac/kernel.hpp"
#include "soefrac/problems/cahn_hilliard.hpp"
#include "soefrac/problems/heat1d.hpp"
#include "soefrac/problems/metrics.hpp"
#include "soefrac/problems/scalar.hpp"
#include "soefrac/schemes.hpp"

namespace soefrac
{

struct KernelSettings
{
    double tol       = 1e-12;
    int    n_samples = 100;
};

/// Source of kernels; the default builds a fresh one. The CLI installs a cache.
using KernelProvider = std::function<RationalKernel(double alpha, double h, double T,
                                                    const KernelSettings&)>;

inline RationalKernel provide_kernel(const KernelProvider& provider, double alpha, double h,
                                     double T, const KernelSettings& ks)
{
    if (provider)
    {
        return provider(alpha, h, T, ks);
    }
    return build_kernel(alpha, h, T, ks.tol, ks.n_samples);
}

inline double min_step(const std::vector<double>& h_list)
{
    check_h_list(h_list);
    return h_list.back();
}

inline ConvergenceResult scalar_convergence(ScalarLinear p, Scheme scheme, double alpha,
                                            const std::vector<double>& h_list, double T,
                                            const KernelSettings& ks = {},
                                            const KernelProvider& provider = {},
                                            double theta = 0.5)
{
    const auto op = scalar_operator(p);
    const auto k  = provide_kernel(provider, alpha, min_step(h_list), T, ks);
    auto reference = [alpha, &p](double t) { return scalar_analytic(alpha, p.lambda, t); };
    return convergence_study(1.0, op, k, scheme, h_list, T, reference, theta);
}

inline ConvergenceResult heat_convergence(Heat1D p, Scheme scheme, double alpha,
                                          const std::vector<double>& h_list, double T,
                                          const KernelSettings& ks = {},
                                          const KernelProvider& provider = {},
                                          double theta = 0.5)
{
    const auto op   = heat_operator(p);
    const auto k    = provide_kernel(provider, alpha, min_step(h_list), T, ks);
    const auto grid = op.grid();
    auto reference  = [alpha, &grid](double t) { return heat_analytic(alpha, t, grid); };
    return convergence_study(heat_initial(op), op, k, scheme, h_list, T, reference, theta);
}

///
/// Self-convergence of the Cahn-Hilliard problem against a run with
/// h_ref = min(h_list) / 4, compared at the time levels of the finest study
/// step. The kernel is built at h_ref.
///
inline ConvergenceResult ch_convergence(CHParams p, Scheme scheme, double alpha,
                                        const std::vector<double>& h_list, double T,
                                        const KernelSettings& ks = {},
                                        const KernelProvider& provider = {})
{
    const auto op     = ch_operator(p);
    const double h_min = min_step(h_list);
    const double h_ref = h_min / 4.0;
    const auto k      = provide_kernel(provider, alpha, h_ref, T, ks);
    const auto u0     = ch_initial(op);
    const double t_start = error_window_start(T);

    // snapshots keyed by the index of t on the h_min grid
    std::map<long, Eigen::VectorXd> snapshots;
    Observers<Eigen::VectorXd> obs;
    obs.on_step = [&](long n, double t, const Eigen::VectorXd& u) {
        if (n % 4 == 0 && t >= t_start)
        {
            snapshots.emplace(n / 4, u);
        }
    };
    run(u0, op, k, scheme, h_ref, T, obs);

    auto reference = [&snapshots, h_min](double t) -> const Eigen::VectorXd& {
        const long idx = std::lround(t / h_min);
        const auto it  = snapshots.find(idx);
        if (it == snapshots.end() || std::abs(t - static_cast<double>(idx) * h_min) > 1e-9 * h_min)
        {
            throw precondition_error("ch_convergence: step sizes must be multiples of the finest one");
        }
        return it->second;
    };
    return convergence_study(u0, op, k, scheme, h_list, T, reference);
}

/// h_list = 2^-min_exp, ..., 2^-max_exp (descending h).
inline std::vector<double> dyadic_steps(int min_exp, int max_exp)
{
    if (max_exp < min_exp)
    {
        throw precondition_error("dyadic_steps: empty exponent range");
    }
    std::vector<double> h;
    for (int e = min_exp; e <= max_exp; ++e)
    {
        h.push_back(std::ldexp(1.0, -e));
    }
    return h;
}

} // namespace soefrac
