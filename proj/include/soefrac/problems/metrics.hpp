#pragma once

///
/// \file metrics.hpp
///
/// Relative error E_r = ||u - u_h|| / ||u - u0||, with the l2 norm in time over
/// the steps t >= T/3 and the problem's discrete L2 norm in space, and the
/// convergence-study harness built on it.
///

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "soefrac/errors.hpp"
#include "soefrac/field.hpp"
#include "soefrac/kernel.hpp"
#include "soefrac/schemes.hpp"

namespace soefrac
{

/// Streaming accumulator for E_r. Samples with t < t_start are ignored.
template <Field V>
class RelativeError
{
public:
    using Norm = std::function<double(const V&)>;

    RelativeError(double t_start, V u0, Norm norm)
        : t_start_(t_start), u0_(std::move(u0)), norm_(std::move(norm))
    {
    }

    /// Adds one time level: `reference` is u(t), `approx` the computed value.
    void add(double t, const V& reference, const V& approx)
    {
        if (t < t_start_)
        {
            return;
        }
        const double e = norm_(V(reference - approx));
        const double r = norm_(V(reference - u0_));
        num_ += e * e;
        den_ += r * r;
        ++count_;
    }

    long samples() const { return count_; }

    double value() const
    {
        if (count_ == 0)
        {
            throw precondition_error("relative_error: no samples on [t_start, T]");
        }
        if (den_ == 0.0)
        {
            return num_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        return std::sqrt(num_ / den_);
    }

private:
    double t_start_;
    V      u0_;
    Norm   norm_;
    double num_   = 0.0;
    double den_   = 0.0;
    long   count_ = 0;
};

/// Lower end T/3 of the error window, widened by rounding so that t = T/3
/// computed as n h is included.
inline double error_window_start(double T)
{
    return T / 3.0 * (1.0 - 1e-12);
}

///
/// E_r of a stored run against a stored reference on the same time grid.
/// Throws precondition_error if the grids differ.
///
template <Field V, typename Norm>
double relative_error(const std::vector<double>& t, const std::vector<V>& run,
                      const std::vector<V>& reference, const V& u0, double T, Norm norm)
{
    if (run.size() != t.size() || reference.size() != t.size())
    {
        throw precondition_error("relative_error: run and reference have incompatible grids");
    }
    RelativeError<V> acc(error_window_start(T), u0, norm);
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        acc.add(t[i], reference[i], run[i]);
    }
    return acc.value();
}

/// Least-squares slope of log(err) against log(h).
inline double fit_slope(const std::vector<double>& h, const std::vector<double>& err)
{
    if (h.size() != err.size() || h.size() < 2)
    {
        throw precondition_error("fit_slope: need at least two (h, err) pairs");
    }
    const double n = static_cast<double>(h.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
    {
        if (!(h[i] > 0.0) || !(err[i] > 0.0))
        {
            throw domain_error("fit_slope: h and errors must be positive");
        }
        const double x = std::log(h[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Worker count: SOEFRAC_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline unsigned worker_count()
{
    if (const char* env = std::getenv("SOEFRAC_THREADS"))
    {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
        {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, count) on up to worker_count() threads. The
/// first exception thrown by any body is rethrown.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
    {
        pool.emplace_back([&]() {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                    {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool)
    {
        th.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

struct ConvergenceResult
{
    std::vector<double> h;
    std::vector<double> err;
    double slope = 0.0;
};

/// Checks that h_list is strictly descending with at least 4 entries.
inline void check_h_list(const std::vector<double>& h_list)
{
    if (h_list.size() < 4)
    {
        throw precondition_error("convergence_study: need at least 4 step sizes");
    }
    for (std::size_t i = 0; i < h_list.size(); ++i)
    {
        if (!(h_list[i] > 0.0) || (i > 0 && !(h_list[i] < h_list[i - 1])))
        {
            throw precondition_error("convergence_study: h list must be positive and descending");
        }
    }
}

///
/// Runs `scheme` for every h in h_list with one shared kernel and returns
/// E_r against reference(t), a callable returning the reference field at
/// time t (only called for t >= T/3). Sub-runs execute concurrently.
///
template <SplitOperator Op, typename Reference>
ConvergenceResult convergence_study(const typename Op::field_type& u0, const Op& op,
                                    const RationalKernel& k, Scheme scheme,
                                    const std::vector<double>& h_list, double T,
                                    const Reference& reference, double theta = 0.5)
{
    using V = typename Op::field_type;
    check_h_list(h_list);
    ConvergenceResult out;
    out.h = h_list;
    out.err.assign(h_list.size(), 0.0);
    const double t_start = error_window_start(T);

    parallel_for(h_list.size(), [&](std::size_t i) {
        RelativeError<V> acc(t_start, u0, [&op](const V& v) { return op.norm(v); });
        Observers<V> obs;
        obs.on_step = [&](long, double t, const V& u) {
            if (t >= t_start)
            {
                acc.add(t, reference(t), u);
            }
        };
        run(u0, op, k, scheme, h_list[i], T, obs, theta);
        out.err[i] = acc.value();
    });
    out.slope = fit_slope(out.h, out.err);
    return out;
}

} // namespace soefrac
