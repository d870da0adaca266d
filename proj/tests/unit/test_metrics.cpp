#include <atomic>
#include <cmath>
#include <cstdlib>
#include <vector>

#include <gtest/gtest.h>

#include "soefrac/problems/csv.hpp"
#include "soefrac/problems/metrics.hpp"
#include "soefrac/problems/studies.hpp"

namespace
{

using namespace soefrac;

TEST(RelativeError, ExactRunIsZeroAndFrozenRunIsOne)
{
    const std::vector<double> t{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> ref;
    for (double s : t) ref.push_back(std::exp(-s));
    const auto norm = [](double v) { return std::abs(v); };
    EXPECT_EQ(relative_error(t, ref, ref, 1.0, 1.0, norm), 0.0);
    const std::vector<double> frozen(t.size(), 1.0);
    EXPECT_EQ(relative_error(t, frozen, ref, 1.0, 1.0, norm), 1.0);
    EXPECT_THROW(relative_error(t, std::vector<double>{1.0}, ref, 1.0, 1.0, norm), precondition_error);
}

TEST(RelativeError, WindowStartsAtOneThird)
{
    RelativeError<double> acc(error_window_start(3.0), 0.0, [](double v) { return std::abs(v); });
    acc.add(0.5, 1.0, 100.0);
    acc.add(1.0, 2.0, 1.0);
    EXPECT_EQ(acc.samples(), 1);
    EXPECT_DOUBLE_EQ(acc.value(), 0.5);
    RelativeError<double> empty(1.0, 0.0, [](double v) { return std::abs(v); });
    EXPECT_THROW(empty.value(), precondition_error);
}

TEST(Slope, RecoversPowerLaw)
{
    std::vector<double> h, e;
    for (int k = 0; k < 5; ++k)
    {
        h.push_back(std::ldexp(1.0, -k));
        e.push_back(3.0 * std::pow(h.back(), 1.7));
    }
    EXPECT_NEAR(fit_slope(h, e), 1.7, 1e-13);
    EXPECT_THROW(fit_slope({1.0}, {1.0}), precondition_error);
    EXPECT_THROW(fit_slope({1.0, 0.5}, {0.0, 1.0}), domain_error);
}

TEST(Parallel, RunsEveryIndexAndRethrows)
{
    std::vector<std::atomic<int>> seen(100);
    parallel_for(seen.size(), [&seen](std::size_t i) { seen[i]++; });
    for (auto& s : seen) EXPECT_EQ(s.load(), 1);
    EXPECT_THROW(parallel_for(10, [](std::size_t i) { if (i == 7) throw convergence_error("x"); }),
                 convergence_error);
}

TEST(Parallel, ThreadCap)
{
    ::setenv("SOEFRAC_THREADS", "3", 1);
    EXPECT_EQ(worker_count(), 3u);
    ::setenv("SOEFRAC_THREADS", "zero", 1);
    EXPECT_GE(worker_count(), 1u);
    ::unsetenv("SOEFRAC_THREADS");
}

TEST(Study, ScalarOrders)
{
    const auto h = dyadic_steps(6, 12);
    const KernelSettings ks{1e-13, 100};
    EXPECT_NEAR(scalar_convergence({-1.0}, Scheme::ie, 0.5, h, 1.0, ks).slope, 1.0, 0.15);
    EXPECT_NEAR(scalar_convergence({-1.0}, Scheme::mcn, 0.5, h, 1.0, ks).slope, 1.5, 0.15);
    EXPECT_NEAR(scalar_convergence({-1.0}, Scheme::mcn, 1.0, h, 1.0, ks).slope, 2.0, 0.2);
}

TEST(Study, HeatErrorShrinks)
{
    const auto r = heat_convergence({1000}, Scheme::mcn, 0.5, dyadic_steps(7, 10), 1.0, {1e-13, 100});
    for (std::size_t i = 1; i < r.err.size(); ++i) EXPECT_LT(r.err[i], r.err[i - 1]);
    EXPECT_NEAR(r.err[0] / r.err[1], std::pow(2.0, 1.5), 0.4);
}

TEST(Study, KernelProviderIsUsedOnceAtFinestStep)
{
    int calls = 0;
    double seen_h = 0.0;
    KernelProvider p = [&](double a, double h, double T, const KernelSettings& ks) {
        ++calls;
        seen_h = h;
        return build_kernel(a, h, T, ks.tol, ks.n_samples);
    };
    scalar_convergence({-1.0}, Scheme::ie, 0.5, dyadic_steps(4, 7), 1.0, {}, p);
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(seen_h, std::ldexp(1.0, -7));
}

TEST(Study, Preconditions)
{
    EXPECT_THROW(check_h_list({0.1, 0.05, 0.025}), precondition_error);
    EXPECT_THROW(check_h_list({0.1, 0.2, 0.05, 0.01}), precondition_error);
    EXPECT_THROW(dyadic_steps(5, 4), precondition_error);
    EXPECT_EQ(dyadic_steps(1, 2), (std::vector<double>{0.5, 0.25}));
}

TEST(Csv, RunRecordLayout)
{
    RunRecord r;
    r.t = {0.0, 0.1};
    r.norm = {1.0, 1.0 / 3.0};
    r.err = {0.0, 1e-20};
    EXPECT_EQ(run_record_csv(r), "t,norm,energy,err\n0,1,,0\n0.10000000000000001,0.33333333333333331,,9.9999999999999995e-21\n");
}

TEST(Csv, ConvergenceLayout)
{
    ConvergenceResult c{{0.5, 0.25}, {0.1, 0.05}, 1.0};
    EXPECT_EQ(convergence_csv(c), "h,E_r\n0.5,0.10000000000000001\n0.25,0.050000000000000003\n# slope=1\n");
}

TEST(Format, RoundTripsAndIsLocaleFree)
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e10, 6.02214076e23})
    {
        EXPECT_EQ(std::stod(format_real(v)), v);
    }
    EXPECT_EQ(format_real(1.0), "1");
    EXPECT_EQ(format_real(0.5), "0.5");
}

} // namespace
