#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "soefrac/kernel.hpp"
#include "soefrac/specfun.hpp"

namespace
{

using namespace soefrac;

TEST(Kernel, AlphaOneIsExact)
{
    const auto k = build_kernel(1.0, 1e-3, 1.0, 1e-12);
    ASSERT_EQ(k.modes(), 1u);
    EXPECT_EQ(k.c[0], 1.0);
    EXPECT_EQ(k.d[0], 0.0);
    EXPECT_EQ(k.c_inf, 0.0);
    EXPECT_LE(spectrum_sup_error(k), 1e-15);
    EXPECT_LE(time_domain_error(k), 1e-14);
    EXPECT_EQ(eval_exp_kernel(k, 3.7), 1.0);
}

TEST(Kernel, AlphaZeroIsTheDiracTerm)
{
    const auto k = build_kernel(0.0, 1e-3, 1.0, 1e-12);
    EXPECT_EQ(k.modes(), 0u);
    EXPECT_EQ(k.c_inf, 1.0);
}

TEST(Kernel, HalfOrderModeCountAndSigns)
{
    const auto k = build_kernel(0.5, 1e-5, 1.0, 1e-12, 100);
    EXPECT_GE(k.modes(), 8u);
    EXPECT_LE(k.modes(), 25u);
    for (std::size_t j = 0; j < k.modes(); ++j)
    {
        EXPECT_GT(k.c[j], 0.0);
        EXPECT_GE(k.d[j], 0.0);
    }
}

TEST(Kernel, InvariantsAcrossOrdersAndSteps)
{
    for (double a : {0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99})
    {
        for (double h : {1e-2, 1e-3, 1e-4, 1e-5})
        {
            SCOPED_TRACE(testing::Message() << "alpha=" << a << " h=" << h);
            const auto k = build_kernel(a, h, 1.0, 1e-12);
            EXPECT_NO_THROW(k.validate());
            EXPECT_LE(k.modes(), 25u);
            EXPECT_GE(k.c_inf, 0.0);
            EXPECT_LE(k.c_inf, 1.0);
            for (std::size_t j = 0; j < k.modes(); ++j)
            {
                EXPECT_GE(k.c[j], 0.0);
                EXPECT_GE(k.d[j], 0.0);
                if (j > 0) EXPECT_GT(k.d[j], k.d[j - 1]);
            }
        }
    }
}

TEST(Kernel, LaplaceConsistency)
{
    for (double a : {0.1, 0.5, 0.9})
    {
        for (double h : {1e-3, 1e-5})
        {
            const double tol = 1e-12;
            const auto k = build_kernel(a, h, 1.0, tol);
            const double bound = 100.0 * tol; // max of s^-a on [1/T, 1/h] is T^a = 1
            for (double s : logspace(1.0, 1.0 / h, 200))
            {
                EXPECT_LE(std::abs(std::pow(s, -a) - k.laplace(s)), bound) << "alpha=" << a << " s=" << s;
            }
        }
    }
}

TEST(Kernel, SelfCheckIsReported)
{
    const auto rep = build_kernel_report(0.5, 1e-4, 1.0, 1e-12);
    EXPECT_LE(rep.self_check_error, 1e-9);
    for (double s : logspace(1.0, 1e4, 50))
    {
        EXPECT_NEAR(rep.kernel.laplace(s), rep.fit(1.0 / s), 1e-9);
    }
}

TEST(Kernel, SpectralErrorShrinksWithTolerance)
{
    const auto loose = build_kernel(0.5, 1e-5, 1.0, 1e-4);
    const auto tight = build_kernel(0.5, 1e-5, 1.0, 1e-12);
    EXPECT_LE(spectrum_sup_error(tight), 1e-9);
    EXPECT_GT(spectrum_sup_error(loose), spectrum_sup_error(tight));
}

TEST(Kernel, TimeDomainErrorTrend)
{
    std::vector<double> e;
    for (double tol : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12})
    {
        e.push_back(time_domain_error(build_kernel(0.5, 1e-5, 1.0, tol)));
    }
    EXPECT_GE(e.front() / e.back(), 10.0);
    for (std::size_t i = 1; i < e.size(); ++i)
    {
        EXPECT_LE(e[i], 10.0 * e[i - 1]);
    }
}

// Brute-force trapezoid on a logarithmic grid of 1e7 points plus the closed-form local term.
TEST(Kernel, TimeDomainErrorMatchesBruteForce)
{
    const auto k = build_kernel(0.5, 1e-5, 1.0, 1e-12);
    const double ig = 1.0 / gamma_fn(0.5);
    const long n = 10000000;
    const double lh = std::log(k.h), lT = std::log(k.T);
    double acc = 0.0, prev = 0.0;
    for (long i = 0; i <= n; ++i)
    {
        const double t = std::exp(lh + (lT - lh) * static_cast<double>(i) / static_cast<double>(n));
        const double g = std::abs(std::pow(t, -0.5) * ig - eval_exp_kernel(k, t)) * t; // dt = t dlog t
        if (i > 0) acc += 0.5 * (g + prev);
        prev = g;
    }
    acc *= (lT - lh) / static_cast<double>(n);
    const double local = std::abs(std::pow(k.h, 0.5) / gamma_fn(1.5) - exp_kernel_mass(k, k.h) - k.c_inf);
    const double brute = acc + local;
    EXPECT_NEAR(time_domain_error(k) / brute, 1.0, 5e-3);
}

TEST(Kernel, ExpPartAtZeroIsSumOfWeights)
{
    const auto k = build_kernel(0.3, 1e-3, 1.0, 1e-12);
    double sum = 0.0;
    for (double c : k.c) sum += c;
    EXPECT_DOUBLE_EQ(eval_exp_kernel(k, 0.0), sum);
}

TEST(Kernel, ExpPartApproximatesKernelInside)
{
    const auto k = build_kernel(0.5, 1e-4, 1.0, 1e-12);
    const double exact = std::pow(0.5, -0.5) / gamma_fn(0.5);
    EXPECT_NEAR(exact, 0.7978845608028654, 1e-13);
    EXPECT_NEAR(eval_exp_kernel(k, 0.5), exact, time_domain_error(k));
}

TEST(Kernel, LocalMassConsistency)
{
    for (double a : {0.1, 0.5, 0.9})
    {
        for (double h : {1e-2, 1e-4})
        {
            const double tol = 1e-12;
            const auto k = build_kernel(a, h, 1.0, tol);
            const double exact = std::pow(h, a) / gamma_fn(a + 1.0);
            EXPECT_LE(std::abs(exp_kernel_mass(k, h) + k.c_inf - exact), time_domain_error(k) + 10.0 * tol)
                << "alpha=" << a << " h=" << h;
        }
    }
}

TEST(Kernel, Preconditions)
{
    EXPECT_THROW(build_kernel(1.5, 1e-3, 1.0, 1e-12), precondition_error);
    EXPECT_THROW(build_kernel(0.5, 0.0, 1.0, 1e-12), precondition_error);
    EXPECT_THROW(build_kernel(0.5, 2.0, 1.0, 1e-12), precondition_error);
    EXPECT_THROW(build_kernel(0.5, 1e-3, 1.0, 1e-14), precondition_error);
    EXPECT_THROW(build_kernel(0.5, 1e-3, 1.0, 1e-2), precondition_error);
    EXPECT_THROW(build_kernel(0.5, 1e-3, 1.0, 1e-12, 10), precondition_error);
    EXPECT_THROW(time_domain_error(build_kernel(0.0, 1e-3, 1.0, 1e-12)), precondition_error);
}

TEST(Kernel, ValidateRejectsBrokenKernels)
{
    RationalKernel k{0.5, 1e-3, 1.0, 1e-12, {1.0, 2.0}, {1.0, 3.0}, 0.1};
    EXPECT_NO_THROW(k.validate());
    auto bad = k;
    bad.c[0] = -0.1;
    EXPECT_THROW(bad.validate(), invariant_error);
    bad = k;
    bad.d = {3.0, 1.0};
    EXPECT_THROW(bad.validate(), invariant_error);
    bad = k;
    bad.c_inf = 1.5;
    EXPECT_THROW(bad.validate(), invariant_error);
    bad = k;
    bad.c.pop_back();
    EXPECT_THROW(bad.validate(), invariant_error);
    bad = k;
    bad.c.clear();
    bad.d.clear();
    EXPECT_THROW(bad.validate(), invariant_error);
}

} // namespace
