#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "soefrac/raprox.hpp"

namespace
{

using namespace soefrac;

double max_rel_residual(const BarycentricRational& r, const SampleSet& s)
{
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < s.points.size(); ++i)
    {
        worst = std::max(worst, std::abs(r(s.points[i]) - s.values[i]));
        scale = std::max(scale, std::abs(s.values[i]));
    }
    return worst / scale;
}

SampleSet sqrt_samples() { return sample_log_grid([](double z) { return std::sqrt(z); }, 1e-5, 1.0, 100); }

TEST(Logspace, EndpointsAndRatio)
{
    const auto x = logspace(1e-5, 1.0, 100);
    ASSERT_EQ(x.size(), 100u);
    EXPECT_EQ(x.front(), 1e-5);
    EXPECT_EQ(x.back(), 1.0);
    for (std::size_t i = 1; i < x.size(); ++i)
    {
        EXPECT_NEAR(std::log(x[i] / x[i - 1]), std::log(1e5) / 99.0, 1e-12);
    }
}

TEST(AAA, LinearFunctionIsExactWithTwoSupportPoints)
{
    const auto s = sample_log_grid([](double z) { return z; }, 1e-5, 1.0, 100);
    const auto r = aaa_fit(s, 1e-13, 60);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.size(), 2u);
    EXPECT_LE(max_rel_residual(r, s), 1e-13);
    EXPECT_NEAR(r(0.37), 0.37, 1e-14);
}

TEST(AAA, RationalTargetIsRecoveredAndGeneralizes)
{
    auto f = [](double z) { return 1.0 / (1.0 + z); };
    const auto s = sample_log_grid(f, 0.01, 10.0, 100);
    const auto r = aaa_fit(s, 1e-12, 60);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.size(), 3u);
    double worst = 0.0;
    for (double z : logspace(0.01, 10.0, 1000))
    {
        worst = std::max(worst, std::abs(r(z) - f(z)) / f(z));
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(AAA, SqrtConvergesWithFewModes)
{
    const auto s = sqrt_samples();
    const auto r = aaa_fit(s, 1e-12, 60);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.degree(), 25u);
    EXPECT_LE(max_rel_residual(r, s), 1e-12);
    EXPECT_NEAR(r(0.25), 0.5, 1e-11);
}

TEST(AAA, InterpolatesAtSupportPoints)
{
    const auto s = sqrt_samples();
    const auto r = aaa_fit(s, 1e-12, 60);
    EXPECT_EQ(r(r.support[0]), r.fvals[0]);
    for (std::size_t j = 0; j < r.size(); ++j)
    {
        EXPECT_LE(std::abs(r(r.support[j]) - std::sqrt(r.support[j])), 1e-13 * std::sqrt(r.support[j]));
    }
}

TEST(AAA, FirstSupportPointIsFarthestFromMean)
{
    const auto s = sqrt_samples();
    const auto r = aaa_fit(s, 1e-12, 60);
    double mean = 0.0;
    for (double v : s.values) mean += v;
    mean /= static_cast<double>(s.values.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i)
    {
        if (std::abs(s.values[i] - mean) > std::abs(s.values[best] - mean)) best = i;
    }
    EXPECT_EQ(r.support[0], s.points[best]);
}

TEST(AAA, ResidualLogIsNonIncreasing)
{
    for (double a : {0.1, 0.5, 0.9})
    {
        const auto s = sample_log_grid([a](double z) { return std::pow(z, a); }, 1e-5, 1.0, 100);
        const auto r = aaa_fit(s, 1e-12, 60);
        ASSERT_EQ(r.log.size(), r.size());
        for (std::size_t i = 1; i < r.log.size(); ++i)
        {
            EXPECT_LE(r.log[i].max_residual, r.log[i - 1].max_residual) << "alpha=" << a << " i=" << i;
        }
    }
}

TEST(AAA, Deterministic)
{
    const auto s = sqrt_samples();
    const auto a = aaa_fit(s, 1e-12, 60);
    const auto b = aaa_fit(s, 1e-12, 60);
    EXPECT_EQ(a.support, b.support);
    EXPECT_EQ(a.weights, b.weights);
}

TEST(AAA, DegreeCapIsFlagged)
{
    const auto r = aaa_fit(sqrt_samples(), 1e-12, 3);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.degree(), 3u);
}

TEST(AAA, Preconditions)
{
    const auto s = sqrt_samples();
    EXPECT_THROW(aaa_fit(s, 0.0, 10), precondition_error);
    EXPECT_THROW(aaa_fit(s, 1.0, 10), precondition_error);
    EXPECT_THROW(aaa_fit(s, 1e-6, 0), precondition_error);
    EXPECT_THROW(aaa_fit(SampleSet{{0.0, 1.0}, {0.0, 1.0}}, 1e-6, 5), precondition_error);
    EXPECT_THROW(aaa_fit(SampleSet{{0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}}, 1e-6, 5), invariant_error);
}

TEST(Poles, SinglePoleOfReciprocal)
{
    const auto r = aaa_fit(sample_log_grid([](double z) { return 1.0 / (1.0 + z); }, 0.01, 10.0, 100), 1e-12, 60);
    const auto p = extract_poles(r);
    ASSERT_EQ(p.poles.size(), 1u);
    EXPECT_NEAR(p.poles[0], -1.0, 1e-10);
    EXPECT_NEAR(p.residues[0], 1.0, 1e-10);
    EXPECT_NEAR(p.const_at_infinity, 0.0, 1e-10);
}

TEST(Poles, LinearFunctionHasNoFinitePoles)
{
    const auto r = aaa_fit(sample_log_grid([](double z) { return z; }, 1e-5, 1.0, 100), 1e-13, 60);
    const auto p = extract_poles(r);
    EXPECT_TRUE(p.poles.empty());
    EXPECT_NEAR(p.linear_coeff, 1.0, 1e-12);
}

TEST(Poles, FractionalPowersHaveNegativeRealPoles)
{
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9})
    {
        const auto r = aaa_fit(sample_log_grid([a](double z) { return std::pow(z, a); }, 1e-5, 1.0, 100), 1e-12, 60);
        const auto p = extract_poles(r);
        for (double pole : p.poles)
        {
            EXPECT_LT(pole, 0.0) << "alpha=" << a;
        }
        for (std::size_t i = 0; i < p.poles.size(); ++i)
            for (std::size_t j = i + 1; j < p.poles.size(); ++j)
                EXPECT_NE(p.poles[i], p.poles[j]);
    }
}

TEST(Poles, ReconstructionMatchesBarycentricForm)
{
    for (double a : {0.1, 0.5, 0.9})
    {
        for (double lo : {1e-5, 1e-3})
        {
            const auto r = aaa_fit(sample_log_grid([a](double z) { return std::pow(z, a); }, lo, 1.0, 100), 1e-12, 60);
            const auto p = extract_poles(r);
            for (double z : logspace(lo / 10.0, 10.0, 2000))
            {
                bool near_pole = false;
                for (double pole : p.poles) near_pole |= std::abs(z - pole) < 1e-6;
                if (near_pole) continue;
                const double v = r(z);
                EXPECT_LE(std::abs(p(z) - v), 1e-9 * std::max(1.0, std::abs(v))) << "alpha=" << a << " z=" << z;
            }
        }
    }
}

TEST(Poles, ComplexPolesAreRejected)
{
    // 1 / (1 + z^2) has poles at +-i
    const auto r = aaa_fit(sample_log_grid([](double z) { return 1.0 / (1.0 + z * z); }, 0.01, 10.0, 100), 1e-12, 60);
    EXPECT_THROW(extract_poles(r), complex_pole_error);
}

} // namespace
