#pragma once

///
/// \file raprox.hpp
///
/// Real-valued AAA (adaptive Antoulas-Anderson) rational approximation:
/// greedy fitting in barycentric form, evaluation, and conversion to
/// pole/residue form.
///

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "soefrac/errors.hpp"

namespace soefrac
{

/// Sample points (strictly increasing) and function values.
struct SampleSet
{
    std::vector<double> points;
    std::vector<double> values;

    void validate() const
    {
        if (points.size() != values.size())
        {
            throw invariant_error("SampleSet: points and values differ in length");
        }
        if (points.size() < 3)
        {
            throw precondition_error("SampleSet: need at least 3 distinct points");
        }
        for (std::size_t i = 0; i < points.size(); ++i)
        {
            if (!std::isfinite(points[i]) || !std::isfinite(values[i]))
            {
                throw invariant_error("SampleSet: non-finite entry");
            }
            if (i > 0 && !(points[i] > points[i - 1]))
            {
                throw invariant_error("SampleSet: points must be strictly increasing");
            }
        }
    }
};

/// `count` logarithmically spaced points on [lo, hi], endpoints exact.
inline std::vector<double> logspace(double lo, double hi, std::size_t count)
{
    std::vector<double> out(count);
    if (count == 1)
    {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
    {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
    }
    out.front() = lo;
    out.back()  = hi;
    return out;
}

/// Samples f on a logarithmic grid of [lo, hi].
template <typename Function>
SampleSet sample_log_grid(Function&& f, double lo, double hi, std::size_t count)
{
    SampleSet s;
    s.points = logspace(lo, hi, count);
    s.values.reserve(count);
    for (double z : s.points)
    {
        s.values.push_back(f(z));
    }
    return s;
}

/// One greedy step of the AAA loop.
struct AAAIteration
{
    std::size_t sample_index = 0;   // index into the sample set
    double      support_point = 0.0;
    double      max_residual  = 0.0; // max_i |r(Z_i) - F_i| after adding the point
};

///
/// r(z) = sum_j w_j f_j / (z - z_j) / sum_j w_j / (z - z_j)
///
struct BarycentricRational
{
    std::vector<double> support;
    std::vector<double> fvals;
    std::vector<double> weights;

    bool                      converged = false; // tolerance reached
    std::vector<AAAIteration> log;
    std::vector<double>       sample_points; // candidate grid the fit was built on

    std::size_t size() const { return support.size(); }
    std::size_t degree() const { return support.empty() ? 0 : support.size() - 1; }

    double operator()(double z) const;
};

inline double eval(const BarycentricRational& r, double z)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < r.support.size(); ++j)
    {
        if (z == r.support[j])
        {
            return r.fvals[j];
        }
        const double c = r.weights[j] / (z - r.support[j]);
        num += c * r.fvals[j];
        den += c;
    }
    return num / den;
}

inline double BarycentricRational::operator()(double z) const { return eval(*this, z); }

///
/// Greedy AAA fit. Returns once max_i |r(Z_i) - F_i| <= rel_tol * max_i |F_i|
/// or once the degree reaches `max_degree` (then `converged` is false).
///
inline BarycentricRational aaa_fit(const SampleSet& samples, double rel_tol, int max_degree)
{
    samples.validate();
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
    {
        throw precondition_error("aaa_fit: rel_tol must lie in (0, 1)");
    }
    if (max_degree < 1)
    {
        throw precondition_error("aaa_fit: max_degree must be >= 1");
    }

    const auto& Z         = samples.points;
    const auto& F         = samples.values;
    const std::size_t M   = Z.size();
    const double f_scale  = std::abs(*std::max_element(
        F.begin(), F.end(), [](double a, double b) { return std::abs(a) < std::abs(b); }));
    const double threshold = rel_tol * f_scale;

    BarycentricRational r;
    r.sample_points = Z;

    std::vector<bool>   is_support(M, false);
    std::vector<double> approx(M, std::accumulate(F.begin(), F.end(), 0.0) /
                                      static_cast<double>(M));
    std::vector<std::size_t> support_idx;

    for (;;)
    {
        // argmax of the residual, ties broken by the smallest index
        std::size_t pick = M;
        double      best = -1.0;
        for (std::size_t i = 0; i < M; ++i)
        {
            if (is_support[i])
            {
                continue;
            }
            const double res = std::abs(F[i] - approx[i]);
            if (res > best)
            {
                best = res;
                pick = i;
            }
        }
        if (pick == M)
        {
            break; // every sample is a support point
        }
        is_support[pick] = true;
        support_idx.push_back(pick);

        const std::size_t n = support_idx.size();
        std::vector<std::size_t> rows;
        rows.reserve(M - n);
        for (std::size_t i = 0; i < M; ++i)
        {
            if (!is_support[i])
            {
                rows.push_back(i);
            }
        }

        Eigen::VectorXd w;
        if (rows.empty())
        {
            w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n),
                                          1.0 / std::sqrt(static_cast<double>(n)));
        }
        else
        {
            Eigen::MatrixXd loewner(rows.size(), n);
            for (std::size_t a = 0; a < rows.size(); ++a)
            {
                const std::size_t i = rows[a];
                for (std::size_t b = 0; b < n; ++b)
                {
                    const std::size_t j = support_idx[b];
                    loewner(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                        (F[i] - F[j]) / (Z[i] - Z[j]);
                }
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(loewner, Eigen::ComputeFullV);
            w = svd.matrixV().col(static_cast<Eigen::Index>(n) - 1);
        }

        r.support.resize(n);
        r.fvals.resize(n);
        r.weights.resize(n);
        for (std::size_t b = 0; b < n; ++b)
        {
            r.support[b] = Z[support_idx[b]];
            r.fvals[b]   = F[support_idx[b]];
            r.weights[b] = w(static_cast<Eigen::Index>(b));
        }

        double max_res = 0.0;
        for (std::size_t i = 0; i < M; ++i)
        {
            approx[i] = is_support[i] ? F[i] : eval(r, Z[i]);
            max_res   = std::max(max_res, std::abs(F[i] - approx[i]));
        }
        r.log.push_back({pick, Z[pick], max_res});

        if (max_res <= threshold)
        {
            r.converged = true;
            break;
        }
        if (static_cast<int>(n) - 1 >= max_degree)
        {
            break;
        }
    }
    if (r.support.size() < 2)
    {
        throw precondition_error("aaa_fit: degenerate samples, fewer than 2 support points");
    }
    return r;
}

///
/// r(z) = const_at_infinity + linear_coeff * z + sum_j residues_j / (z - poles_j)
///
struct PoleResidueForm
{
    std::vector<double> poles;
    std::vector<double> residues;
    double const_at_infinity = 0.0;
    double linear_coeff      = 0.0;

    double operator()(double z) const
    {
        double acc = const_at_infinity + linear_coeff * z;
        for (std::size_t j = 0; j < poles.size(); ++j)
        {
            acc += residues[j] / (z - poles[j]);
        }
        return acc;
    }
};

namespace detail
{

inline constexpr double infinite_pole_factor = 1e13;
inline constexpr double complex_pole_tol     = 1e-8;
inline constexpr double degenerate_sum_tol   = 1e-12;

struct barycentric_parts
{
    double num   = 0.0; // sum w f / (z - z_j)
    double den   = 0.0; // sum w / (z - z_j)
    double d_den = 0.0; // derivative of den
};

inline barycentric_parts barycentric_sums(const BarycentricRational& r, double z)
{
    barycentric_parts p;
    for (std::size_t j = 0; j < r.size(); ++j)
    {
        const double inv = 1.0 / (z - r.support[j]);
        const double c   = r.weights[j] * inv;
        p.num += c * r.fvals[j];
        p.den += c;
        p.d_den -= c * inv;
    }
    return p;
}

// Newton refinement of a zero of the barycentric denominator. Only steps
// that reduce |den| are kept.
inline double polish_pole(const BarycentricRational& r, double pole)
{
    double best     = pole;
    double best_val = std::abs(barycentric_sums(r, pole).den);
    for (int it = 0; it < 8 && best_val > 0.0; ++it)
    {
        const auto p = barycentric_sums(r, best);
        if (p.d_den == 0.0)
        {
            break;
        }
        const double next = best - p.den / p.d_den;
        const double val  = std::abs(barycentric_sums(r, next).den);
        if (!(val < best_val) || !std::isfinite(next))
        {
            break;
        }
        best     = next;
        best_val = val;
    }
    return best;
}

} // namespace detail

///
/// Partial-fraction form of a barycentric rational.
///
/// Poles are the finite eigenvalues of the arrowhead pencil
///   [0 w^T; 1 diag(z)] v = lambda diag(0, 1, ..., 1) v;
/// eigenvalues larger than 1e13 max|z_j| count as infinite. Throws
/// complex_pole_error if a finite eigenvalue is off the real line.
///
inline PoleResidueForm extract_poles(const BarycentricRational& r)
{
    const std::size_t n = r.size();
    if (n < 2)
    {
        throw precondition_error("extract_poles: need at least two support points");
    }
    const auto N = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index i = 1; i < N; ++i)
    {
        A(0, i) = r.weights[static_cast<std::size_t>(i - 1)];
        A(i, 0) = 1.0;
        A(i, i) = r.support[static_cast<std::size_t>(i - 1)];
        B(i, i) = 1.0;
    }
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(A, B, false);
    if (ges.info() != Eigen::Success)
    {
        throw convergence_error("extract_poles: QZ iteration failed");
    }

    double z_max = 0.0;
    for (double z : r.support)
    {
        z_max = std::max(z_max, std::abs(z));
    }
    const double inf_threshold = detail::infinite_pole_factor * std::max(z_max, 1.0e-300);

    PoleResidueForm out;
    const auto alphas = ges.alphas();
    const auto betas  = ges.betas();
    for (Eigen::Index i = 0; i < N; ++i)
    {
        const double beta = betas(i);
        if (beta == 0.0)
        {
            continue;
        }
        const std::complex<double> lambda = alphas(i) / beta;
        if (!std::isfinite(lambda.real()) || std::abs(lambda) > inf_threshold)
        {
            continue;
        }
        if (std::abs(lambda.imag()) > detail::complex_pole_tol * (1.0 + std::abs(lambda.real())))
        {
            throw complex_pole_error("extract_poles: complex pole " +
                                     std::to_string(lambda.real()) + " + " +
                                     std::to_string(lambda.imag()) + "i");
        }
        out.poles.push_back(detail::polish_pole(r, lambda.real()));
    }
    std::sort(out.poles.begin(), out.poles.end());
    for (std::size_t j = 1; j < out.poles.size(); ++j)
    {
        if (out.poles[j] == out.poles[j - 1])
        {
            throw invariant_error("extract_poles: repeated pole");
        }
    }

    double w_sum  = 0.0;
    double w_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        w_sum += r.weights[j];
        w_norm += r.weights[j] * r.weights[j];
    }
    w_norm = std::sqrt(w_norm);
    const bool affine = std::abs(w_sum) < detail::degenerate_sum_tol * w_norm;

    // Residues, constant and (if degenerate) slope are fitted jointly to r by
    // relatively weighted least squares on the sample grid. N/D' alone loses
    // absolute accuracy for poles far outside the grid, whose large residues
    // then pollute the constant.
    const auto& grid = r.sample_points.empty() ? r.support : r.sample_points;
    const auto rows  = static_cast<Eigen::Index>(grid.size());
    const auto cols  = static_cast<Eigen::Index>(out.poles.size() + (affine ? 2 : 1));
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        const double z     = grid[static_cast<std::size_t>(i)];
        const double value = eval(r, z);
        const double scale = value != 0.0 ? 1.0 / std::abs(value) : 1.0;
        Eigen::Index col   = 0;
        for (double pole : out.poles)
        {
            design(i, col++) = scale / (z - pole);
        }
        design(i, col++) = scale;
        if (affine)
        {
            design(i, col++) = scale * z;
        }
        rhs(i) = scale * value;
    }
    const Eigen::VectorXd norms = design.colwise().norm();
    for (Eigen::Index j = 0; j < cols; ++j)
    {
        design.col(j) /= norms(j);
    }
    Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
    coef.array() /= norms.array();

    out.residues.assign(coef.data(), coef.data() + out.poles.size());
    const auto tail       = static_cast<Eigen::Index>(out.poles.size());
    out.const_at_infinity = coef(tail);
    out.linear_coeff      = affine ? coef(tail + 1) : 0.0;
    return out;
}

} // namespace soefrac
