#pragma once

/// \file heat1d.hpp
/// D^a u = u_xx on (0, 1) with u(0) = u(1) = 0, second differences on
/// n_cells interior points, x_j = j / (n_cells + 1).

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "soefrac/errors.hpp"
#include "soefrac/specfun.hpp"

namespace soefrac
{

struct Heat1D
{
    int n_cells = 1000;
};

class HeatOperator
{
public:
    using field_type = Eigen::VectorXd;

    explicit HeatOperator(Heat1D p) : n_(p.n_cells)
    {
        if (p.n_cells < 3)
        {
            throw precondition_error("heat1d: need at least 3 interior points");
        }
        dx_ = 1.0 / (n_ + 1);
    }

    int    size() const { return n_; }
    double dx() const { return dx_; }

    Eigen::VectorXd grid() const
    {
        Eigen::VectorXd x(n_);
        for (int j = 0; j < n_; ++j)
        {
            x(j) = (j + 1) * dx_;
        }
        return x;
    }

    Eigen::VectorXd apply_minus(double, const Eigen::VectorXd& u) const
    {
        const double s = 1.0 / (dx_ * dx_);
        Eigen::VectorXd out(n_);
        for (int j = 0; j < n_; ++j)
        {
            const double left  = j > 0 ? u(j - 1) : 0.0;
            const double right = j + 1 < n_ ? u(j + 1) : 0.0;
            out(j) = s * (left - 2.0 * u(j) + right);
        }
        return out;
    }

    Eigen::VectorXd apply_plus(double, const Eigen::VectorXd& u) const
    {
        return Eigen::VectorXd::Zero(u.size());
    }

    Eigen::VectorXd apply(double t, const Eigen::VectorXd& u) const { return apply_minus(t, u); }

    /// (I - beta Delta_h) u = rhs by the Thomas algorithm.
    Eigen::VectorXd solve_implicit(double beta, const Eigen::VectorXd& rhs) const
    {
        if (beta == 0.0)
        {
            return rhs;
        }
        const double off  = -beta / (dx_ * dx_);
        const double diag = 1.0 - 2.0 * off;
        Eigen::VectorXd c(n_);
        Eigen::VectorXd u(n_);
        c(0) = off / diag;
        u(0) = rhs(0) / diag;
        for (int j = 1; j < n_; ++j)
        {
            const double m = diag - off * c(j - 1);
            c(j) = off / m;
            u(j) = (rhs(j) - off * u(j - 1)) / m;
        }
        for (int j = n_ - 2; j >= 0; --j)
        {
            u(j) -= c(j) * u(j + 1);
        }
        return u;
    }

    Eigen::VectorXd solve_implicit_full(double beta, const Eigen::VectorXd& rhs) const
    {
        return solve_implicit(beta, rhs);
    }

    /// Discrete L2 norm sqrt(dx sum u_j^2).
    double norm(const Eigen::VectorXd& u) const { return std::sqrt(dx_ * u.squaredNorm()); }

private:
    int    n_;
    double dx_;
};

inline HeatOperator heat_operator(Heat1D p) { return HeatOperator(p); }

/// sin(pi x) sampled on the grid.
inline Eigen::VectorXd heat_initial(const HeatOperator& op)
{
    return (std::numbers::pi * op.grid().array()).sin().matrix();
}

/// E_{a,1}(-pi^2 t^a) sin(pi x) sampled on the grid.
inline Eigen::VectorXd heat_analytic(double alpha, double t, const Eigen::VectorXd& grid)
{
    if (!(t >= 0.0))
    {
        throw precondition_error("heat_analytic: t must be >= 0");
    }
    constexpr double pi = std::numbers::pi;
    const double amplitude = t == 0.0 ? 1.0 : mittag_leffler(alpha, -pi * pi * std::pow(t, alpha));
    return amplitude * (pi * grid.array()).sin().matrix();
}

} // namespace soefrac
