#pragma once

///
/// \file cahn_hilliard.hpp
///
/// Fractional Cahn-Hilliard equation on the unit square with homogeneous
/// Neumann conditions,
///
///     D^a u = M Delta mu,   mu = psi(u) - eps^2 Delta u,   psi(u) = u^3 - u,
///
/// on an nx x ny cell-centered grid (row-major, index iy * nx + ix). The
/// chemistry is split as psi = psi_plus + psi_minus with psi_plus(u) = 2u
/// (implicit) and psi_minus(u) = u^3 - 3u (explicit):
///
///     F_minus(u) = M Delta (2u - eps^2 Delta u),   F_plus(u) = M Delta psi_minus(u).
///
/// The implicit operator I - 2 beta M Delta + beta M eps^2 Delta^2 is diagonal
/// in the cosine eigenbasis of the Neumann Laplacian and is inverted there.
///

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "soefrac/errors.hpp"

namespace soefrac
{

struct CHParams
{
    int    nx  = 64;
    int    ny  = 64;
    double M   = 0.05;
    double eps = 0.03;
    /// Test hook: replace psi by its linear part -u (psi_minus becomes -3u).
    bool linear_chemistry = false;
};

namespace detail
{

/// Orthonormal DCT-II matrix: C(k, i) = s_k cos(pi k (i + 1/2) / n).
inline Eigen::MatrixXd dct_matrix(int n)
{
    Eigen::MatrixXd c(n, n);
    for (int k = 0; k < n; ++k)
    {
        const double s = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int i = 0; i < n; ++i)
        {
            c(k, i) = s * std::cos(std::numbers::pi * k * (i + 0.5) / n);
        }
    }
    return c;
}

/// Eigenvalues -(4 / dx^2) sin^2(pi k / (2n)) of the Neumann second difference.
inline Eigen::VectorXd neumann_eigenvalues(int n, double dx)
{
    Eigen::VectorXd lam(n);
    for (int k = 0; k < n; ++k)
    {
        const double s = std::sin(std::numbers::pi * k / (2.0 * n));
        lam(k) = -4.0 / (dx * dx) * s * s;
    }
    return lam;
}

} // namespace detail

class CahnHilliardOperator
{
public:
    using field_type = Eigen::VectorXd;
    using Grid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    explicit CahnHilliardOperator(CHParams p) : p_(p)
    {
        if (p.nx < 8 || p.ny < 8)
        {
            throw precondition_error("cahn-hilliard: grid must be at least 8 x 8");
        }
        if (!(p.M > 0.0) || !(p.eps > 0.0))
        {
            throw precondition_error("cahn-hilliard: need M > 0 and eps > 0");
        }
        dx_    = 1.0 / p.nx;
        dy_    = 1.0 / p.ny;
        cx_    = detail::dct_matrix(p.nx);
        cy_    = detail::dct_matrix(p.ny);
        lam_x_ = detail::neumann_eigenvalues(p.nx, dx_);
        lam_y_ = detail::neumann_eigenvalues(p.ny, dy_);
    }

    const CHParams& params() const { return p_; }
    int    size() const { return p_.nx * p_.ny; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }

    /// Five-point Laplacian with Neumann reflection.
    Eigen::VectorXd laplacian(const Eigen::VectorXd& u) const
    {
        const int nx = p_.nx;
        const int ny = p_.ny;
        const double sx = 1.0 / (dx_ * dx_);
        const double sy = 1.0 / (dy_ * dy_);
        Eigen::VectorXd out(u.size());
        for (int iy = 0; iy < ny; ++iy)
        {
            for (int ix = 0; ix < nx; ++ix)
            {
                const int i = iy * nx + ix;
                const double c = u(i);
                const double w = ix > 0 ? u(i - 1) : c;
                const double e = ix + 1 < nx ? u(i + 1) : c;
                const double s = iy > 0 ? u(i - nx) : c;
                const double n = iy + 1 < ny ? u(i + nx) : c;
                out(i) = sx * (w - 2.0 * c + e) + sy * (s - 2.0 * c + n);
            }
        }
        return out;
    }

    Eigen::VectorXd psi(const Eigen::VectorXd& u) const
    {
        if (p_.linear_chemistry)
        {
            return -u;
        }
        return (u.array().cube() - u.array()).matrix();
    }

    Eigen::VectorXd psi_minus(const Eigen::VectorXd& u) const
    {
        if (p_.linear_chemistry)
        {
            return -3.0 * u;
        }
        return (u.array().cube() - 3.0 * u.array()).matrix();
    }

    /// mu = psi(u) - eps^2 Delta u
    Eigen::VectorXd chemical_potential(const Eigen::VectorXd& u) const
    {
        return psi(u) - p_.eps * p_.eps * laplacian(u);
    }

    Eigen::VectorXd apply_minus(double, const Eigen::VectorXd& u) const
    {
        return p_.M * laplacian(Eigen::VectorXd(2.0 * u - p_.eps * p_.eps * laplacian(u)));
    }

    Eigen::VectorXd apply_plus(double, const Eigen::VectorXd& u) const
    {
        return p_.M * laplacian(psi_minus(u));
    }

    Eigen::VectorXd apply(double, const Eigen::VectorXd& u) const
    {
        return p_.M * laplacian(chemical_potential(u));
    }

    /// (I - 2 beta M Delta + beta M eps^2 Delta^2) u = rhs in the cosine basis.
    Eigen::VectorXd solve_implicit(double beta, const Eigen::VectorXd& rhs) const
    {
        const int nx = p_.nx;
        const int ny = p_.ny;
        Eigen::Map<const Grid> r(rhs.data(), ny, nx);
        Grid coef = cy_ * r * cx_.transpose();
        const double e2 = p_.eps * p_.eps;
        for (int ky = 0; ky < ny; ++ky)
        {
            for (int kx = 0; kx < nx; ++kx)
            {
                const double lam = lam_y_(ky) + lam_x_(kx);
                const double symbol = 1.0 - 2.0 * beta * p_.M * lam + beta * p_.M * e2 * lam * lam;
                if (!(symbol > 0.0))
                {
                    throw invariant_error("cahn-hilliard: implicit symbol is not positive");
                }
                coef(ky, kx) /= symbol;
            }
        }
        Eigen::VectorXd out(rhs.size());
        Eigen::Map<Grid>(out.data(), ny, nx) = cy_.transpose() * coef * cx_;
        return out;
    }

    /// Discrete L2 norm sqrt(dx dy sum u^2).
    double norm(const Eigen::VectorXd& u) const
    {
        return std::sqrt(dx_ * dy_ * u.squaredNorm());
    }

    /// Grid mean of u.
    double mass(const Eigen::VectorXd& u) const { return u.mean(); }

    ///
    /// Ginzburg-Landau energy: midpoint rule for (u^2 - 1)^2 / 4 plus
    /// eps^2 / 2 |grad u|^2 from forward differences (zero flux across the
    /// boundary). Summed row by row.
    ///
    double energy(const Eigen::VectorXd& u) const
    {
        const int nx = p_.nx;
        const int ny = p_.ny;
        const double area = dx_ * dy_;
        double bulk = 0.0;
        double grad = 0.0;
        for (int iy = 0; iy < ny; ++iy)
        {
            for (int ix = 0; ix < nx; ++ix)
            {
                const int i = iy * nx + ix;
                const double w = u(i) * u(i) - 1.0;
                bulk += 0.25 * w * w;
                if (ix + 1 < nx)
                {
                    const double g = (u(i + 1) - u(i)) / dx_;
                    grad += g * g;
                }
                if (iy + 1 < ny)
                {
                    const double g = (u(i + nx) - u(i)) / dy_;
                    grad += g * g;
                }
            }
        }
        return area * (bulk + 0.5 * p_.eps * p_.eps * grad);
    }

    /// Cell-center coordinates (x, y) of flat index i.
    std::array<double, 2> center(int i) const
    {
        return {(i % p_.nx + 0.5) * dx_, (i / p_.nx + 0.5) * dy_};
    }

private:
    CHParams p_;
    double dx_ = 0.0;
    double dy_ = 0.0;
    Eigen::MatrixXd cx_;
    Eigen::MatrixXd cy_;
    Eigen::VectorXd lam_x_;
    Eigen::VectorXd lam_y_;
};

inline CahnHilliardOperator ch_operator(CHParams p) { return CahnHilliardOperator(p); }

struct Bubble
{
    double x = 0.0;
    double y = 0.0;
};

inline const std::vector<Bubble>& default_bubbles()
{
    static const std::vector<Bubble> centers{{0.3, 0.3}, {0.3, 0.7}, {0.7, 0.7}, {0.7, 0.3}};
    return centers;
}

/// u0 = sum_i tanh((r - |x - x_i|) / (sqrt(2) eps)) + 3 at the cell centers.
inline Eigen::VectorXd ch_initial(const CahnHilliardOperator& op, double r = 0.15,
                                  const std::vector<Bubble>& centers = default_bubbles())
{
    if (centers.size() != 4)
    {
        throw precondition_error("ch_initial: exactly four bubble centers are required");
    }
    for (const auto& b : centers)
    {
        if (!(b.x >= 0.0 && b.x <= 1.0 && b.y >= 0.0 && b.y <= 1.0))
        {
            throw precondition_error("ch_initial: bubble center outside the unit square");
        }
    }
    const double width = std::sqrt(2.0) * op.params().eps;
    Eigen::VectorXd u(op.size());
    for (int i = 0; i < op.size(); ++i)
    {
        const auto [x, y] = op.center(i);
        double acc = 3.0;
        for (const auto& b : centers)
        {
            acc += std::tanh((r - std::hypot(x - b.x, y - b.y)) / width);
        }
        u(i) = acc;
    }
    return u;
}

} // namespace soefrac
