// Four-bubble Cahn-Hilliard run: energy and mass over time.

#include <cmath>
#include <cstdio>

#include "soefrac/kernel.hpp"
#include "soefrac/problems/cahn_hilliard.hpp"
#include "soefrac/schemes.hpp"

int main()
{
    const double alpha = 0.9;
    const double h     = std::ldexp(1.0, -8);
    const double T     = 1.0;
    const auto op = soefrac::ch_operator({});
    const auto u0 = soefrac::ch_initial(op);
    const auto k  = soefrac::build_kernel(alpha, h, T, 1e-12);

    soefrac::Observers<Eigen::VectorXd> obs;
    obs.on_step = [&op](long n, double t, const Eigen::VectorXd& u) {
        if (n % 32 == 0)
        {
            std::printf("t=%.4f energy=%.8f mass=%.15f max|u|=%.4f\n", t, op.energy(u), op.mass(u),
                        u.cwiseAbs().maxCoeff());
        }
    };
    soefrac::run(u0, op, k, soefrac::Scheme::mcn, h, T, obs);
}
