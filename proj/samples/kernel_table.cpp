// Mode counts and kernel errors for a range of fractional orders.

#include <cstdio>

#include "soefrac/kernel.hpp"

int main()
{
    const double h = 1e-5;
    const double T = 1.0;
    std::printf("%6s %4s %12s %12s %12s\n", "alpha", "m", "c_inf", "eps_ra", "E_ra");
    for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9})
    {
        const auto k = soefrac::build_kernel(alpha, h, T, 1e-12);
        std::printf("%6.2f %4zu %12.4e %12.4e %12.4e\n", alpha, k.modes(), k.c_inf,
                    soefrac::spectrum_sup_error(k), soefrac::time_domain_error(k));
    }
}
