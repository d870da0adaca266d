// Convergence of implicit Euler and modified Crank-Nicolson on the 1D heat problem.

#include <cstdio>

#include "soefrac/problems/studies.hpp"

int main()
{
    const auto h_list = soefrac::dyadic_steps(6, 10);
    const soefrac::KernelSettings ks{1e-13, 100};
    for (double alpha : {0.3, 0.5, 0.9})
    {
        for (auto scheme : {soefrac::Scheme::ie, soefrac::Scheme::mcn})
        {
            const auto r = soefrac::heat_convergence({1000}, scheme, alpha, h_list, 1.0, ks);
            std::printf("alpha=%.1f scheme=%-3s slope=%.3f  E_r(h_min)=%.3e\n", alpha,
                        soefrac::to_string(scheme).data(), r.slope, r.err.back());
        }
    }
}
