#pragma once

/// \file csv.hpp
/// CSV output of run records and convergence tables, 17 significant digits.

#include <string>

#include "soefrac/format.hpp"
#include "soefrac/problems/metrics.hpp"
#include "soefrac/schemes.hpp"

namespace soefrac
{

/// Header `t,norm,energy,err`; energy and err cells are empty when absent.
inline std::string run_record_csv(const RunRecord& r)
{
    std::string out = "t,norm,energy,err\n";
    for (std::size_t i = 0; i < r.t.size(); ++i)
    {
        out += format_real(r.t[i]) + ',' + format_real(r.norm[i]) + ',';
        if (i < r.energy.size())
        {
            out += format_real(r.energy[i]);
        }
        out += ',';
        if (i < r.err.size())
        {
            out += format_real(r.err[i]);
        }
        out += '\n';
    }
    return out;
}

/// Header `h,E_r`, one row per step size, then `# slope=...`.
inline std::string convergence_csv(const ConvergenceResult& c)
{
    std::string out = "h,E_r\n";
    for (std::size_t i = 0; i < c.h.size(); ++i)
    {
        out += format_real(c.h[i]) + ',' + format_real(c.err[i]) + '\n';
    }
    out += "# slope=" + format_real(c.slope) + '\n';
    return out;
}

} // namespace soefrac
