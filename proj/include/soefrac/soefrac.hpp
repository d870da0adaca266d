#pragma once

/// \file soefrac.hpp
/// Umbrella header.

#include "soefrac/errors.hpp"
#include "soefrac/field.hpp"
#include "soefrac/format.hpp"
#include "soefrac/kernel.hpp"
#include "soefrac/kernel_cache.hpp"
#include "soefrac/kernel_io.hpp"
#include "soefrac/oracle.hpp"
#include "soefrac/problems/cahn_hilliard.hpp"
#include "soefrac/problems/csv.hpp"
#include "soefrac/problems/heat1d.hpp"
#include "soefrac/problems/metrics.hpp"
#include "soefrac/problems/scalar.hpp"
#include "soefrac/problems/studies.hpp"
#include "soefrac/raprox.hpp"
#include "soefrac/schemes.hpp"
#include "soefrac/specfun.hpp"
