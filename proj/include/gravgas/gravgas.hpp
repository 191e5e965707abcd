#pragma once

// Umbrella header for the gravgas library: exact characteristic solutions
// of the pressureless self-gravitating Euler system (spherical and planar
// slab geometry) plus independent numerical oracles.

#include "gravgas/config.hpp"
#include "gravgas/errors.hpp"
#include "gravgas/kepler.hpp"
#include "gravgas/lagrange_series.hpp"
#include "gravgas/perturbation.hpp"
#include "gravgas/profile.hpp"
#include "gravgas/residuals.hpp"
#include "gravgas/rk45.hpp"
#include "gravgas/runner.hpp"
#include "gravgas/sheet_oracle.hpp"
#include "gravgas/shell_oracle.hpp"
#include "gravgas/slab.hpp"
#include "gravgas/snapshot.hpp"
#include "gravgas/spherical.hpp"
