#pragma once

#include "darkcav/config.hpp"
#include "darkcav/dark.hpp"
#include "darkcav/error.hpp"
#include "darkcav/fft.hpp"
#include "darkcav/field.hpp"
#include "darkcav/figures.hpp"
#include "darkcav/fit.hpp"
#include "darkcav/grid.hpp"
#include "darkcav/io.hpp"
#include "darkcav/lattice.hpp"
#include "darkcav/observables.hpp"
#include "darkcav/params.hpp"
#include "darkcav/propagate.hpp"
#include "darkcav/quadrature.hpp"
#include "darkcav/rhs.hpp"
#include "darkcav/rna.hpp"
#include "darkcav/sweep.hpp"
