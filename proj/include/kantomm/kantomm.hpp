#pragma once

// Umbrella header.

#include "error.hpp"
#include "lattice.hpp"
#include "sigmoid.hpp"
#include "kernel.hpp"
#include "domain.hpp"
#include "operators.hpp"
#include "signals.hpp"
#include "quadrature.hpp"
#include "metrics.hpp"
