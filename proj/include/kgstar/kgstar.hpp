#pragma once

// Umbrella header for the Klein-Gordon star-network library.

#include "kgstar/analysis.hpp"
#include "kgstar/asymptotics.hpp"
#include "kgstar/config.hpp"
#include "kgstar/errors.hpp"
#include "kgstar/fit.hpp"
#include "kgstar/initial_data.hpp"
#include "kgstar/io.hpp"
#include "kgstar/network.hpp"
#include "kgstar/parallel.hpp"
#include "kgstar/phase.hpp"
#include "kgstar/propagator.hpp"
#include "kgstar/quadrature.hpp"
#include "kgstar/rng.hpp"
#include "kgstar/spectral.hpp"
#include "kgstar/transform.hpp"
