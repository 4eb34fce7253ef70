#ifndef EDAPNC_EDAPNC_HPP
#define EDAPNC_EDAPNC_HPP

// Umbrella header: achievable rates, precoder optimizers and Monte-Carlo
// simulation harness for eigen-direction-alignment physical-layer network
// coding over MIMO two-way relay channels.

#include "edapnc/benchmarks.hpp"
#include "edapnc/capacity.hpp"
#include "edapnc/channel.hpp"
#include "edapnc/linalg.hpp"
#include "edapnc/precoding.hpp"
#include "edapnc/rng.hpp"
#include "edapnc/sim.hpp"
#include "edapnc/version.hpp"
#include "edapnc/wsr.hpp"

#endif
