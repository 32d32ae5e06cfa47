#ifndef ROUGHIR_PROCESS_SIM_HPP
#define ROUGHIR_PROCESS_SIM_HPP

#include "roughir/sim/diffusion.hpp"
#include "roughir/sim/fbm.hpp"
#include "roughir/sim/levy.hpp"
#include "roughir/sim/mbm.hpp"
#include "roughir/sim/multiscale_fbm.hpp"
#include "roughir/sim/sim_spec.hpp"
#include "roughir/sim/trend.hpp"

#endif  // ROUGHIR_PROCESS_SIM_HPP
