#ifndef ROUGHIR_ROUGHIR_HPP
#define ROUGHIR_ROUGHIR_HPP

#include "roughir/errors.hpp"
#include "roughir/experiments.hpp"
#include "roughir/gaussian_limits.hpp"
#include "roughir/increments.hpp"
#include "roughir/io.hpp"
#include "roughir/ir_statistics.hpp"
#include "roughir/process_sim.hpp"
#include "roughir/report.hpp"
#include "roughir/sampled_path.hpp"
#include "roughir/stable_limits.hpp"
#include "roughir/table_store.hpp"
#include "roughir/variance_table.hpp"

#endif  // ROUGHIR_ROUGHIR_HPP
