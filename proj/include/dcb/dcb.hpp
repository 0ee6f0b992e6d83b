#pragma once

#include "dcb/error.hpp"
#include "dcb/matrix.hpp"
#include "dcb/coupled_line.hpp"
#include "dcb/network.hpp"
#include "dcb/dcblocker.hpp"
#include "dcb/calibration.hpp"
#include "dcb/random_networks.hpp"
#include "dcb/touchstone.hpp"
#include "dcb/sweep_csv.hpp"
#include "dcb/design_config.hpp"
