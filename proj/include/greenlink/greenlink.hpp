#pragma once

// Umbrella header: outage, power, energy, and optimization analysis of a
// two-user cellular uplink with optional device-to-device cooperation.

#include "greenlink/units.hpp"
#include "greenlink/radio.hpp"
#include "greenlink/battery.hpp"
#include "greenlink/scenario.hpp"
#include "greenlink/outage.hpp"
#include "greenlink/power_energy.hpp"
#include "greenlink/monte_carlo.hpp"
#include "greenlink/nonuniform.hpp"
#include "greenlink/experiments.hpp"
