#pragma once

// Umbrella header: thermalization of a two-level system under a quantum
// SWITCH of two thermalizing channels, with closed-form effective
// temperatures, a brute-force channel-simulation oracle, and numerical
// extremization of the postselected temperature over the control and
// measurement Bloch angles.

#include "ico/closed_form.hpp"
#include "ico/errors.hpp"
#include "ico/optimize.hpp"
#include "ico/params.hpp"
#include "ico/qmat.hpp"
#include "ico/sweep_table.hpp"
#include "ico/switch_sim.hpp"
#include "ico/thermal.hpp"
