#pragma once

#include "sap/channel.hpp"

// Reference parameter sets shared by the configs, the validation suite and
// the tests. Powers are 43 / 23 dBm unless noted.
namespace sap::scenarios {

/// Indoor testbed: 7000 primaries/km^2, 6.06 / 3.162 dBm, alpha 3.
NetworkParams testbed(double pair_distance);

/// Dense primaries below 6 GHz: 500/km^2, d = 2 m, alpha 4.
NetworkParams dense_below6();

/// Sparse primaries below 6 GHz with secondaries: 80 and 16000 per km^2,
/// d = 3 m, alpha 4, gamma = -60 dB, tau = 0.9.
NetworkParams sparse_below6();

/// Urban blockages: 10 m x 10 m buildings at blockage factor xi, 80 and
/// 16000 per km^2, d = 5 m, alpha 2.7.
NetworkParams urban_blockage(double xi = 0.04);

/// As urban_blockage with primary beams of width omega.
NetworkParams urban_mmw(double omega, double xi = 0.04);

/// Large street-grid blocks (30 m x 20 m, xi = 0.06) with 10 degree beams.
NetworkParams street_grid_mmw();

}  // namespace sap::scenarios
