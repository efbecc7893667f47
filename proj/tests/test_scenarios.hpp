#pragma once
// Shared scenario builders for the test suites.

#include "rislink/config.hpp"

namespace rislink::testing {

/// Shipped reference defaults.
inline Scenario table_scenario() { return default_scenario(); }

/// Single boresight pixel, no jitter, no turbulence, unit efficiency and
/// zero extinction: every field gain collapses to the free-space formula.
inline Scenario clean_single_pixel() {
    Scenario sc = default_scenario();
    sc.geometry.grid_nx = sc.geometry.grid_ny = 1;
    sc.jitter = JitterSection{0, 0, 0, 0, 0, 0};
    sc.turbulence.tr.regime = TurbulenceRegime::none;
    sc.turbulence.rr.regime = TurbulenceRegime::none;
    sc.efficiency = OpticalEfficiencySpec{1.0, 1.0, 1.0};
    sc.link.extinction = 0.0;
    sc.pilot.length = 1;
    return sc;
}

/// Reference geometry with turbulence/jitter off (deterministic baseline).
inline Scenario deterministic_table() {
    Scenario sc = default_scenario();
    sc.jitter = JitterSection{0, 0, 0, 0, 0, 0};
    sc.turbulence.tr.regime = TurbulenceRegime::none;
    sc.turbulence.rr.regime = TurbulenceRegime::none;
    return sc;
}

} // namespace rislink::testing
