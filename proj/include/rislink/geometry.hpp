#pragma once
#include <vector>

namespace rislink {

struct Vec2 {
    double x{}, y{};
};

struct Vec3 {
    double x{}, y{}, z{};
};

/// Transmitter, RIS pixel lattice and receiver placement. The RIS lies on
/// the plane z = ris_plane_z with pixel centers given in plane coordinates;
/// the receiver must sit beyond that plane.
struct ScenarioGeometry {
    Vec3 tx{0.0, 0.0, 0.0};
    double ris_plane_z{1000.0};
    std::vector<Vec2> pixel_centers;
    Vec3 rx{0.0, 0.0, 2500.0};
    double lattice_pitch{0.02};  // m
    double pixel_width{2e-3};    // m
    double pixel_height{2e-3};   // m
    double wavelength{1550e-9};  // m
};

/// Square lattice centered on (0,0), row-major indexing (y rows, x columns).
std::vector<Vec2> square_grid_centers(int nx, int ny, double pitch);

/// Throws ConfigError when an invariant is violated (receiver not beyond the
/// RIS plane, non-positive pixel dimensions, duplicate pixel centers, ...).
void validate(const ScenarioGeometry& geom);

/// Per-pixel double-hop distances and off-axis direction cosines for the
/// Tx->pixel (TR) and pixel->Rx (RR) hops, measured against the RIS-plane
/// normal (+z).
struct HopGeometry {
    std::vector<double> d_tr, d_rr;
    std::vector<Vec2> mu_tr, mu_rr;
};

/// Distances only: d_tr[n] = ||p_n - p_T||, d_rr[n] = ||p_R - p_n||.
HopGeometry hop_distances(const ScenarioGeometry& geom);

/// Distances plus direction cosines, mu_x = (x_n - x_T)/d_tr for the TR hop
/// and mu_x = (x_R - x_n)/d_rr for the RR hop (same for y).
HopGeometry direction_cosines(const ScenarioGeometry& geom);

} // namespace rislink
