#include "rislink/geometry.hpp"

#include <cmath>
#include <string>

#include "rislink/errors.hpp"

namespace rislink {

std::vector<Vec2> square_grid_centers(int nx, int ny, double pitch) {
    if (nx < 1 || ny < 1) throw ConfigError("geometry: grid_nx/grid_ny must be >= 1");
    if (pitch <= 0.0) throw ConfigError("geometry: lattice pitch must be > 0");
    std::vector<Vec2> centers;
    centers.reserve(static_cast<std::size_t>(nx) * ny);
    const double x0 = -0.5 * (nx - 1) * pitch;
    const double y0 = -0.5 * (ny - 1) * pitch;
    for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c)
            centers.push_back({x0 + c * pitch, y0 + r * pitch});
    return centers;
}

void validate(const ScenarioGeometry& geom) {
    if (geom.rx.z <= geom.ris_plane_z)
        throw ConfigError("geometry: receiver must lie beyond the RIS plane (rx_z > ris_plane_z)");
    if (geom.pixel_width <= 0.0 || geom.pixel_height <= 0.0)
        throw ConfigError("geometry: pixel_width/pixel_height must be > 0");
    if (geom.wavelength <= 0.0) throw ConfigError("geometry: wavelength must be > 0");
    if (geom.pixel_centers.empty()) throw ConfigError("geometry: no RIS pixels");
    for (std::size_t i = 0; i < geom.pixel_centers.size(); ++i)
        for (std::size_t j = i + 1; j < geom.pixel_centers.size(); ++j)
            if (geom.pixel_centers[i].x == geom.pixel_centers[j].x &&
                geom.pixel_centers[i].y == geom.pixel_centers[j].y)
                throw ConfigError("geometry: duplicate pixel centers at index " + std::to_string(i) +
                                  " and " + std::to_string(j));
}

HopGeometry hop_distances(const ScenarioGeometry& geom) {
    validate(geom);
    HopGeometry h;
    const std::size_t n = geom.pixel_centers.size();
    h.d_tr.resize(n);
    h.d_rr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = geom.pixel_centers[i];
        h.d_tr[i] = std::sqrt((p.x - geom.tx.x) * (p.x - geom.tx.x) +
                              (p.y - geom.tx.y) * (p.y - geom.tx.y) +
                              (geom.ris_plane_z - geom.tx.z) * (geom.ris_plane_z - geom.tx.z));
        h.d_rr[i] = std::sqrt((geom.rx.x - p.x) * (geom.rx.x - p.x) +
                              (geom.rx.y - p.y) * (geom.rx.y - p.y) +
                              (geom.rx.z - geom.ris_plane_z) * (geom.rx.z - geom.ris_plane_z));
    }
    return h;
}

HopGeometry direction_cosines(const ScenarioGeometry& geom) {
    HopGeometry h = hop_distances(geom);
    const std::size_t n = geom.pixel_centers.size();
    h.mu_tr.resize(n);
    h.mu_rr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = geom.pixel_centers[i];
        h.mu_tr[i] = {(p.x - geom.tx.x) / h.d_tr[i], (p.y - geom.tx.y) / h.d_tr[i]};
        h.mu_rr[i] = {(geom.rx.x - p.x) / h.d_rr[i], (geom.rx.y - p.y) / h.d_rr[i]};
    }
    return h;
}

} // namespace rislink
