// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "mmexp/errors.hpp"
#include "mmexp/rng.hpp"

namespace mmexp {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle in degrees to (-180, 180].
inline double wrap_degrees(double deg)
{
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0)
        w += 360.0;
    else if (w > 180.0)
        w -= 360.0;
    return w;
}

struct Site {
    std::size_t id = 0;
    Point2 position;
};

struct SitePlan {
    std::vector<Site> sites;
    double isd = 0.0;
    std::size_t sectors_per_site = 3;
};

struct Sector {
    std::size_t id = 0;
    std::size_t site_id = 0;
    Point2 position;
    double height = 10.0;
    double boresight_azimuth = 0.0; ///< degrees in [0, 360), counter-clockwise from +x
};

struct UserTerminal {
    std::size_t id = 0;
    Point2 position;
    double height = 1.5;
    std::size_t home_sector = 0;
};

struct LinkGeometry {
    double d2d = 0.0;
    double d3d = 0.0;
    double azimuth_offset = 0.0; ///< degrees, (-180, 180], relative to sector boresight
    double elevation = 90.0;     ///< zenith angle in degrees: 90 is the horizon, 180 straight down
};

inline constexpr std::size_t hex_site_count(std::size_t rings) { return 1 + 3 * rings * (rings + 1); }

/// Hexagonal site lattice of `rings` rings around a center site at the origin.
///
/// Lattice basis vectors have length `isd` and point at 30 and 90 degrees, so
/// the six neighbours of every site sit at 30 + 60k degrees. Sites are ordered
/// ring by ring, center first.
inline SitePlan build_hex_layout(double isd, int rings, std::size_t sectors_per_site = 3)
{
    if (!(isd > 0.0) || !std::isfinite(isd))
        throw ConfigError("layout.isd_m must be positive, got " + std::to_string(isd));
    if (rings < 0)
        throw ConfigError("layout.rings must be >= 0, got " + std::to_string(rings));
    if (sectors_per_site == 0)
        throw ConfigError("layout.sectors_per_site must be >= 1");

    const Point2 e1{isd * std::cos(deg2rad(30.0)), isd * std::sin(deg2rad(30.0))};
    const Point2 e2{0.0, isd};

    SitePlan plan;
    plan.isd = isd;
    plan.sectors_per_site = sectors_per_site;
    plan.sites.reserve(hex_site_count(static_cast<std::size_t>(rings)));

    for (int ring = 0; ring <= rings; ++ring) {
        for (int q = -ring; q <= ring; ++q) {
            for (int r = -ring; r <= ring; ++r) {
                const int s = -q - r;
                const int hexdist = std::max({std::abs(q), std::abs(r), std::abs(s)});
                if (hexdist != ring)
                    continue;
                Site site;
                site.id = plan.sites.size();
                site.position = {q * e1.x + r * e2.x, q * e1.y + r * e2.y};
                plan.sites.push_back(site);
            }
        }
    }
    return plan;
}

/// One sector per boresight per site. Sector ids are site_id * sectors_per_site + k.
/// Boresights are `first_boresight_deg + k * 360 / sectors_per_site`.
inline std::vector<Sector> sectorize(const SitePlan& plan, double ap_height = 10.0,
                                     double first_boresight_deg = 30.0)
{
    std::vector<Sector> sectors;
    sectors.reserve(plan.sites.size() * plan.sectors_per_site);
    const double spacing = 360.0 / static_cast<double>(plan.sectors_per_site);
    for (const Site& site : plan.sites) {
        for (std::size_t k = 0; k < plan.sectors_per_site; ++k) {
            Sector sec;
            sec.id = sectors.size();
            sec.site_id = site.id;
            sec.position = site.position;
            sec.height = ap_height;
            double az = std::fmod(first_boresight_deg + spacing * static_cast<double>(k), 360.0);
            if (az < 0.0)
                az += 360.0;
            sec.boresight_azimuth = az;
            sectors.push_back(sec);
        }
    }
    return sectors;
}

/// Drops `n` UEs uniformly (by area) over the sector's wedge annulus
/// [min_dist, cell_radius]. The wedge is 360 / sectors_per_site degrees wide.
/// UE ids are `first_id`, `first_id + 1`, ...
inline std::vector<UserTerminal> drop_ues(const Sector& sector, std::size_t n, Rng& rng, double min_dist,
                                          double cell_radius, double ue_height = 1.5,
                                          double wedge_width_deg = 120.0, std::size_t first_id = 0)
{
    if (!(min_dist >= 0.0) || !(min_dist < cell_radius))
        throw ConfigError("drop distances must satisfy 0 <= layout.min_drop_dist_m < layout.cell_radius_m, got " +
                          std::to_string(min_dist) + " and " + std::to_string(cell_radius));
    if (!(ue_height > 0.0))
        throw ConfigError("layout.ue_height_m must be positive");

    std::vector<UserTerminal> ues;
    ues.reserve(n);
    const double r2_lo = min_dist * min_dist;
    const double r2_hi = cell_radius * cell_radius;
    const double half = wedge_width_deg / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double radius = std::sqrt(rng.uniform(r2_lo, r2_hi));
        const double angle = deg2rad(sector.boresight_azimuth + rng.uniform(-half, half));
        UserTerminal ue;
        ue.id = first_id + i;
        ue.position = {sector.position.x + radius * std::cos(angle), sector.position.y + radius * std::sin(angle)};
        ue.height = ue_height;
        ue.home_sector = sector.id;
        ues.push_back(ue);
    }
    return ues;
}

/// Distances and angles of the sector->UE link.
inline LinkGeometry link_geometry(const UserTerminal& ue, const Sector& sector)
{
    const double dx = ue.position.x - sector.position.x;
    const double dy = ue.position.y - sector.position.y;
    const double dh = sector.height - ue.height;

    LinkGeometry g;
    g.d2d = std::hypot(dx, dy);
    g.d3d = std::hypot(g.d2d, dh);
    if (g.d3d == 0.0)
        throw GeometryError("UE " + std::to_string(ue.id) + " coincides with sector " + std::to_string(sector.id));

    g.azimuth_offset = g.d2d > 0.0 ? wrap_degrees(rad2deg(std::atan2(dy, dx)) - sector.boresight_azimuth) : 0.0;
    // Zenith angle of the AP->UE ray: below-horizon UEs get values above 90.
    g.elevation = 90.0 + rad2deg(std::atan2(dh, g.d2d));
    return g;
}

} // namespace mmexp
