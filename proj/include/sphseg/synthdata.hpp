#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sphseg/grid.hpp"

namespace sphseg {

enum class PhantomKind { cap, two_caps, ridge_network, checker };

// Geodesic disc: center direction and angular radius.
struct CapGeometry {
    double theta = 0.0;
    double phi = 0.0;
    double radius = 0.5;
};

// Great-circle band: pole direction of the circle plane and angular half
// width of the band around it. A band may carry its own intensity so a
// network can mix bright and faint structures; a negative level inherits
// the phantom foreground.
struct RidgeGeometry {
    double pole_theta = 0.0;
    double pole_phi = 0.0;
    double half_width = 0.05;
    double level = -1.0;
};

struct PhantomSpec {
    PhantomKind kind = PhantomKind::cap;
    std::vector<CapGeometry> caps;
    std::vector<RidgeGeometry> ridges;
    std::uint32_t checker_bands = 4;
    std::uint32_t checker_sectors = 8;
    double foreground = 1.0;
    double background = 0.0;
    std::uint32_t smoothing_L = 0;  // 0: smooth at the image band limit
};

struct Phantom {
    SphericalImage image;  // smoothed indicator, clamped to [0, 1]
    BinaryMask truth;      // crisp geometry
};

// Rasterize the geometry on EquiangularGrid(L), project the indicator onto
// the band limit min(smoothing_L, L) and clamp. The truth mask is the
// unsmoothed geometry.
Phantom make_phantom(const PhantomSpec& spec, std::uint32_t L);

// One "key = value" entry per line, '#' starts a comment. Keys: kind, cap
// (theta phi radius, repeatable), ridge (pole_theta pole_phi half_width
// [level], repeatable), checker (bands sectors), foreground, background,
// smooth.
PhantomSpec parse_phantom_spec(std::istream& is);
PhantomSpec load_phantom_spec(const std::string& path);
void write_phantom_spec(const PhantomSpec& spec, std::ostream& os);

const char* to_string(PhantomKind k);

} // namespace sphseg
