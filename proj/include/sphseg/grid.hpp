#pragma once

#include <cstdint>
#include <vector>

#include "sphseg/errors.hpp"

namespace sphseg {

// Equiangular sampling of the sphere with L iso-latitude rings of 2L-1
// samples each:
//
//   theta_t = pi (2t+1) / (2L-1),  t = 0 .. L-1
//   phi_p   = 2 pi p / (2L-1),     p = 0 .. 2L-2
//
// The last ring sits exactly on the south pole. Samples are stored row-major
// with theta outermost.
struct EquiangularGrid {
    std::uint32_t L = 0;

    EquiangularGrid() = default;
    explicit EquiangularGrid(std::uint32_t band_limit);

    std::uint32_t n_theta() const { return L; }
    std::uint32_t n_phi() const { return 2 * L - 1; }
    std::size_t size() const { return static_cast<std::size_t>(L) * (2 * L - 1); }

    double theta(std::uint32_t t) const;
    double phi(std::uint32_t p) const;

    std::size_t index(std::uint32_t t, std::uint32_t p) const {
        return static_cast<std::size_t>(t) * (2 * L - 1) + p;
    }

    bool operator==(const EquiangularGrid&) const = default;
};

// Real scalar field sampled on an EquiangularGrid.
struct SphericalImage {
    EquiangularGrid grid;
    std::vector<double> values;

    SphericalImage() = default;
    explicit SphericalImage(const EquiangularGrid& g, double fill = 0.0);
    SphericalImage(const EquiangularGrid& g, std::vector<double> v);

    double& at(std::uint32_t t, std::uint32_t p) { return values[grid.index(t, p)]; }
    double at(std::uint32_t t, std::uint32_t p) const { return values[grid.index(t, p)]; }
};

// 0/1 labels on an EquiangularGrid, same layout as SphericalImage.
struct BinaryMask {
    EquiangularGrid grid;
    std::vector<std::uint8_t> labels;

    BinaryMask() = default;
    explicit BinaryMask(const EquiangularGrid& g, std::uint8_t fill = 0);
    BinaryMask(const EquiangularGrid& g, std::vector<std::uint8_t> v);

    std::uint8_t& at(std::uint32_t t, std::uint32_t p) { return labels[grid.index(t, p)]; }
    std::uint8_t at(std::uint32_t t, std::uint32_t p) const { return labels[grid.index(t, p)]; }
};

// True when every sample is exactly 0.0 or 1.0.
bool is_binary(const SphericalImage& f);

// Interpret an image with values in {0.0, 1.0} as a mask.
BinaryMask to_mask(const SphericalImage& f);

SphericalImage to_image(const BinaryMask& m);

// Fraction of sphere area covered by label 1, using sin(theta) ring weights.
double mask_area_fraction(const BinaryMask& m);

} // namespace sphseg
