#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sphseg/grid.hpp"

namespace sphseg {

// 8-bit grayscale raster, row-major from the top-left pixel.
struct Raster {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t& at(std::uint32_t y, std::uint32_t x) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t at(std::uint32_t y, std::uint32_t x) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

// Mollweide projection of a spherical field: each raster pixel is inverted
// to (longitude, latitude) analytically and filled with the nearest grid
// sample. Pixels outside the ellipse become background (255). Image values
// are min-max scaled to 0..255 (flat images map to 128); masks use 0 and
// 255. The height is width / 2; width is clamped to at least 16.
Raster mollweide_render(const SphericalImage& f, std::uint32_t width);
Raster mollweide_render(const BinaryMask& m, std::uint32_t width);

// Binary PGM (P5).
void write_pgm(const Raster& r, const std::string& path);

} // namespace sphseg
