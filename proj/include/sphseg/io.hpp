#pragma once

#include <string>

#include "sphseg/grid.hpp"

namespace sphseg {

// Binary image container: magic "SPH1", uint32 little-endian band limit L,
// then L*(2L-1) float64 little-endian samples, row-major, theta outermost.
void write_sph(const SphericalImage& f, const std::string& path);

// Plain-text alternative: first line is L, then one line per ring with 2L-1
// comma-separated values. Values are printed with 17 significant digits so a
// write/read cycle is lossless.
void write_sph_text(const SphericalImage& f, const std::string& path);

// Reads either container, auto-detected by the leading magic bytes.
SphericalImage read_sph(const std::string& path);

// Binary mask container: magic "MSK1", uint32 little-endian L, then
// L*(2L-1) bytes, each 0 or 1.
void write_msk(const BinaryMask& m, const std::string& path);
BinaryMask read_msk(const std::string& path);

} // namespace sphseg
