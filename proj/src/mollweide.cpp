#include "sphseg/mollweide.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sphseg/errors.hpp"

namespace sphseg {

namespace {

// Nearest grid sample for a direction, or -1 when the raster pixel lies
// outside the projected ellipse. The projection is inverted in closed form:
// the auxiliary angle comes straight from the vertical coordinate.
template <typename Fill>
Raster render(const EquiangularGrid& grid, std::uint32_t width, Fill fill) {
    width = std::max<std::uint32_t>(width, 16);
    Raster r;
    r.width = width;
    r.height = width / 2;
    r.pixels.assign(static_cast<std::size_t>(r.width) * r.height, 255);

    const double sqrt2 = std::sqrt(2.0);
    const std::uint32_t np = grid.n_phi();
    for (std::uint32_t y = 0; y < r.height; ++y) {
        // Map the pixel center onto the projection plane: X in
        // [-2 sqrt2, 2 sqrt2], Y in [sqrt2, -sqrt2] top to bottom.
        const double Y = sqrt2 * (1.0 - 2.0 * (y + 0.5) / r.height);
        const double sin_psi = Y / sqrt2;
        if (std::abs(sin_psi) > 1.0) continue;
        const double psi = std::asin(sin_psi);
        const double cos_psi = std::cos(psi);
        const double sin_lat = (2.0 * psi + std::sin(2.0 * psi)) / M_PI;
        const double lat = std::asin(std::clamp(sin_lat, -1.0, 1.0));
        const double theta = M_PI / 2.0 - lat;

        // Ring index: invert theta_t = pi (2t+1) / (2L-1).
        const double tf = (theta * (2.0 * grid.L - 1.0) / M_PI - 1.0) / 2.0;
        const std::uint32_t t = static_cast<std::uint32_t>(
            std::clamp(std::lround(tf), 0L, static_cast<long>(grid.L - 1)));

        for (std::uint32_t x = 0; x < r.width; ++x) {
            const double X = 2.0 * sqrt2 * (2.0 * (x + 0.5) / r.width - 1.0);
            if (cos_psi <= 0.0) {
                // Poles project to single points; keep the center column.
                if (x != r.width / 2) continue;
                r.at(y, x) = fill(t, 0);
                continue;
            }
            const double lon = M_PI * X / (2.0 * sqrt2 * cos_psi);
            if (std::abs(lon) > M_PI) continue;
            double phi = lon < 0.0 ? lon + 2.0 * M_PI : lon;
            const std::uint32_t p = static_cast<std::uint32_t>(std::lround(
                                        phi * np / (2.0 * M_PI))) %
                                    np;
            r.at(y, x) = fill(t, p);
        }
    }
    return r;
}

} // namespace

Raster mollweide_render(const SphericalImage& f, std::uint32_t width) {
    if (f.values.empty()) throw invalid_input("cannot render an empty image");
    const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    const double span = *hi - *lo;
    const double offset = *lo;
    return render(f.grid, width, [&](std::uint32_t t, std::uint32_t p) -> std::uint8_t {
        if (span <= 0.0) return 128;
        const double v = (f.at(t, p) - offset) / span;
        return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
    });
}

Raster mollweide_render(const BinaryMask& m, std::uint32_t width) {
    if (m.labels.empty()) throw invalid_input("cannot render an empty mask");
    return render(m.grid, width, [&](std::uint32_t t, std::uint32_t p) -> std::uint8_t {
        return m.at(t, p) ? 255 : 0;
    });
}

void write_pgm(const Raster& r, const std::string& path) {
    if (r.pixels.size() != static_cast<std::size_t>(r.width) * r.height)
        throw invalid_input("raster shape does not match its pixel count");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot open '" + path + "' for writing");
    os << "P5\n" << r.width << " " << r.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(r.pixels.data()),
             static_cast<std::streamsize>(r.pixels.size()));
    if (!os) throw io_error("failed while writing '" + path + "'");
}

} // namespace sphseg
