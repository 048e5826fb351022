#include "sphseg/grid.hpp"

#include <cmath>
#include <numbers>

namespace sphseg {

EquiangularGrid::EquiangularGrid(std::uint32_t band_limit) : L(band_limit) {
    if (L == 0)
        throw invalid_parameter("EquiangularGrid: band limit must be >= 1");
}

double EquiangularGrid::theta(std::uint32_t t) const {
    if (t >= L)
        throw invalid_parameter("EquiangularGrid::theta: ring index out of range");
    if (t == L - 1)
        return std::numbers::pi; // exact south-pole ring
    return std::numbers::pi * (2.0 * t + 1.0) / (2.0 * L - 1.0);
}

double EquiangularGrid::phi(std::uint32_t p) const {
    if (p >= n_phi())
        throw invalid_parameter("EquiangularGrid::phi: column index out of range");
    return 2.0 * std::numbers::pi * p / (2.0 * L - 1.0);
}

SphericalImage::SphericalImage(const EquiangularGrid& g, double fill)
    : grid(g), values(g.size(), fill) {}

SphericalImage::SphericalImage(const EquiangularGrid& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
        throw invalid_input("SphericalImage: sample count does not match grid");
}

BinaryMask::BinaryMask(const EquiangularGrid& g, std::uint8_t fill)
    : grid(g), labels(g.size(), fill) {
    if (fill > 1)
        throw invalid_input("BinaryMask: labels must be 0 or 1");
}

BinaryMask::BinaryMask(const EquiangularGrid& g, std::vector<std::uint8_t> v)
    : grid(g), labels(std::move(v)) {
    if (labels.size() != grid.size())
        throw invalid_input("BinaryMask: label count does not match grid");
    for (std::uint8_t b : labels)
        if (b > 1)
            throw invalid_input("BinaryMask: labels must be 0 or 1");
}

bool is_binary(const SphericalImage& f) {
    for (double v : f.values)
        if (v != 0.0 && v != 1.0)
            return false;
    return true;
}

BinaryMask to_mask(const SphericalImage& f) {
    if (!is_binary(f))
        throw invalid_input("to_mask: image has values other than 0 and 1");
    BinaryMask m(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        m.labels[i] = f.values[i] == 1.0 ? 1 : 0;
    return m;
}

SphericalImage to_image(const BinaryMask& m) {
    SphericalImage f(m.grid);
    for (std::size_t i = 0; i < m.labels.size(); ++i)
        f.values[i] = m.labels[i] ? 1.0 : 0.0;
    return f;
}

double mask_area_fraction(const BinaryMask& m) {
    double covered = 0.0, total = 0.0;
    for (std::uint32_t t = 0; t < m.grid.n_theta(); ++t) {
        const double w = std::sin(m.grid.theta(t));
        for (std::uint32_t p = 0; p < m.grid.n_phi(); ++p) {
            total += w;
            if (m.at(t, p))
                covered += w;
        }
    }
    return total > 0.0 ? covered / total : 0.0;
}

} // namespace sphseg
