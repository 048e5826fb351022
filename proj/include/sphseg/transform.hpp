#pragma once

#include <cstdint>
#include <vector>

#include "sphseg/grid.hpp"
#include "sphseg/tiling.hpp"

namespace sphseg {

// Wavelet coefficients of a real signal. The scaling part always lives on
// the sphere. Axisymmetric scales also stay on the sphere (their rotation
// over the third Euler angle is trivial); the other kinds store samples on
// the rotation-group grid So3Grid(L, n_limit) of their scale.
struct WaveletCoefficients {
    FamilyKind kind = FamilyKind::axisymmetric;
    std::uint32_t L = 0;
    double B = 2.0;
    int j_min = 0;
    std::uint32_t N = 1;

    struct Scale {
        int j = 0;
        std::uint32_t n_limit = 1;
        std::vector<double> values;
    };

    SphericalImage scaling;
    std::vector<Scale> scales;
};

// Exact analysis and synthesis for band-limited input: synthesise(analyse(f))
// recovers f up to solver round-off.
WaveletCoefficients analyse(const SphericalImage& f, const WaveletFamily& fam);
SphericalImage synthesise(const WaveletCoefficients& w, const WaveletFamily& fam);

// Two-family split: a curvelet transform of the input band-limited to
// curv.L with the finest scale dropped, then a directional transform of the
// residual at the full band limit. curv_image caches the synthesised
// curvelet part on the full grid as of analysis time; synthesise_hybrid
// rebuilds it from the stored scales so thresholded coefficients flow
// through.
struct HybridCoefficients {
    std::uint32_t L = 0;
    std::uint32_t L_trans = 0;
    SphericalImage curv_image;
    WaveletCoefficients curv;
    WaveletCoefficients dir;
};

HybridCoefficients analyse_hybrid(const SphericalImage& f, const WaveletFamily& curv_fam,
                                  const WaveletFamily& dir_fam);
SphericalImage synthesise_hybrid(const HybridCoefficients& h, const WaveletFamily& curv_fam,
                                 const WaveletFamily& dir_fam);

// Analyse, soft-threshold every wavelet sample (the scaling part passes
// through untouched), synthesise.
SphericalImage threshold_roundtrip(const SphericalImage& f, double lambda,
                                   const WaveletFamily& fam);
SphericalImage threshold_roundtrip_hybrid(const SphericalImage& f, double lambda,
                                          const WaveletFamily& curv_fam,
                                          const WaveletFamily& dir_fam);

} // namespace sphseg
