#pragma once

#include <cstdint>
#include <vector>

#include "sphseg/grid.hpp"

namespace sphseg {

// Soft shrink: values within [-lambda, lambda] vanish, the rest move toward
// zero by lambda.
double soft_threshold(double v, double lambda);
void soft_threshold_inplace(std::vector<double>& v, double lambda);
SphericalImage soft_threshold(const SphericalImage& f, double lambda);

// Pointwise gradient magnitude sqrt(dtheta^2 + dphi^2 / sin^2 theta) built
// from forward difference quotients; the colatitude stencil turns backward
// on the last ring and the azimuthal stencil wraps. The azimuthal term is
// dropped on the south-pole ring where sin theta vanishes.
SphericalImage gradient_magnitude(const SphericalImage& f);

// 1-norm variant |dtheta| + |dphi| / sin theta under the same stencil.
SphericalImage gradient_one_norm(const SphericalImage& f);

// Additive white Gaussian noise at sigma = max|f| * 10^(-snr_db / 20). The
// generator is a Box-Muller transform over a seeded mt19937_64 so streams
// are identical across platforms.
SphericalImage add_noise(const SphericalImage& f, double snr_db, std::uint64_t seed);

struct KmeansResult {
    std::vector<std::uint8_t> labels;  // cluster ids ordered by ascending centroid
    std::vector<double> centroids;     // ascending
    int iterations = 0;
    bool degenerate = false;           // constant input
};

// 1-D Lloyd iterations on pixel intensities. Centroids start at the
// (2i+1)/(2k) quantiles of the sorted values, assignments break ties toward
// the smaller centroid, and the loop stops when labels stabilize or after
// 100 rounds. Fully deterministic.
KmeansResult kmeans_intensity(const SphericalImage& f, int k);

// Two clusters; the larger-mean cluster becomes label 1. A constant image
// yields the all-zero mask.
BinaryMask kmeans_mask(const SphericalImage& f);

// Dice overlap 2|a*b| / (|a| + |b|); defined as 1 when both masks are empty.
double dice(const BinaryMask& a, const BinaryMask& b);

} // namespace sphseg
