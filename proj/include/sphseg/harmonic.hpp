#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sphseg/grid.hpp"

namespace sphseg {

// Spherical-harmonic coefficients f_{lm} for 0 <= l < L, |m| <= l, in the
// orthonormal convention with the Condon-Shortley phase folded into the
// basis functions:
//
//   Y_lm(theta, phi) = sqrt((2l+1)/(4 pi)) d^l_{m0}(theta) e^{i m phi}
//
// Storage is the flat triangle index l(l+1)+m. When real_signal is set the
// coefficients satisfy f_{l,-m} = (-1)^m conj(f_{lm}).
struct HarmonicCoeffs {
    std::uint32_t L = 0;
    bool real_signal = false;
    std::vector<std::complex<double>> c;

    HarmonicCoeffs() = default;
    explicit HarmonicCoeffs(std::uint32_t band_limit, bool real = false);

    static std::size_t index(std::uint32_t l, std::int32_t m) {
        return static_cast<std::size_t>(l) * (l + 1) + m;
    }
    std::complex<double>& at(std::uint32_t l, std::int32_t m) { return c[index(l, m)]; }
    std::complex<double> at(std::uint32_t l, std::int32_t m) const { return c[index(l, m)]; }
};

// Exact forward transform of a band-limited image: the per-m linear
// evaluation systems on the iso-latitude rings are solved in the least
// squares sense. Throws invalid_input on non-finite samples.
HarmonicCoeffs sht_forward(const SphericalImage& f);

// Evaluation of the expansion on the sampling grid. When real_signal is not
// set, the imaginary residue must stay below 1e-10 relative to the field
// amplitude; larger residues raise numeric_error.
SphericalImage sht_inverse(const HarmonicCoeffs& flm);

// Forward transform, zero out l >= L_target, inverse transform. The grid is
// unchanged; only the harmonic content is truncated.
SphericalImage band_limit_image(const SphericalImage& f, std::uint32_t L_target);

// Wigner little-d matrix d^l(beta), beta in [0, pi]. Entry (m+l, n+l) holds
// d^l_{mn}(beta). Rows/cols follow the convention d^1_{10}(pi/2) = -1/sqrt(2).
Eigen::MatrixXd wigner_d(std::uint32_t l, double beta);

// Table of normalized associated Legendre functions
// Ytilde_{lm}(theta) = sqrt((2l+1)/(4 pi)) d^l_{m0}(theta):
// entry (i, l - |m|) holds Ytilde_{l|m|}(thetas[i]) for l in [|m|, L).
// For m < 0 multiply by (-1)^m.
Eigen::MatrixXd legendre_table(std::uint32_t L, std::uint32_t m_abs,
                               const std::vector<double>& thetas);

// Equiangular sampling of the rotation group:
//
//   alpha_a = 2 pi a / (2L-1),        a = 0 .. 2L-2
//   beta_b  = pi (2b+1) / (2L-1),     b = 0 .. L-1
//   gamma_g = 2 pi g / (2N-1),        g = 0 .. 2N-2
//
// Samples are stored with beta outermost: index (b, a, g).
struct So3Grid {
    std::uint32_t L = 0;
    std::uint32_t N = 1;

    So3Grid() = default;
    So3Grid(std::uint32_t band_limit, std::uint32_t azimuthal_limit);

    std::uint32_t n_alpha() const { return 2 * L - 1; }
    std::uint32_t n_beta() const { return L; }
    std::uint32_t n_gamma() const { return 2 * N - 1; }
    std::size_t size() const {
        return static_cast<std::size_t>(n_beta()) * n_alpha() * n_gamma();
    }

    double alpha(std::uint32_t a) const;
    double beta(std::uint32_t b) const;
    double gamma(std::uint32_t g) const;

    std::size_t index(std::uint32_t b, std::uint32_t a, std::uint32_t g) const {
        return (static_cast<std::size_t>(b) * n_alpha() + a) * n_gamma() + g;
    }

    bool operator==(const So3Grid&) const = default;
};

// Wigner coefficients W_{lmn} for 0 <= l < L, |m| <= l, |n| <= min(l, N-1).
// Storage: (n + N - 1) * L^2 + l(l+1) + m; entries with |n| > l are unused
// and stay zero.
struct So3Coeffs {
    std::uint32_t L = 0;
    std::uint32_t N = 1;
    std::vector<std::complex<double>> c;

    So3Coeffs() = default;
    So3Coeffs(std::uint32_t band_limit, std::uint32_t azimuthal_limit);

    std::size_t index(std::uint32_t l, std::int32_t m, std::int32_t n) const {
        return static_cast<std::size_t>(n + static_cast<std::int32_t>(N) - 1) * L * L +
               static_cast<std::size_t>(l) * (l + 1) + m;
    }
    std::complex<double>& at(std::uint32_t l, std::int32_t m, std::int32_t n) {
        return c[index(l, m, n)];
    }
    std::complex<double> at(std::uint32_t l, std::int32_t m, std::int32_t n) const {
        return c[index(l, m, n)];
    }
};

// Evaluates W(alpha, beta, gamma) =
//   sum_{lmn} (2l+1)/(8 pi^2) W_{lmn} e^{-i m alpha} d^l_{mn}(beta) e^{-i n gamma}
// on the grid. Requires w.L == grid.L and w.N == grid.N.
std::vector<std::complex<double>> so3_inverse(const So3Coeffs& w, const So3Grid& grid);

// Exact inverse of so3_inverse for band-limited sample sets (azimuthal DFTs
// followed by per-(m,n) least squares solves over beta).
So3Coeffs so3_forward(const std::vector<std::complex<double>>& samples, const So3Grid& grid);

} // namespace sphseg
