#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sphseg {

enum class FamilyKind { axisymmetric, directional, curvelet };

// Largest wavelet scale index for band limit L and dilation base B,
// i.e. the smallest j with B^j >= L - 1.
int compute_j_max(double B, std::uint32_t L);

// Harmonic tiling windows built from the C-infinity bump
// s(t) = exp(-1 / (1 - t^2)) squeezed onto [1/B, 1]. kappa[j - j_min][l]
// is the window of scale j at degree l, scaling[l] the residual low-pass.
// By construction scaling^2 + sum_j kappa_j^2 = 1 for every l < L.
struct KernelSet {
    std::uint32_t L = 0;
    double B = 2.0;
    int j_min = 0;
    int j_max = 0;
    std::vector<double> scaling;
    std::vector<std::vector<double>> kappa;

    int n_scales() const { return j_max - j_min + 1; }
    double kappa_at(int j, std::uint32_t l) const {
        return kappa[static_cast<std::size_t>(j - j_min)][l];
    }
};

KernelSet build_kernels(std::uint32_t L, double B, int j_min);

// Azimuthal weights zeta_{lm} on the triangle index l(l+1)+m. Every kind
// satisfies sum_m |zeta_{lm}|^2 = 1 per degree and the reality condition
// zeta_{l,-m} = (-1)^m conj(zeta_{lm}), so transforms of real signals stay
// real. The axisymmetric kind concentrates everything in m = 0, the
// directional kind spreads a binomial profile over min(N-1, l) orders of
// matching parity, and the curvelet kind pins the largest even |m| <= l.
std::vector<std::complex<double>> build_directionality(std::uint32_t L, std::uint32_t N,
                                                       FamilyKind kind);

struct WaveletFamily {
    FamilyKind kind = FamilyKind::axisymmetric;
    std::uint32_t L = 0;
    double B = 2.0;
    int j_min = 0;
    int j_max = 0;
    std::uint32_t N = 1;
    std::vector<double> scaling;
    std::vector<std::vector<double>> kappa;
    std::vector<std::complex<double>> zeta;

    int n_scales() const { return j_max - j_min + 1; }
    double kappa_at(int j, std::uint32_t l) const {
        return kappa[static_cast<std::size_t>(j - j_min)][l];
    }
    std::complex<double> zeta_at(std::uint32_t l, std::int32_t m) const {
        return zeta[static_cast<std::size_t>(l) * (l + 1) + m];
    }
    // One past the largest |n| carried by scale j, scanned over the degrees
    // where kappa_j is nonzero. Always >= 1.
    std::uint32_t scale_n_limit(int j) const;
};

// N is the azimuthal order count for the directional kind; it must be 1 for
// the axisymmetric kind and is ignored by the curvelet kind (which derives
// its orders from the degree parity).
WaveletFamily build_family(FamilyKind kind, std::uint32_t L, double B, int j_min,
                           std::uint32_t N = 1);

// Rotation-group expansion coefficient of the scale-j wavelet:
// sqrt((2l+1) / (8 pi^2)) * kappa_j(l) * zeta_{ln}.
std::complex<double> wavelet_harmonic(const WaveletFamily& fam, int j, std::uint32_t l,
                                      std::int32_t n);

// Max over l < L of |scaling_l^2 + sum_j kappa_j(l)^2 - 1|.
double check_admissibility(const WaveletFamily& fam);

// CSV dump of the tiling: header "l,phi,kappa<j_min>,...", one row per degree,
// every value printed with 17 significant digits.
void write_tiling_csv(const WaveletFamily& fam, std::ostream& os);

} // namespace sphseg
