#include "sphseg/transform.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "sphseg/errors.hpp"
#include "sphseg/harmonic.hpp"
#include "sphseg/ops.hpp"

namespace sphseg {

namespace {

constexpr double kEightPi2 = 8.0 * M_PI * M_PI;

// Largest imaginary residue tolerated when rotation-group samples of a real
// signal are folded back to real storage.
constexpr double kImagTol = 1e-10;

std::vector<double> fold_real(const std::vector<std::complex<double>>& s) {
    double max_re = 1.0, max_im = 0.0;
    for (const auto& v : s) {
        max_re = std::max(max_re, std::abs(v.real()));
        max_im = std::max(max_im, std::abs(v.imag()));
    }
    if (max_im > kImagTol * max_re)
        throw numeric_error("rotation-group samples of a real signal drifted complex");
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].real();
    return out;
}

// Wavelet scales of flm over [j_lo, j_hi]. Axisymmetric scales multiply the
// harmonic coefficients by the window and return to the sphere; the rest
// expand onto the rotation group through the scale's wavelet.
std::vector<WaveletCoefficients::Scale> analyse_scales(const HarmonicCoeffs& flm,
                                                       const WaveletFamily& fam,
                                                       int j_lo, int j_hi) {
    std::vector<WaveletCoefficients::Scale> scales;
    const std::uint32_t L = fam.L;
    for (int j = j_lo; j <= j_hi; ++j) {
        WaveletCoefficients::Scale sc;
        sc.j = j;
        if (fam.kind == FamilyKind::axisymmetric) {
            sc.n_limit = 1;
            HarmonicCoeffs g(L, true);
            for (std::uint32_t l = 0; l < L; ++l) {
                const double k = fam.kappa_at(j, l);
                for (std::int32_t m = -static_cast<std::int32_t>(l);
                     m <= static_cast<std::int32_t>(l); ++m)
                    g.at(l, m) = flm.at(l, m) * k;
            }
            sc.values = sht_inverse(g).values;
        } else {
            sc.n_limit = fam.scale_n_limit(j);
            const So3Grid grid(L, sc.n_limit);
            So3Coeffs w(L, sc.n_limit);
            for (std::uint32_t l = 0; l < L; ++l) {
                const double k = fam.kappa_at(j, l);
                if (k == 0.0) continue;
                const double factor = std::sqrt(kEightPi2 / (2.0 * l + 1.0)) * k;
                const std::int32_t n_max = std::min<std::int32_t>(
                    static_cast<std::int32_t>(l), static_cast<std::int32_t>(sc.n_limit) - 1);
                for (std::int32_t n = -n_max; n <= n_max; ++n) {
                    const std::complex<double> zc = std::conj(fam.zeta_at(l, n)) * factor;
                    if (zc == 0.0) continue;
                    for (std::int32_t m = -static_cast<std::int32_t>(l);
                         m <= static_cast<std::int32_t>(l); ++m)
                        w.at(l, m, n) = zc * flm.at(l, m);
                }
            }
            sc.values = fold_real(so3_inverse(w, grid));
        }
        scales.push_back(std::move(sc));
    }
    return scales;
}

// Accumulate the contribution of stored scales into flm.
void synthesise_scales(const std::vector<WaveletCoefficients::Scale>& scales,
                       const WaveletFamily& fam, HarmonicCoeffs& flm) {
    const std::uint32_t L = fam.L;
    for (const auto& sc : scales) {
        if (fam.kind == FamilyKind::axisymmetric) {
            const SphericalImage img(EquiangularGrid(L), sc.values);
            const HarmonicCoeffs g = sht_forward(img);
            for (std::uint32_t l = 0; l < L; ++l) {
                const double k = fam.kappa_at(sc.j, l);
                for (std::int32_t m = -static_cast<std::int32_t>(l);
                     m <= static_cast<std::int32_t>(l); ++m)
                    flm.at(l, m) += g.at(l, m) * k;
            }
        } else {
            const So3Grid grid(L, sc.n_limit);
            std::vector<std::complex<double>> samples(sc.values.begin(), sc.values.end());
            const So3Coeffs w = so3_forward(samples, grid);
            for (std::uint32_t l = 0; l < L; ++l) {
                if (fam.kappa_at(sc.j, l) == 0.0) continue;
                const std::int32_t n_max = std::min<std::int32_t>(
                    static_cast<std::int32_t>(l), static_cast<std::int32_t>(sc.n_limit) - 1);
                for (std::int32_t n = -n_max; n <= n_max; ++n) {
                    const std::complex<double> psi = wavelet_harmonic(fam, sc.j, l, n);
                    if (psi == 0.0) continue;
                    for (std::int32_t m = -static_cast<std::int32_t>(l);
                         m <= static_cast<std::int32_t>(l); ++m)
                        flm.at(l, m) += w.at(l, m, n) * psi;
                }
            }
        }
    }
}

void check_coeffs(const WaveletCoefficients& w, const WaveletFamily& fam) {
    if (w.kind != fam.kind || w.L != fam.L || w.B != fam.B || w.j_min != fam.j_min ||
        w.N != fam.N)
        throw invalid_input("coefficients do not match the family");
    if (w.scaling.grid.L != fam.L || w.scaling.values.size() != w.scaling.grid.size())
        throw invalid_input("scaling part has the wrong shape");
    int prev = fam.j_min - 1;
    for (const auto& sc : w.scales) {
        if (sc.j <= prev || sc.j > fam.j_max)
            throw invalid_input("scale indices must ascend within the family range");
        prev = sc.j;
        const std::size_t expect =
            (fam.kind == FamilyKind::axisymmetric)
                ? EquiangularGrid(fam.L).size()
                : So3Grid(fam.L, fam.scale_n_limit(sc.j)).size();
        if (fam.kind != FamilyKind::axisymmetric &&
            sc.n_limit != fam.scale_n_limit(sc.j))
            throw invalid_input("scale azimuthal limit does not match the family");
        if (sc.values.size() != expect)
            throw invalid_input("scale sample count does not match its grid");
    }
}

HarmonicCoeffs truncate(const HarmonicCoeffs& flm, std::uint32_t L_out) {
    HarmonicCoeffs out(L_out, flm.real_signal);
    const std::uint32_t l_hi = std::min(L_out, flm.L);
    for (std::uint32_t l = 0; l < l_hi; ++l)
        for (std::int32_t m = -static_cast<std::int32_t>(l);
             m <= static_cast<std::int32_t>(l); ++m)
            out.at(l, m) = flm.at(l, m);
    return out;
}

} // namespace

WaveletCoefficients analyse(const SphericalImage& f, const WaveletFamily& fam) {
    if (f.grid.L != fam.L) throw invalid_input("image band limit does not match the family");
    const HarmonicCoeffs flm = sht_forward(f);

    WaveletCoefficients w;
    w.kind = fam.kind;
    w.L = fam.L;
    w.B = fam.B;
    w.j_min = fam.j_min;
    w.N = fam.N;

    HarmonicCoeffs s(fam.L, true);
    for (std::uint32_t l = 0; l < fam.L; ++l)
        for (std::int32_t m = -static_cast<std::int32_t>(l);
             m <= static_cast<std::int32_t>(l); ++m)
            s.at(l, m) = flm.at(l, m) * fam.scaling[l];
    w.scaling = sht_inverse(s);
    w.scales = analyse_scales(flm, fam, fam.j_min, fam.j_max);
    return w;
}

SphericalImage synthesise(const WaveletCoefficients& w, const WaveletFamily& fam) {
    check_coeffs(w, fam);
    HarmonicCoeffs flm(fam.L, true);
    const HarmonicCoeffs s = sht_forward(w.scaling);
    for (std::uint32_t l = 0; l < fam.L; ++l)
        for (std::int32_t m = -static_cast<std::int32_t>(l);
             m <= static_cast<std::int32_t>(l); ++m)
            flm.at(l, m) = s.at(l, m) * fam.scaling[l];
    synthesise_scales(w.scales, fam, flm);
    return sht_inverse(flm);
}

HybridCoefficients analyse_hybrid(const SphericalImage& f, const WaveletFamily& curv_fam,
                                  const WaveletFamily& dir_fam) {
    if (curv_fam.kind != FamilyKind::curvelet || dir_fam.kind != FamilyKind::directional)
        throw invalid_parameter("hybrid analysis expects a curvelet and a directional family");
    if (f.grid.L != dir_fam.L)
        throw invalid_input("image band limit does not match the directional family");
    if (curv_fam.L > dir_fam.L)
        throw invalid_parameter("transition band limit exceeds the image band limit");
    if (curv_fam.j_min != dir_fam.j_min)
        throw invalid_parameter("hybrid families must share j_min");

    HybridCoefficients h;
    h.L = dir_fam.L;
    h.L_trans = curv_fam.L;

    const HarmonicCoeffs flm = sht_forward(f);
    const HarmonicCoeffs flm_low = truncate(flm, curv_fam.L);

    h.curv.kind = curv_fam.kind;
    h.curv.L = curv_fam.L;
    h.curv.B = curv_fam.B;
    h.curv.j_min = curv_fam.j_min;
    h.curv.N = curv_fam.N;
    HarmonicCoeffs s(curv_fam.L, true);
    for (std::uint32_t l = 0; l < curv_fam.L; ++l)
        for (std::int32_t m = -static_cast<std::int32_t>(l);
             m <= static_cast<std::int32_t>(l); ++m)
            s.at(l, m) = flm_low.at(l, m) * curv_fam.scaling[l];
    h.curv.scaling = sht_inverse(s);
    // The finest curvelet scale is dropped; the directional pass below picks
    // up whatever it would have carried.
    h.curv.scales = analyse_scales(flm_low, curv_fam, curv_fam.j_min, curv_fam.j_max - 1);

    const SphericalImage curv_small = synthesise(h.curv, curv_fam);
    const HarmonicCoeffs curv_lm = truncate(sht_forward(curv_small), h.L);
    h.curv_image = sht_inverse(curv_lm);

    SphericalImage residual = f;
    for (std::size_t i = 0; i < residual.values.size(); ++i)
        residual.values[i] -= h.curv_image.values[i];
    h.dir = analyse(residual, dir_fam);
    return h;
}

SphericalImage synthesise_hybrid(const HybridCoefficients& h, const WaveletFamily& curv_fam,
                                 const WaveletFamily& dir_fam) {
    if (h.L != dir_fam.L || h.L_trans != curv_fam.L)
        throw invalid_input("hybrid coefficients do not match the families");
    const SphericalImage curv_small = synthesise(h.curv, curv_fam);
    const HarmonicCoeffs curv_lm = truncate(sht_forward(curv_small), h.L);
    SphericalImage out = sht_inverse(curv_lm);
    const SphericalImage dir_part = synthesise(h.dir, dir_fam);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] += dir_part.values[i];
    return out;
}

SphericalImage threshold_roundtrip(const SphericalImage& f, double lambda,
                                   const WaveletFamily& fam) {
    WaveletCoefficients w = analyse(f, fam);
    for (auto& sc : w.scales) soft_threshold_inplace(sc.values, lambda);
    return synthesise(w, fam);
}

SphericalImage threshold_roundtrip_hybrid(const SphericalImage& f, double lambda,
                                          const WaveletFamily& curv_fam,
                                          const WaveletFamily& dir_fam) {
    HybridCoefficients h = analyse_hybrid(f, curv_fam, dir_fam);
    for (auto& sc : h.curv.scales) soft_threshold_inplace(sc.values, lambda);
    for (auto& sc : h.dir.scales) soft_threshold_inplace(sc.values, lambda);
    return synthesise_hybrid(h, curv_fam, dir_fam);
}

} // namespace sphseg
