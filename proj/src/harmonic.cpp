#include "sphseg/harmonic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "wigner_internal.hpp"

namespace sphseg {
namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Exact forward transforms at moderate band limits are obtained by solving
// the per-m ring evaluation systems in the least squares sense. The plan
// caches the ring-sampled Legendre basis and its QR factorization per L.
struct ShtPlan {
    std::uint32_t L;
    std::vector<MatrixXd> basis; // m = 0..L-1: n_theta x (L-m)
    std::vector<Eigen::ColPivHouseholderQR<MatrixXd>> qr;
    MatrixXd cos_mphi; // n_phi x L: cos(m phi_p)
    MatrixXd sin_mphi; // n_phi x L: sin(m phi_p)

    explicit ShtPlan(std::uint32_t band_limit) : L(band_limit) {
        const EquiangularGrid grid(L);
        std::vector<double> thetas(grid.n_theta());
        for (std::uint32_t t = 0; t < grid.n_theta(); ++t)
            thetas[t] = grid.theta(t);

        basis.reserve(L);
        qr.reserve(L);
        for (std::uint32_t m = 0; m < L; ++m) {
            basis.push_back(legendre_table(L, m, thetas));
            qr.emplace_back(basis.back());
        }

        const auto np = static_cast<Index>(grid.n_phi());
        cos_mphi.resize(np, static_cast<Index>(L));
        sin_mphi.resize(np, static_cast<Index>(L));
        for (Index p = 0; p < np; ++p) {
            const double phi = grid.phi(static_cast<std::uint32_t>(p));
            for (Index m = 0; m < static_cast<Index>(L); ++m) {
                cos_mphi(p, m) = std::cos(m * phi);
                sin_mphi(p, m) = std::sin(m * phi);
            }
        }
    }
};

const ShtPlan& plan_for(std::uint32_t L) {
    static std::mutex mutex;
    static std::map<std::uint32_t, std::unique_ptr<ShtPlan>> cache;
    std::scoped_lock lock(mutex);
    auto& slot = cache[L];
    if (!slot)
        slot = std::make_unique<ShtPlan>(L);
    return *slot;
}

void check_finite(const std::vector<double>& values, const char* who) {
    for (double v : values)
        if (!std::isfinite(v))
            throw invalid_input(std::string(who) + ": non-finite sample");
}

} // namespace

HarmonicCoeffs::HarmonicCoeffs(std::uint32_t band_limit, bool real)
    : L(band_limit), real_signal(real), c(static_cast<std::size_t>(band_limit) * band_limit) {
    if (L == 0)
        throw invalid_parameter("HarmonicCoeffs: band limit must be >= 1");
}

HarmonicCoeffs sht_forward(const SphericalImage& f) {
    check_finite(f.values, "sht_forward");
    const std::uint32_t L = f.grid.L;
    const ShtPlan& plan = plan_for(L);

    const auto nt = static_cast<Index>(f.grid.n_theta());
    const auto np = static_cast<Index>(f.grid.n_phi());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        samples(f.values.data(), nt, np);

    // Ring analysis G_m(t) = 1/(2L-1) sum_p f(t,p) e^{-i m phi_p}, m >= 0.
    const double scale = 1.0 / static_cast<double>(np);
    const MatrixXd g_re = samples * plan.cos_mphi * scale;
    const MatrixXd g_im = samples * plan.sin_mphi * (-scale);

    HarmonicCoeffs out(L, true);
    for (std::uint32_t m = 0; m < L; ++m) {
        const VectorXd xr = plan.qr[m].solve(g_re.col(m));
        const VectorXd xi = plan.qr[m].solve(g_im.col(m));
        const double mirror = (m % 2 != 0) ? -1.0 : 1.0;
        for (std::uint32_t l = m; l < L; ++l) {
            const std::complex<double> v(xr(l - m), xi(l - m));
            out.at(l, static_cast<std::int32_t>(m)) = v;
            if (m > 0)
                out.at(l, -static_cast<std::int32_t>(m)) = mirror * std::conj(v);
        }
    }
    return out;
}

SphericalImage sht_inverse(const HarmonicCoeffs& flm) {
    const std::uint32_t L = flm.L;
    if (L == 0)
        throw invalid_input("sht_inverse: empty coefficient set");
    const ShtPlan& plan = plan_for(L);
    const EquiangularGrid grid(L);
    const auto nt = static_cast<Index>(grid.n_theta());
    const auto np = static_cast<Index>(grid.n_phi());

    if (flm.real_signal) {
        // H_m(t) = sum_l f_lm Ytilde_lm(theta_t); the m >= 1 columns carry the
        // doubled weight of the mirrored negative orders.
        MatrixXd h_re(nt, static_cast<Index>(L));
        MatrixXd h_im(nt, static_cast<Index>(L));
        VectorXd cre, cim;
        for (std::uint32_t m = 0; m < L; ++m) {
            const auto cols = static_cast<Index>(L - m);
            cre.resize(cols);
            cim.resize(cols);
            for (std::uint32_t l = m; l < L; ++l) {
                const auto v = flm.at(l, static_cast<std::int32_t>(m));
                cre(l - m) = v.real();
                cim(l - m) = v.imag();
            }
            const double w = m == 0 ? 1.0 : 2.0;
            h_re.col(m) = plan.basis[m] * cre * w;
            h_im.col(m) = plan.basis[m] * cim * w;
        }
        // f(t,p) = H_0(t) + 2 Re sum_{m>=1} H_m(t) e^{i m phi_p}
        const MatrixXd s = h_re * plan.cos_mphi.transpose() - h_im * plan.sin_mphi.transpose();

        SphericalImage out(grid);
        for (Index t = 0; t < nt; ++t)
            for (Index p = 0; p < np; ++p)
                out.values[static_cast<std::size_t>(t) * np + p] = s(t, p);
        return out;
    }

    // General complex coefficients: accumulate both azimuthal signs, then
    // discard the imaginary residue after checking it is negligible.
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(nt, static_cast<Index>(2 * L - 1));
    VectorXd re, im;
    for (std::uint32_t m = 0; m < L; ++m) {
        const auto cols = static_cast<Index>(L - m);
        for (int sign = 0; sign < (m == 0 ? 1 : 2); ++sign) {
            const std::int32_t ms = sign == 0 ? static_cast<std::int32_t>(m)
                                              : -static_cast<std::int32_t>(m);
            re.resize(cols);
            im.resize(cols);
            for (std::uint32_t l = m; l < L; ++l) {
                const auto v = flm.at(l, ms);
                re(l - m) = v.real();
                im(l - m) = v.imag();
            }
            // Ytilde_{l,-m} = (-1)^m Ytilde_{lm}
            const double mirror = (sign == 1 && m % 2 != 0) ? -1.0 : 1.0;
            const Index col = static_cast<Index>(L) - 1 + ms;
            h.col(col).real() = plan.basis[m] * re * mirror;
            h.col(col).imag() = plan.basis[m] * im * mirror;
        }
    }
    Eigen::MatrixXcd fourier(np, static_cast<Index>(2 * L - 1));
    for (Index p = 0; p < np; ++p) {
        const double phi = grid.phi(static_cast<std::uint32_t>(p));
        for (std::int32_t m = -(static_cast<std::int32_t>(L) - 1);
             m <= static_cast<std::int32_t>(L) - 1; ++m)
            fourier(p, m + static_cast<Index>(L) - 1) =
                std::complex<double>(std::cos(m * phi), std::sin(m * phi));
    }
    const Eigen::MatrixXcd s = h * fourier.transpose();

    double max_re = 0.0, max_im = 0.0;
    for (Index t = 0; t < nt; ++t)
        for (Index p = 0; p < np; ++p) {
            max_re = std::max(max_re, std::abs(s(t, p).real()));
            max_im = std::max(max_im, std::abs(s(t, p).imag()));
        }
    if (max_im > 1e-10 * std::max(1.0, max_re))
        throw numeric_error("sht_inverse: imaginary residue above tolerance; "
                            "coefficients do not describe a real field");

    SphericalImage out(grid);
    for (Index t = 0; t < nt; ++t)
        for (Index p = 0; p < np; ++p)
            out.values[static_cast<std::size_t>(t) * np + p] = s(t, p).real();
    return out;
}

SphericalImage band_limit_image(const SphericalImage& f, std::uint32_t L_target) {
    if (L_target == 0)
        throw invalid_parameter("band_limit_image: target band limit must be >= 1");
    HarmonicCoeffs flm = sht_forward(f);
    for (std::uint32_t l = L_target; l < flm.L; ++l)
        for (std::int32_t m = -static_cast<std::int32_t>(l); m <= static_cast<std::int32_t>(l);
             ++m)
            flm.at(l, m) = 0.0;
    return sht_inverse(flm);
}

} // namespace sphseg
