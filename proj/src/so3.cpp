#include "sphseg/harmonic.hpp"

#include <cmath>
#include <numbers>

#include "wigner_internal.hpp"

namespace sphseg {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double eight_pi2 = 8.0 * std::numbers::pi * std::numbers::pi;

MatrixXcd fourier_matrix(std::uint32_t n_samples, std::uint32_t n_orders, double step) {
    // F(s, k) = e^{-i (k - (n_orders-1)/2 ... )}: columns are orders
    // -(n_orders-1)/2 .. +(n_orders-1)/2 (n_orders is always odd here).
    const auto half = static_cast<std::int32_t>((n_orders - 1) / 2);
    MatrixXcd f(static_cast<Index>(n_samples), static_cast<Index>(n_orders));
    for (std::uint32_t s = 0; s < n_samples; ++s) {
        const double angle = step * s;
        for (std::int32_t k = -half; k <= half; ++k)
            f(s, k + half) = std::complex<double>(std::cos(k * angle), -std::sin(k * angle));
    }
    return f;
}

std::vector<double> beta_nodes(const So3Grid& grid) {
    std::vector<double> betas(grid.n_beta());
    for (std::uint32_t b = 0; b < grid.n_beta(); ++b)
        betas[b] = grid.beta(b);
    return betas;
}

} // namespace

So3Grid::So3Grid(std::uint32_t band_limit, std::uint32_t azimuthal_limit)
    : L(band_limit), N(azimuthal_limit) {
    if (L == 0)
        throw invalid_parameter("So3Grid: band limit must be >= 1");
    if (N == 0 || N > L)
        throw invalid_parameter("So3Grid: azimuthal limit must satisfy 1 <= N <= L");
}

double So3Grid::alpha(std::uint32_t a) const {
    if (a >= n_alpha())
        throw invalid_parameter("So3Grid::alpha: index out of range");
    return two_pi * a / (2.0 * L - 1.0);
}

double So3Grid::beta(std::uint32_t b) const {
    return EquiangularGrid(L).theta(b);
}

double So3Grid::gamma(std::uint32_t g) const {
    if (g >= n_gamma())
        throw invalid_parameter("So3Grid::gamma: index out of range");
    return two_pi * g / (2.0 * N - 1.0);
}

So3Coeffs::So3Coeffs(std::uint32_t band_limit, std::uint32_t azimuthal_limit)
    : L(band_limit), N(azimuthal_limit),
      c(static_cast<std::size_t>(2 * azimuthal_limit - 1) * band_limit * band_limit) {
    if (L == 0)
        throw invalid_parameter("So3Coeffs: band limit must be >= 1");
    if (N == 0 || N > L)
        throw invalid_parameter("So3Coeffs: azimuthal limit must satisfy 1 <= N <= L");
}

std::vector<std::complex<double>> so3_inverse(const So3Coeffs& w, const So3Grid& grid) {
    if (w.L != grid.L || w.N != grid.N)
        throw invalid_input("so3_inverse: coefficient set does not match grid");
    const std::uint32_t L = grid.L;
    const std::uint32_t N = grid.N;
    const auto na = static_cast<Index>(grid.n_alpha());
    const auto nb = static_cast<Index>(grid.n_beta());
    const auto ng = static_cast<Index>(grid.n_gamma());

    const std::vector<double> betas = beta_nodes(grid);

    // Per-order beta profiles G_{mn}(beta_b), stored as one (m, n) matrix per b.
    std::vector<MatrixXcd> g(static_cast<std::size_t>(nb));
    for (auto& gb : g)
        gb = MatrixXcd::Zero(na, ng);

    MatrixXd prof;
    VectorXd cre, cim;
    const auto li = static_cast<std::int32_t>(L);
    const auto ni = static_cast<std::int32_t>(N);
    for (std::int32_t m = -(li - 1); m <= li - 1; ++m) {
        for (std::int32_t n = -(ni - 1); n <= ni - 1; ++n) {
            const std::int32_t l0 = std::max(std::abs(m), std::abs(n));
            if (l0 >= li)
                continue;
            detail::wigner_profile(m, n, betas, L, prof);
            const Index cols = prof.cols();
            cre.resize(cols);
            cim.resize(cols);
            bool any = false;
            for (Index k = 0; k < cols; ++k) {
                const auto l = static_cast<std::uint32_t>(l0 + k);
                const auto v = w.at(l, m, n) * ((2.0 * l + 1.0) / eight_pi2);
                cre(k) = v.real();
                cim(k) = v.imag();
                any = any || v != 0.0;
            }
            if (!any)
                continue;
            const VectorXd pr = prof * cre;
            const VectorXd pi = prof * cim;
            for (Index b = 0; b < nb; ++b)
                g[static_cast<std::size_t>(b)](m + li - 1, n + ni - 1) =
                    std::complex<double>(pr(b), pi(b));
        }
    }

    const MatrixXcd f_alpha = fourier_matrix(grid.n_alpha(), 2 * L - 1, two_pi / (2.0 * L - 1.0));
    const MatrixXcd f_gamma = fourier_matrix(grid.n_gamma(), 2 * N - 1, two_pi / (2.0 * N - 1.0));

    std::vector<std::complex<double>> samples(grid.size());
    for (Index b = 0; b < nb; ++b) {
        const MatrixXcd out_b = f_alpha * g[static_cast<std::size_t>(b)] * f_gamma.transpose();
        for (Index a = 0; a < na; ++a)
            for (Index gg = 0; gg < ng; ++gg)
                samples[grid.index(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(a),
                                   static_cast<std::uint32_t>(gg))] = out_b(a, gg);
    }
    return samples;
}

So3Coeffs so3_forward(const std::vector<std::complex<double>>& samples, const So3Grid& grid) {
    if (samples.size() != grid.size())
        throw invalid_input("so3_forward: sample count does not match grid");
    for (const auto& s : samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw invalid_input("so3_forward: non-finite sample");

    const std::uint32_t L = grid.L;
    const std::uint32_t N = grid.N;
    const auto na = static_cast<Index>(grid.n_alpha());
    const auto nb = static_cast<Index>(grid.n_beta());
    const auto ng = static_cast<Index>(grid.n_gamma());

    const MatrixXcd f_alpha = fourier_matrix(grid.n_alpha(), 2 * L - 1, two_pi / (2.0 * L - 1.0));
    const MatrixXcd f_gamma = fourier_matrix(grid.n_gamma(), 2 * N - 1, two_pi / (2.0 * N - 1.0));
    const double scale = 1.0 / (static_cast<double>(na) * static_cast<double>(ng));

    // Azimuthal analysis: G_{mn}(b) = scale * sum_{a,g} W(a,b,g) e^{i m alpha} e^{i n gamma}.
    std::vector<MatrixXcd> g(static_cast<std::size_t>(nb));
    MatrixXcd s_b(na, ng);
    for (Index b = 0; b < nb; ++b) {
        for (Index a = 0; a < na; ++a)
            for (Index gg = 0; gg < ng; ++gg)
                s_b(a, gg) = samples[grid.index(static_cast<std::uint32_t>(b),
                                                static_cast<std::uint32_t>(a),
                                                static_cast<std::uint32_t>(gg))];
        g[static_cast<std::size_t>(b)] = (f_alpha.adjoint() * s_b * f_gamma.conjugate()) * scale;
    }

    const std::vector<double> betas = beta_nodes(grid);

    So3Coeffs w(L, N);
    MatrixXd prof;
    VectorXd rr(nb), ri(nb);
    const auto li = static_cast<std::int32_t>(L);
    const auto ni = static_cast<std::int32_t>(N);
    for (std::int32_t m = -(li - 1); m <= li - 1; ++m) {
        for (std::int32_t n = -(ni - 1); n <= ni - 1; ++n) {
            const std::int32_t l0 = std::max(std::abs(m), std::abs(n));
            if (l0 >= li)
                continue;
            detail::wigner_profile(m, n, betas, L, prof);
            for (Index b = 0; b < nb; ++b) {
                const auto v = g[static_cast<std::size_t>(b)](m + li - 1, n + ni - 1);
                rr(b) = v.real();
                ri(b) = v.imag();
            }
            Eigen::ColPivHouseholderQR<MatrixXd> qr(prof);
            const VectorXd xr = qr.solve(rr);
            const VectorXd xi = qr.solve(ri);
            for (Index k = 0; k < prof.cols(); ++k) {
                const auto l = static_cast<std::uint32_t>(l0 + k);
                w.at(l, m, n) =
                    std::complex<double>(xr(k), xi(k)) * (eight_pi2 / (2.0 * l + 1.0));
            }
        }
    }
    return w;
}

} // namespace sphseg
