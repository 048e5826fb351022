#include "wigner_internal.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "sphseg/errors.hpp"
#include "sphseg/harmonic.hpp"

namespace sphseg::detail {
namespace {

// d^q_{q,s}(beta) = sqrt((2q)! / ((q+s)!(q-s)!)) cos(b/2)^{q+s} (-sin(b/2))^{q-s}
double top_row(std::int32_t q, std::int32_t s, double beta) {
    const double ch = std::cos(0.5 * beta);
    const double sh = std::sin(0.5 * beta);
    const std::int32_t pc = q + s;
    const std::int32_t ps = q - s;
    double lg = 0.5 * (std::lgamma(2.0 * q + 1.0) - std::lgamma(pc + 1.0) -
                       std::lgamma(ps + 1.0));
    if (pc > 0) {
        if (ch <= 0.0)
            return 0.0;
        lg += pc * std::log(ch);
    }
    if (ps > 0) {
        if (sh <= 0.0)
            return 0.0;
        lg += ps * std::log(sh);
    }
    const double sign = (ps % 2 != 0) ? -1.0 : 1.0;
    return sign * std::exp(lg);
}

} // namespace

double wigner_seed(std::int32_t m, std::int32_t n, double beta) {
    const std::int32_t l0 = std::max(std::abs(m), std::abs(n));
    if (l0 == 0)
        return 1.0;
    if (std::abs(m) >= std::abs(n)) {
        if (m > 0)
            return top_row(l0, n, beta);
        // d^l_{-l,n} = (-1)^{l+n} d^l_{l,-n}
        const double sign = ((l0 + n) % 2 != 0) ? -1.0 : 1.0;
        return sign * top_row(l0, -n, beta);
    }
    if (n > 0) {
        // d^l_{m,l} = (-1)^{m-l} d^l_{l,m}
        const double sign = ((m + l0) % 2 != 0) ? -1.0 : 1.0;
        return sign * top_row(l0, m, beta);
    }
    // d^l_{m,-l} = d^l_{l,-m}
    return top_row(l0, -m, beta);
}

void wigner_profile(std::int32_t m, std::int32_t n, const std::vector<double>& betas,
                    std::uint32_t L, Eigen::MatrixXd& out) {
    const std::int32_t l0 = std::max(std::abs(m), std::abs(n));
    const auto nb = static_cast<Eigen::Index>(betas.size());
    const Eigen::Index cols =
        static_cast<std::int64_t>(L) > l0 ? static_cast<Eigen::Index>(L) - l0 : 0;
    out.resize(nb, cols);
    if (cols == 0)
        return;

    for (Eigen::Index i = 0; i < nb; ++i)
        out(i, 0) = wigner_seed(m, n, betas[i]);
    if (cols == 1)
        return;

    Eigen::ArrayXd cosb(nb);
    for (Eigen::Index i = 0; i < nb; ++i)
        cosb(i) = std::cos(betas[i]);

    const double mm = static_cast<double>(m);
    const double nn = static_cast<double>(n);
    auto wcoef = [&](double l) {
        return std::sqrt((l * l - mm * mm) * (l * l - nn * nn)) / l;
    };

    // w_{l+1} d^{l+1} = (2l+1)(cos b - mn/(l(l+1))) d^l - w_l d^{l-1}
    for (std::int32_t l = l0; l + 1 < static_cast<std::int32_t>(L); ++l) {
        const double wl1 = wcoef(l + 1.0);
        const double shift = l == 0 ? 0.0 : mm * nn / (l * (l + 1.0));
        auto dl = out.col(l - l0).array();
        if (l == l0) {
            out.col(l + 1 - l0) = ((2.0 * l + 1.0) * (cosb - shift) * dl) / wl1;
        } else {
            const double wl = wcoef(l);
            out.col(l + 1 - l0) =
                ((2.0 * l + 1.0) * (cosb - shift) * dl - wl * out.col(l - 1 - l0).array()) / wl1;
        }
    }
}

} // namespace sphseg::detail

namespace sphseg {

Eigen::MatrixXd wigner_d(std::uint32_t l, double beta) {
    if (!(beta >= 0.0 && beta <= std::numbers::pi))
        throw invalid_parameter("wigner_d: beta must lie in [0, pi]");
    const auto dim = static_cast<Eigen::Index>(2 * l + 1);
    Eigen::MatrixXd d(dim, dim);
    const std::vector<double> b{beta};
    Eigen::MatrixXd prof;
    const auto li = static_cast<std::int32_t>(l);
    for (std::int32_t m = -li; m <= li; ++m) {
        for (std::int32_t n = -li; n <= li; ++n) {
            detail::wigner_profile(m, n, b, l + 1, prof);
            d(m + li, n + li) = prof(0, prof.cols() - 1);
        }
    }
    return d;
}

Eigen::MatrixXd legendre_table(std::uint32_t L, std::uint32_t m_abs,
                               const std::vector<double>& thetas) {
    if (m_abs >= L)
        throw invalid_parameter("legendre_table: |m| must be below the band limit");
    Eigen::MatrixXd table;
    detail::wigner_profile(static_cast<std::int32_t>(m_abs), 0, thetas, L, table);
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
        const double l = static_cast<double>(m_abs) + static_cast<double>(c);
        table.col(c) *= std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi));
    }
    return table;
}

} // namespace sphseg
