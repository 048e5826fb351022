#include "sphseg/tiling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>

#include "sphseg/errors.hpp"

namespace sphseg {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1], positive half; nodes are
// symmetric and weights repeat.
constexpr std::array<double, 8> kGlNode = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGlWeight = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double bump(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

// Integrand of the window integral: s_B(u)^2 / u with s_B the bump mapped
// onto [1/B, 1].
double integrand(double u, double B) {
    const double x = (2.0 * B / (B - 1.0)) * (u - 1.0 / B) - 1.0;
    const double s = bump(x);
    return s * s / u;
}

double integrate(double lo, double hi, double B, int panels) {
    if (hi <= lo) return 0.0;
    const double h = (hi - lo) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * h;
        const double half = 0.5 * h;
        double acc = 0.0;
        for (std::size_t i = 0; i < kGlNode.size(); ++i) {
            acc += kGlWeight[i] * (integrand(mid + half * kGlNode[i], B) +
                                   integrand(mid - half * kGlNode[i], B));
        }
        total += half * acc;
    }
    return total;
}

// Normalized decreasing window: 1 below 1/B, 0 above 1, smooth in between.
class Window {
public:
    explicit Window(double B) : B_(B), norm_(integrate(1.0 / B, 1.0, B, 64)) {}

    double operator()(double t) const {
        if (t <= 1.0 / B_) return 1.0;
        if (t >= 1.0) return 0.0;
        return integrate(t, 1.0, B_, 64) / norm_;
    }

private:
    double B_;
    double norm_;
};

void validate_base(double B) {
    if (!(B > 1.0) || !std::isfinite(B))
        throw invalid_parameter("dilation base must be finite and > 1");
}

} // namespace

int compute_j_max(double B, std::uint32_t L) {
    validate_base(B);
    if (L < 2) throw invalid_parameter("band limit must be at least 2");
    const double v = std::log(static_cast<double>(L - 1)) / std::log(B);
    // Nudge below the exact-power case so e.g. L-1 = B^j yields j, not j+1.
    int j = static_cast<int>(std::ceil(v - 1e-9));
    return std::max(j, 0);
}

KernelSet build_kernels(std::uint32_t L, double B, int j_min) {
    validate_base(B);
    if (L < 2) throw invalid_parameter("band limit must be at least 2");
    if (j_min < 0) throw invalid_parameter("j_min must be non-negative");
    const int j_max = compute_j_max(B, L);
    if (j_min > j_max)
        throw invalid_parameter("j_min exceeds the largest scale for this band limit");

    KernelSet ks;
    ks.L = L;
    ks.B = B;
    ks.j_min = j_min;
    ks.j_max = j_max;
    ks.scaling.resize(L);
    ks.kappa.assign(static_cast<std::size_t>(j_max - j_min + 1),
                    std::vector<double>(L, 0.0));

    const Window k(B);
    const double scale0 = std::pow(B, j_min);
    for (std::uint32_t l = 0; l < L; ++l)
        ks.scaling[l] = std::sqrt(k(l / scale0));
    for (int j = j_min; j <= j_max; ++j) {
        const double s0 = std::pow(B, j);
        const double s1 = std::pow(B, j + 1);
        auto& row = ks.kappa[static_cast<std::size_t>(j - j_min)];
        for (std::uint32_t l = 0; l < L; ++l) {
            const double diff = k(l / s1) - k(l / s0);
            row[l] = std::sqrt(std::max(diff, 0.0));
        }
    }
    return ks;
}

std::vector<std::complex<double>> build_directionality(std::uint32_t L, std::uint32_t N,
                                                       FamilyKind kind) {
    if (L < 1) throw invalid_parameter("band limit must be at least 1");
    if (N < 1) throw invalid_parameter("azimuthal order count must be at least 1");
    if (kind == FamilyKind::axisymmetric && N != 1)
        throw invalid_parameter("axisymmetric families require N = 1");
    if (kind == FamilyKind::directional && N > L)
        throw invalid_parameter("azimuthal order count must not exceed the band limit");

    std::vector<std::complex<double>> zeta(static_cast<std::size_t>(L) * L);
    const auto at = [&zeta](std::uint32_t l, std::int32_t m) -> std::complex<double>& {
        return zeta[static_cast<std::size_t>(l) * (l + 1) + m];
    };

    for (std::uint32_t l = 0; l < L; ++l) {
        switch (kind) {
        case FamilyKind::axisymmetric:
            at(l, 0) = 1.0;
            break;
        case FamilyKind::directional: {
            const std::int32_t p =
                std::min<std::int32_t>(static_cast<std::int32_t>(N) - 1,
                                       static_cast<std::int32_t>(l));
            if (p == 0) {
                at(l, 0) = 1.0;
                break;
            }
            // Binomial weights over orders of the same parity as p,
            // normalized explicitly so the squares sum to 1.
            double sum = 0.0;
            std::vector<double> w(static_cast<std::size_t>(p) + 1, 0.0);
            for (std::int32_t m = -p; m <= p; ++m) {
                if ((p - m) % 2 != 0) continue;
                const std::int32_t h = (p - m) / 2;
                const double b = std::exp(std::lgamma(p + 1.0) - std::lgamma(h + 1.0) -
                                          std::lgamma(p - h + 1.0));
                if (m >= 0) w[static_cast<std::size_t>(m)] = b;
                sum += b;
            }
            for (std::int32_t m = -p; m <= p; ++m) {
                if ((p - m) % 2 != 0) continue;
                const double c = std::sqrt(w[static_cast<std::size_t>(std::abs(m))] / sum);
                // Odd orders get a factor i so that the reality condition
                // zeta_{l,-m} = (-1)^m conj(zeta_{lm}) holds.
                at(l, m) = (m % 2 != 0) ? std::complex<double>(0.0, c)
                                        : std::complex<double>(c, 0.0);
            }
            break;
        }
        case FamilyKind::curvelet: {
            const std::int32_t q = (l % 2 == 0) ? static_cast<std::int32_t>(l)
                                                : static_cast<std::int32_t>(l) - 1;
            if (q == 0) {
                at(l, 0) = 1.0;
            } else {
                const double c = 1.0 / std::sqrt(2.0);
                at(l, q) = c;
                at(l, -q) = c;
            }
            break;
        }
        }
    }
    return zeta;
}

std::uint32_t WaveletFamily::scale_n_limit(int j) const {
    if (j < j_min || j > j_max) throw invalid_parameter("scale index out of range");
    std::uint32_t limit = 1;
    for (std::uint32_t l = 0; l < L; ++l) {
        if (kappa_at(j, l) == 0.0) continue;
        for (std::int32_t m = static_cast<std::int32_t>(l); m >= 0; --m) {
            if (std::abs(zeta_at(l, m)) != 0.0) {
                limit = std::max(limit, static_cast<std::uint32_t>(m) + 1);
                break;
            }
        }
    }
    return std::min(limit, L);
}

WaveletFamily build_family(FamilyKind kind, std::uint32_t L, double B, int j_min,
                           std::uint32_t N) {
    if (kind != FamilyKind::directional && kind != FamilyKind::axisymmetric) {
        // The curvelet kind derives its orders from the degrees; a caller
        // supplied N is ignored rather than rejected.
        N = 1;
    }
    KernelSet ks = build_kernels(L, B, j_min);
    WaveletFamily fam;
    fam.kind = kind;
    fam.L = L;
    fam.B = B;
    fam.j_min = ks.j_min;
    fam.j_max = ks.j_max;
    fam.N = (kind == FamilyKind::directional) ? N : 1;
    fam.scaling = std::move(ks.scaling);
    fam.kappa = std::move(ks.kappa);
    fam.zeta = build_directionality(L, fam.N, kind);
    return fam;
}

std::complex<double> wavelet_harmonic(const WaveletFamily& fam, int j, std::uint32_t l,
                                      std::int32_t n) {
    if (j < fam.j_min || j > fam.j_max) throw invalid_parameter("scale index out of range");
    if (l >= fam.L) throw invalid_parameter("degree out of range");
    if (std::abs(n) > static_cast<std::int32_t>(l))
        throw invalid_parameter("order exceeds degree");
    const double norm = std::sqrt((2.0 * l + 1.0) / (8.0 * M_PI * M_PI));
    return norm * fam.kappa_at(j, l) * fam.zeta_at(l, n);
}

double check_admissibility(const WaveletFamily& fam) {
    double worst = 0.0;
    for (std::uint32_t l = 0; l < fam.L; ++l) {
        double total = fam.scaling[l] * fam.scaling[l];
        for (int j = fam.j_min; j <= fam.j_max; ++j) {
            const double k = fam.kappa_at(j, l);
            total += k * k;
        }
        worst = std::max(worst, std::abs(total - 1.0));
    }
    return worst;
}

void write_tiling_csv(const WaveletFamily& fam, std::ostream& os) {
    os << "l,phi";
    for (int j = fam.j_min; j <= fam.j_max; ++j) os << ",kappa" << j;
    os << "\n";
    char buf[64];
    for (std::uint32_t l = 0; l < fam.L; ++l) {
        os << l;
        std::snprintf(buf, sizeof(buf), "%.17g", fam.scaling[l]);
        os << ',' << buf;
        for (int j = fam.j_min; j <= fam.j_max; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", fam.kappa_at(j, l));
            os << ',' << buf;
        }
        os << "\n";
    }
}

} // namespace sphseg
