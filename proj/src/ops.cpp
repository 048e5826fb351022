#include "sphseg/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sphseg/errors.hpp"

namespace sphseg {

namespace {

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw invalid_parameter("threshold must be finite and non-negative");
}

} // namespace

double soft_threshold(double v, double lambda) {
    check_lambda(lambda);
    if (v > lambda) return v - lambda;
    if (v < -lambda) return v + lambda;
    return 0.0;
}

void soft_threshold_inplace(std::vector<double>& v, double lambda) {
    check_lambda(lambda);
    for (double& x : v) {
        if (x > lambda)
            x -= lambda;
        else if (x < -lambda)
            x += lambda;
        else
            x = 0.0;
    }
}

SphericalImage soft_threshold(const SphericalImage& f, double lambda) {
    SphericalImage out = f;
    soft_threshold_inplace(out.values, lambda);
    return out;
}

namespace {

template <typename Combine>
SphericalImage gradient_impl(const SphericalImage& f, Combine combine) {
    const auto& g = f.grid;
    const std::uint32_t nt = g.n_theta();
    const std::uint32_t np = g.n_phi();
    const double step = 2.0 * M_PI / (2.0 * g.L - 1.0);
    SphericalImage out(g);
    for (std::uint32_t t = 0; t < nt; ++t) {
        const bool south = (t == nt - 1);
        const double inv_sin = south ? 0.0 : 1.0 / std::sin(g.theta(t));
        for (std::uint32_t p = 0; p < np; ++p) {
            const double here = f.at(t, p);
            const double dth = south ? (here - f.at(t - 1, p)) / step
                                     : (f.at(t + 1, p) - here) / step;
            const double dph =
                south ? 0.0 : (f.at(t, (p + 1) % np) - here) / step * inv_sin;
            out.at(t, p) = combine(dth, dph);
        }
    }
    return out;
}

} // namespace

SphericalImage gradient_magnitude(const SphericalImage& f) {
    if (f.grid.L < 2) throw invalid_parameter("gradient needs at least two rings");
    return gradient_impl(f, [](double a, double b) { return std::hypot(a, b); });
}

SphericalImage gradient_one_norm(const SphericalImage& f) {
    if (f.grid.L < 2) throw invalid_parameter("gradient needs at least two rings");
    return gradient_impl(f, [](double a, double b) { return std::abs(a) + std::abs(b); });
}

namespace {

// Deterministic standard normal stream: 53-bit uniforms from mt19937_64
// fed through Box-Muller. std::normal_distribution is implementation
// defined, which would break cross-platform reproducibility.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform() {
        // (0, 1): the +0.5 offset keeps log() away from zero.
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
    }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace

SphericalImage add_noise(const SphericalImage& f, double snr_db, std::uint64_t seed) {
    if (!std::isfinite(snr_db)) throw invalid_parameter("snr must be finite");
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, std::abs(v));
    const double sigma = peak * std::pow(10.0, -snr_db / 20.0);
    SphericalImage out = f;
    if (sigma == 0.0) return out;
    NormalStream rng(seed);
    for (double& v : out.values) v += sigma * rng.next();
    return out;
}

KmeansResult kmeans_intensity(const SphericalImage& f, int k) {
    const std::size_t n = f.values.size();
    if (k < 2) throw invalid_parameter("k must be at least 2");
    if (static_cast<std::size_t>(k) > n)
        throw invalid_parameter("k exceeds the number of samples");

    KmeansResult res;
    res.labels.assign(n, 0);
    res.centroids.assign(static_cast<std::size_t>(k), 0.0);

    const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    if (*lo == *hi) {
        res.centroids.assign(static_cast<std::size_t>(k), *lo);
        res.degenerate = true;
        return res;
    }

    std::vector<double> sorted = f.values;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < k; ++i) {
        const double pos = (2.0 * i + 1.0) / (2.0 * k) * (n - 1);
        const std::size_t base = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(base);
        const double upper = (base + 1 < n) ? sorted[base + 1] : sorted[base];
        res.centroids[static_cast<std::size_t>(i)] =
            sorted[base] + frac * (upper - sorted[base]);
    }

    std::vector<double> sum(static_cast<std::size_t>(k));
    std::vector<std::size_t> count(static_cast<std::size_t>(k));
    for (int round = 0; round < 100; ++round) {
        bool changed = (round == 0);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = f.values[i];
            int best = 0;
            double best_d = std::abs(v - res.centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = std::abs(v - res.centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (res.labels[i] != best) {
                res.labels[i] = static_cast<std::uint8_t>(best);
                changed = true;
            }
        }
        res.iterations = round + 1;
        if (!changed) break;
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[res.labels[i]] += f.values[i];
            ++count[res.labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (count[static_cast<std::size_t>(c)] > 0)
                res.centroids[static_cast<std::size_t>(c)] =
                    sum[static_cast<std::size_t>(c)] /
                    static_cast<double>(count[static_cast<std::size_t>(c)]);
        }
    }

    // Quantile initialization keeps centroids ascending and 1-D Lloyd rounds
    // preserve that order, so no relabeling pass is needed; assert the
    // invariant cheaply instead.
    for (int c = 1; c < k; ++c) {
        if (res.centroids[static_cast<std::size_t>(c - 1)] >
            res.centroids[static_cast<std::size_t>(c)])
            throw numeric_error("kmeans centroids lost their ordering");
    }
    return res;
}

BinaryMask kmeans_mask(const SphericalImage& f) {
    const KmeansResult r = kmeans_intensity(f, 2);
    BinaryMask mask(f.grid);
    if (r.degenerate) return mask;
    for (std::size_t i = 0; i < r.labels.size(); ++i) mask.labels[i] = r.labels[i];
    return mask;
}

double dice(const BinaryMask& a, const BinaryMask& b) {
    if (!(a.grid == b.grid)) throw invalid_input("masks live on different grids");
    std::size_t both = 0, in_a = 0, in_b = 0;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        in_a += a.labels[i];
        in_b += b.labels[i];
        both += static_cast<std::size_t>(a.labels[i]) & b.labels[i];
    }
    if (in_a + in_b == 0) return 1.0;
    return 2.0 * static_cast<double>(both) / static_cast<double>(in_a + in_b);
}

} // namespace sphseg
