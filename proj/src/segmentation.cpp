#include "sphseg/segmentation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "sphseg/errors.hpp"
#include "sphseg/ops.hpp"
#include "sphseg/tiling.hpp"
#include "sphseg/transform.hpp"

namespace sphseg {

const char* to_string(SegStatus s) {
    switch (s) {
    case SegStatus::converged: return "converged";
    case SegStatus::converged_trigger: return "converged_trigger";
    case SegStatus::max_iterations: return "max_iterations";
    case SegStatus::degenerate_flat: return "degenerate_flat";
    }
    return "unknown";
}

namespace {

void validate_config(const WssaConfig& cfg, std::uint32_t L) {
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
        throw invalid_parameter("epsilon must be finite and positive");
    if (!(cfg.lambda_bar >= 0.0) || !std::isfinite(cfg.lambda_bar))
        throw invalid_parameter("lambda_bar must be finite and non-negative");
    if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda))
        throw invalid_parameter("lambda must be finite and non-negative");
    if (cfg.max_iter < 1) throw invalid_parameter("max_iter must be at least 1");
    if (L < 2) throw invalid_parameter("band limit must be at least 2");
    if (cfg.family == SegFamily::hybrid) {
        const std::uint32_t lt = cfg.L_trans ? cfg.L_trans : L / 2;
        if (lt < 2 || lt > L)
            throw invalid_parameter("transition band limit must lie in [2, L]");
    }
}

struct Families {
    WaveletFamily primary;
    WaveletFamily curv;
    bool hybrid = false;
};

Families make_families(const WssaConfig& cfg, std::uint32_t L) {
    Families fams;
    switch (cfg.family) {
    case SegFamily::axisymmetric:
        fams.primary = build_family(FamilyKind::axisymmetric, L, cfg.B, cfg.j_min);
        break;
    case SegFamily::directional:
        fams.primary = build_family(FamilyKind::directional, L, cfg.B, cfg.j_min, cfg.N);
        break;
    case SegFamily::hybrid: {
        const std::uint32_t lt = cfg.L_trans ? cfg.L_trans : L / 2;
        fams.primary = build_family(FamilyKind::directional, L, cfg.B, cfg.j_min, cfg.N);
        fams.curv = build_family(FamilyKind::curvelet, lt, cfg.B, cfg.j_min);
        fams.hybrid = true;
        break;
    }
    }
    return fams;
}

// Shrinking by zero leaves every coefficient alone, so the analysis and
// synthesis cancel; skipping the round trip keeps that identity exact even
// for inputs that are not band-limited.
SphericalImage denoise(const SphericalImage& f, double lambda, const Families& fams) {
    if (lambda == 0.0) return f;
    if (fams.hybrid)
        return threshold_roundtrip_hybrid(f, lambda, fams.curv, fams.primary);
    return threshold_roundtrip(f, lambda, fams.primary);
}

void clamp01(SphericalImage& f) {
    for (double& v : f.values) v = std::clamp(v, 0.0, 1.0);
}

bool clamp01_reporting(SphericalImage& f) {
    bool touched = false;
    for (double& v : f.values) {
        if (v < 0.0 || v > 1.0) {
            v = std::clamp(v, 0.0, 1.0);
            touched = true;
        }
    }
    return touched;
}

void check_finite(const SphericalImage& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) throw invalid_input("image has non-finite samples");
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

} // namespace

SphericalImage wssa_preprocess(const SphericalImage& f, const WssaConfig& cfg) {
    validate_config(cfg, f.grid.L);
    check_finite(f);
    const Families fams = make_families(cfg, f.grid.L);
    SphericalImage g = f;
    clamp01(g);
    g = denoise(g, cfg.lambda_bar, fams);
    clamp01(g);
    return g;
}

PixelSet init_boundary_set(const SphericalImage& f, double epsilon, bool one_norm) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw invalid_parameter("epsilon must be finite and positive");
    const SphericalImage g = one_norm ? gradient_one_norm(f) : gradient_magnitude(f);
    PixelSet lambda;
    for (std::size_t i = 0; i < g.values.size(); ++i)
        if (g.values[i] > epsilon) lambda.push_back(i);
    return lambda;
}

Range compute_range(const SphericalImage& f, const PixelSet& lambda) {
    if (lambda.empty()) throw invalid_input("uncertain set is empty");
    for (std::size_t k : lambda)
        if (k >= f.values.size()) throw invalid_input("uncertain set index out of range");

    double sum = 0.0;
    for (std::size_t k : lambda) sum += f.values[k];
    const double mu = sum / static_cast<double>(lambda.size());

    double sum_lo = 0.0, sum_hi = 0.0;
    std::size_t n_lo = 0, n_hi = 0;
    for (std::size_t k : lambda) {
        const double v = f.values[k];
        if (v <= mu) {
            sum_lo += v;
            ++n_lo;
        }
        if (v >= mu) {
            sum_hi += v;
            ++n_hi;
        }
    }

    Range r;
    r.mu = mu;
    r.mu_minus = n_lo ? sum_lo / static_cast<double>(n_lo) : mu;
    r.mu_plus = n_hi ? sum_hi / static_cast<double>(n_hi) : mu;
    r.a = std::max(0.5 * (mu + r.mu_minus), 0.0);
    r.b = std::min(0.5 * (mu + r.mu_plus), 1.0);
    return r;
}

SphericalImage threshold_three_parts(const SphericalImage& f, const Range& r,
                                     const PixelSet& lambda) {
    if (!(r.a <= r.b)) throw invalid_parameter("range bounds are inverted");

    // Stretch bounds: extreme uncertain-set values that fall inside [a, b].
    double m = std::numeric_limits<double>::infinity();
    double M = -std::numeric_limits<double>::infinity();
    for (std::size_t k : lambda) {
        if (k >= f.values.size()) throw invalid_input("uncertain set index out of range");
        const double v = f.values[k];
        if (v >= r.a && v <= r.b) {
            m = std::min(m, v);
            M = std::max(M, v);
        }
    }
    const bool degenerate = !(m < M);

    SphericalImage out = f;
    for (double& v : out.values) {
        if (v <= r.a)
            v = 0.0;
        else if (v >= r.b)
            v = 1.0;
        else if (degenerate)
            v = (v < r.mu) ? 0.0 : 1.0;
        else
            v = std::clamp((v - m) / (M - m), 0.0, 1.0);
    }
    return out;
}

PixelSet update_uncertain_set(const SphericalImage& f_half) {
    PixelSet next;
    for (std::size_t i = 0; i < f_half.values.size(); ++i) {
        const double v = f_half.values[i];
        if (v > 0.0 && v < 1.0) next.push_back(i);
    }
    return next;
}

SphericalImage wavelet_iterate(const SphericalImage& f_half, const PixelSet& lambda_next,
                               const WssaConfig& cfg) {
    validate_config(cfg, f_half.grid.L);
    const Families fams = make_families(cfg, f_half.grid.L);
    const SphericalImage g = denoise(f_half, cfg.lambda, fams);
    SphericalImage out = f_half;
    for (std::size_t k : lambda_next) {
        if (k >= out.values.size()) throw invalid_input("uncertain set index out of range");
        out.values[k] = std::clamp(g.values[k], 0.0, 1.0);
    }
    return out;
}

BinaryMask final_threshold(const SphericalImage& f_half, const PixelSet& lambda_next) {
    if (lambda_next.empty()) throw invalid_input("uncertain set is empty");
    double sum = 0.0;
    for (std::size_t k : lambda_next) {
        if (k >= f_half.values.size())
            throw invalid_input("uncertain set index out of range");
        sum += f_half.values[k];
    }
    const double mu = sum / static_cast<double>(lambda_next.size());
    BinaryMask mask(f_half.grid);
    for (std::size_t i = 0; i < f_half.values.size(); ++i)
        mask.labels[i] = f_half.values[i] >= mu ? 1 : 0;
    return mask;
}

SegReport run_wssa(const SphericalImage& f, const WssaConfig& cfg) {
    validate_config(cfg, f.grid.L);
    check_finite(f);
    const double t0 = now_seconds();

    SegReport rep;
    rep.mask = BinaryMask(f.grid);

    SphericalImage work = f;
    rep.input_clamped = clamp01_reporting(work);

    const Families fams = make_families(cfg, f.grid.L);
    work = denoise(work, cfg.lambda_bar, fams);
    clamp01(work);

    PixelSet lambda = init_boundary_set(work, cfg.epsilon, cfg.one_norm_gradient);
    if (lambda.empty()) {
        // Nothing crosses the gradient level: threshold at the global mean.
        double sum = 0.0;
        for (double v : work.values) sum += v;
        const double mu = sum / static_cast<double>(work.values.size());
        for (std::size_t i = 0; i < work.values.size(); ++i)
            rep.mask.labels[i] = work.values[i] >= mu ? 1 : 0;
        rep.status = SegStatus::degenerate_flat;
        rep.converged = true;
        rep.lambda_sizes.push_back(0);
        rep.total_seconds = now_seconds() - t0;
        return rep;
    }

    for (int i = 0;; ++i) {
        const double it0 = now_seconds();
        rep.lambda_sizes.push_back(lambda.size());

        const Range r = compute_range(work, lambda);
        const SphericalImage half = threshold_three_parts(work, r, lambda);
        PixelSet next = update_uncertain_set(half);

        IterationRecord rec;
        rec.iter = i;
        rec.unclassified = lambda.size();
        rec.a = r.a;
        rec.b = r.b;

        if (next.empty()) {
            rep.mask = to_mask(half);
            rep.status = SegStatus::converged;
            rep.lambda_sizes.push_back(0);
        } else if (cfg.final_threshold_trigger > 0 &&
                   next.size() <= cfg.final_threshold_trigger) {
            rep.mask = final_threshold(half, next);
            rep.status = SegStatus::converged_trigger;
            rep.lambda_sizes.push_back(next.size());
        } else if (i + 1 >= cfg.max_iter) {
            rep.mask = final_threshold(half, next);
            rep.status = SegStatus::max_iterations;
            rep.lambda_sizes.push_back(next.size());
        } else {
            const SphericalImage g = denoise(half, cfg.lambda, fams);
            work = half;
            for (std::size_t k : next) work.values[k] = std::clamp(g.values[k], 0.0, 1.0);
            lambda = std::move(next);
            rec.ms = (now_seconds() - it0) * 1e3;
            rep.history.push_back(rec);
            continue;
        }

        rec.ms = (now_seconds() - it0) * 1e3;
        rep.history.push_back(rec);
        break;
    }

    rep.converged = rep.status == SegStatus::converged ||
                    rep.status == SegStatus::converged_trigger;
    rep.total_seconds = now_seconds() - t0;
    return rep;
}

void write_history_csv(const SegReport& report, std::ostream& os) {
    os << "iter,unclassified,a,b,ms\n";
    char buf[96];
    for (const auto& rec : report.history) {
        std::snprintf(buf, sizeof(buf), "%d,%zu,%.17g,%.17g,%.3f", rec.iter,
                      rec.unclassified, rec.a, rec.b, rec.ms);
        os << buf << "\n";
    }
}

} // namespace sphseg
