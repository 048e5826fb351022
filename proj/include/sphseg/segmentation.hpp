#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sphseg/grid.hpp"

namespace sphseg {

enum class SegFamily { axisymmetric, directional, hybrid };

enum class SegStatus {
    converged,          // the uncertain set emptied on its own
    converged_trigger,  // the final threshold fired at the configured size
    max_iterations,     // iteration budget exhausted, final threshold applied
    degenerate_flat,    // no boundary pixels at all; global mean threshold
};

const char* to_string(SegStatus s);

struct WssaConfig {
    SegFamily family = SegFamily::axisymmetric;
    double epsilon = 0.04;    // gradient level defining the initial uncertain set
    double lambda_bar = 0.0;  // preprocessing shrink threshold
    double lambda = 0.0;      // per-iteration shrink threshold
    double B = 2.0;
    int j_min = 2;
    std::uint32_t N = 5;        // azimuthal order count (directional / hybrid)
    std::uint32_t L_trans = 0;  // hybrid transition band limit; 0 means L / 2
    int max_iter = 50;
    // When positive, the final threshold fires as soon as the uncertain set
    // shrinks to at most this many pixels.
    std::size_t final_threshold_trigger = 0;
    bool one_norm_gradient = false;
};

struct IterationRecord {
    int iter = 0;
    std::size_t unclassified = 0;  // |Lambda| entering this iteration
    double a = 0.0;
    double b = 0.0;
    double ms = 0.0;  // wall time of the iteration
};

struct SegReport {
    BinaryMask mask;
    std::vector<IterationRecord> history;
    // |Lambda| per iteration; ends with the size that stopped the loop (0
    // when the set emptied).
    std::vector<std::size_t> lambda_sizes;
    SegStatus status = SegStatus::converged;
    bool converged = false;
    bool input_clamped = false;  // input had samples outside [0, 1]
    double total_seconds = 0.0;
};

// Classified/unclassified split thresholds for one iteration. a and b are
// clamped to [0, 1]; mu carries the plain mean over the uncertain set for
// the degenerate stretch.
struct Range {
    double a = 0.0;
    double b = 1.0;
    double mu = 0.0;
    double mu_minus = 0.0;
    double mu_plus = 0.0;
};

// Sorted sample indices of the uncertain set.
using PixelSet = std::vector<std::size_t>;

// Stage operators of the iteration, exposed so each can be exercised alone
// and so the two-stage mode can be replayed step by step.

// Clamp to [0, 1], shrink wavelet coefficients by lambda_bar, clamp again.
SphericalImage wssa_preprocess(const SphericalImage& f, const WssaConfig& cfg);

// Pixels whose gradient exceeds epsilon.
PixelSet init_boundary_set(const SphericalImage& f, double epsilon,
                           bool one_norm = false);

// mu / mu_minus / mu_plus means over the uncertain set (values tied with mu
// count on both sides), then a = max((mu + mu_minus)/2, 0) and
// b = min((mu + mu_plus)/2, 1).
Range compute_range(const SphericalImage& f, const PixelSet& lambda);

// Pointwise: <= a goes to 0, >= b goes to 1, the middle is stretched
// linearly between the extreme uncertain-set values inside [a, b]. A
// degenerate stretch splits at mu instead.
SphericalImage threshold_three_parts(const SphericalImage& f, const Range& r,
                                     const PixelSet& lambda);

// Pixels still strictly between 0 and 1.
PixelSet update_uncertain_set(const SphericalImage& f_half);

// Shrink-denoise f_half with cfg.lambda and splice the result (clamped)
// into the uncertain pixels only; classified pixels pass through.
SphericalImage wavelet_iterate(const SphericalImage& f_half, const PixelSet& lambda_next,
                               const WssaConfig& cfg);

// Mean-split of the remaining uncertain pixels; classified pixels keep
// their 0/1 values.
BinaryMask final_threshold(const SphericalImage& f_half, const PixelSet& lambda_next);

SegReport run_wssa(const SphericalImage& f, const WssaConfig& cfg);

// Header "iter,unclassified,a,b,ms", one row per executed iteration. The ms
// column is wall time and varies run to run; everything else is
// deterministic for a fixed input.
void write_history_csv(const SegReport& report, std::ostream& os);

} // namespace sphseg
