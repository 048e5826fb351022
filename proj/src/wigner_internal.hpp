#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace sphseg::detail {

// Seed value d^{l0}_{mn}(beta) at l0 = max(|m|,|n|), evaluated in log space
// so that large |m|+-|n| combinations neither overflow the binomial factor
// nor lose the underflow-to-zero behaviour of the half-angle powers.
double wigner_seed(std::int32_t m, std::int32_t n, double beta);

// Fills out(i, l - l0) = d^l_{mn}(betas[i]) for l in [l0, L) via the
// three-term recursion over l, vectorized over the beta nodes. out is
// resized; it has zero columns when L <= l0.
void wigner_profile(std::int32_t m, std::int32_t n, const std::vector<double>& betas,
                    std::uint32_t L, Eigen::MatrixXd& out);

} // namespace sphseg::detail
