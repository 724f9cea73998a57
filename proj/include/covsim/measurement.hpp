#pragma once

// Partial trace and homodyne detection. Conditioning a Gaussian state on a
// quadrature outcome is classical conditioning of the multivariate normal
// (mean, sigma) on the linear functional q(phi) = cos(phi) x + sin(phi) p of
// the measured mode; the conditional covariance does not depend on the
// outcome.

#include "covsim/rng.hpp"
#include "covsim/types.hpp"

#include <cstdint>
#include <utility>

namespace covsim {

/// Reduce to the selected modes (in selector order): permute them to the
/// front and keep the leading block of sigma and mean.
inline GaussianState partial_trace(const GaussianState& state, const ModeSelector& keep) {
    validate(keep);
    if (keep.total_modes != state.n_modes()) {
        throw std::invalid_argument("partial_trace: selector is over " +
                                    std::to_string(keep.total_modes) + " modes but state has " +
                                    std::to_string(state.n_modes()));
    }
    const int k = static_cast<int>(keep.indices.size());
    const Matrix perm = mode_permutation(keep);
    const Matrix cov = perm * state.cov() * perm.transpose();
    const Vector mean = perm * state.mean();
    return {mean.head(2 * k), cov.topLeftCorner(2 * k, 2 * k)};
}

/// Block partition of a state around one measured mode, with the measured
/// mode permuted to the last position:
///   sigma = (A  C; C^T  B),  mean = (a; b).
struct MeasurementBlocks {
    Matrix A;   // kept modes, 2(n-1) x 2(n-1)
    Matrix B;   // measured mode, 2 x 2
    Matrix C;   // correlations, 2(n-1) x 2
    Vector a;   // kept-mode displacement
    Vector b;   // measured-mode displacement
    Matrix pi;  // x-quadrature projector diag(1, 0)
};

inline MeasurementBlocks measurement_blocks(const GaussianState& state, int mode) {
    const int n = state.n_modes();
    if (n < 2) {
        throw std::invalid_argument("measurement_blocks: need at least 2 modes, state has " +
                                    std::to_string(n));
    }
    if (mode < 0 || mode >= n) {
        throw std::invalid_argument("measurement_blocks: mode " + std::to_string(mode) +
                                    " out of range [0, " + std::to_string(n) + ")");
    }
    std::vector<int> order;
    for (int m = 0; m < n; ++m) {
        if (m != mode) order.push_back(m);
    }
    order.push_back(mode);
    const Matrix perm = mode_permutation({order, n});
    const Matrix cov = perm * state.cov() * perm.transpose();
    const Vector mean = perm * state.mean();
    const int ka = 2 * (n - 1);
    MeasurementBlocks blocks;
    blocks.A = cov.topLeftCorner(ka, ka);
    blocks.B = cov.bottomRightCorner(2, 2);
    blocks.C = cov.topRightCorner(ka, 2);
    blocks.a = mean.head(ka);
    blocks.b = mean.tail(2);
    blocks.pi = Matrix::Zero(2, 2);
    blocks.pi(0, 0) = 1.0;
    return blocks;
}

struct QuadratureDistribution {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and variance of the rotated quadrature q(phi) = cos(phi) x + sin(phi) p
/// on the selected mode. phi = 0 reads the x marginal, phi = pi/2 the p one.
inline QuadratureDistribution homodyne_distribution(const GaussianState& state, int mode,
                                                    double phi) {
    const int n = state.n_modes();
    if (mode < 0 || mode >= n) {
        throw std::invalid_argument("homodyne_distribution: mode " + std::to_string(mode) +
                                    " out of range [0, " + std::to_string(n) + ")");
    }
    Eigen::Vector2d w(std::cos(phi), std::sin(phi));
    const Eigen::Vector2d m = state.mean().segment<2>(2 * mode);
    const Eigen::Matrix2d block = state.cov().block<2, 2>(2 * mode, 2 * mode);
    return {w.dot(m), w.dot(block * w)};
}

/// Conditional state of the remaining n-1 modes after observing
/// q(phi) = outcome on the measured mode. The measured mode is removed;
/// the others keep their relative order.
inline GaussianState homodyne_condition(const GaussianState& state, int mode, double phi,
                                        double outcome) {
    if (state.n_modes() < 2) {
        throw std::invalid_argument("homodyne_condition: need at least 2 modes");
    }
    const MeasurementBlocks blocks = measurement_blocks(state, mode);
    const Eigen::Vector2d w(std::cos(phi), std::sin(phi));
    const double var = w.dot(blocks.B * w);
    if (var < kDegenerateVarTol) {
        throw std::runtime_error("homodyne_condition: measured quadrature variance " +
                                 std::to_string(var) + " is degenerate");
    }
    const Vector cw = blocks.C * w;
    Matrix cov = blocks.A - (cw * cw.transpose()) / var;
    Vector mean = blocks.a + cw * ((outcome - w.dot(blocks.b)) / var);
    return {std::move(mean), std::move(cov)};
}

struct HomodyneResult {
    double outcome = 0.0;
    GaussianState conditional;  // n-1 modes; empty for a single-mode state
    double dist_mean = 0.0;
    double dist_var = 0.0;
};

/// Draw an outcome from the analytic marginal with a deterministic seeded
/// generator and condition on it. Same (state, mode, phi, seed) gives the
/// same result bit for bit.
inline HomodyneResult sample_homodyne(const GaussianState& state, int mode, double phi,
                                      std::uint64_t seed) {
    const QuadratureDistribution dist = homodyne_distribution(state, mode, phi);
    if (dist.variance < kDegenerateVarTol) {
        throw std::runtime_error("sample_homodyne: measured quadrature variance " +
                                 std::to_string(dist.variance) + " is degenerate");
    }
    NormalSampler sampler(seed);
    const double u = sampler.normal(dist.mean, std::sqrt(dist.variance));
    GaussianState conditional = state.n_modes() == 1 ? GaussianState::empty()
                                                     : homodyne_condition(state, mode, phi, u);
    return {u, std::move(conditional), dist.mean, dist.variance};
}

}  // namespace covsim
