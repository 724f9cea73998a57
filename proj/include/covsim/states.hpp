#pragma once

// Factories for the standard Gaussian states and the tensor-product combinator.

#include "covsim/types.hpp"
#include "covsim/unitaries.hpp"

#include <complex>

namespace covsim {

/// n-mode vacuum: sigma = I/2, zero mean.
inline GaussianState vacuum(int n_modes) {
    if (n_modes < 1) {
        throw std::invalid_argument("vacuum: n_modes must be >= 1");
    }
    return {Vector::Zero(2 * n_modes), Matrix::Identity(2 * n_modes, 2 * n_modes) / 2.0};
}

/// Coherent state |alpha>: displaced vacuum, mean = sqrt(2) (Re, Im).
inline GaussianState coherent(std::complex<double> alpha) {
    Vector mean(2);
    mean << std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag();
    return {std::move(mean), Matrix::Identity(2, 2) / 2.0};
}

/// Thermal state with mean photon number nbar: sigma = (nbar + 1/2) I.
inline GaussianState thermal(double nbar) {
    if (nbar < 0.0) {
        throw std::invalid_argument("thermal: mean photon number must be >= 0, got " +
                                    std::to_string(nbar));
    }
    return {Vector::Zero(2), (nbar + 0.5) * Matrix::Identity(2, 2)};
}

/// Mean photon number of a thermal state at inverse temperature beta and
/// mode frequency w (k_B = 1): nbar = 1 / (e^{beta w} - 1).
inline double thermal_mean_photons(double beta, double frequency) {
    if (beta <= 0.0 || frequency <= 0.0) {
        throw std::invalid_argument("thermal_mean_photons: beta and frequency must be > 0");
    }
    return 1.0 / std::expm1(beta * frequency);
}

/// Squeezed vacuum: sigma = cosh(2r)/2 I - sinh(2r)/2 S_theta, zero mean.
inline GaussianState squeezed_vacuum(double r, double theta) {
    detail::normalize_squeeze(r, theta);
    Matrix cov = 0.5 * std::cosh(2.0 * r) * Matrix::Identity(2, 2) -
                 0.5 * std::sinh(2.0 * r) * squeeze_direction(theta);
    return {Vector::Zero(2), std::move(cov)};
}

/// Two-mode squeezed vacuum, diagonal blocks cosh(2r)/2 I and off-diagonal
/// blocks -sinh(2r)/2 S_theta.
inline GaussianState two_mode_squeezed_vacuum(double r, double theta) {
    detail::normalize_squeeze(r, theta);
    const Matrix s = squeeze_direction(theta);
    Matrix cov = Matrix::Zero(4, 4);
    cov.block<2, 2>(0, 0) = 0.5 * std::cosh(2.0 * r) * Matrix::Identity(2, 2);
    cov.block<2, 2>(2, 2) = 0.5 * std::cosh(2.0 * r) * Matrix::Identity(2, 2);
    cov.block<2, 2>(0, 2) = -0.5 * std::sinh(2.0 * r) * s;
    cov.block<2, 2>(2, 0) = -0.5 * std::sinh(2.0 * r) * s;
    return {Vector::Zero(4), std::move(cov)};
}

/// Product state: covariance is the direct sum, means concatenate.
inline GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto da = a.cov().rows();
    const auto db = b.cov().rows();
    Matrix cov = Matrix::Zero(da + db, da + db);
    cov.topLeftCorner(da, da) = a.cov();
    cov.bottomRightCorner(db, db) = b.cov();
    Vector mean(da + db);
    mean.head(da) = a.mean();
    mean.tail(db) = b.mean();
    return {std::move(mean), std::move(cov)};
}

}  // namespace covsim
