#pragma once

// Symplectic factories for the standard Gaussian unitaries, embedding into
// larger systems, composition, and application to states.

#include "covsim/types.hpp"

#include <numbers>

namespace covsim {

/// Rotation R(phi) = [[cos, sin], [-sin, cos]], the phase-shift symplectic.
inline Matrix rotation_matrix(double phi) {
    Matrix r(2, 2);
    r << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
    return r;
}

/// Squeezing direction matrix S_theta = [[cos, sin], [sin, -cos]].
inline Matrix squeeze_direction(double theta) {
    Matrix s(2, 2);
    s << std::cos(theta), std::sin(theta), std::sin(theta), -std::cos(theta);
    return s;
}

/// Displacement by a complex amplitude per mode:
/// F = identity, d = sqrt(2) (Re a1, Im a1, ..., Re an, Im an).
inline SymplecticOp displacement(const Eigen::VectorXcd& alphas) {
    const int n = static_cast<int>(alphas.size());
    if (n < 1) {
        throw std::invalid_argument("displacement: need at least one amplitude");
    }
    Vector d(2 * n);
    for (int k = 0; k < n; ++k) {
        d(2 * k) = std::numbers::sqrt2 * alphas(k).real();
        d(2 * k + 1) = std::numbers::sqrt2 * alphas(k).imag();
    }
    return {Matrix::Identity(2 * n, 2 * n), std::move(d)};
}

/// Single-mode phase shift by phi.
inline SymplecticOp phase_shift(double phi) { return {rotation_matrix(phi), Vector::Zero(2)}; }

/// Two-mode beam splitter with transmittivity eta in [0, 1].
inline SymplecticOp beamsplitter(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("beamsplitter: transmittivity must lie in [0, 1], got " +
                                    std::to_string(eta));
    }
    const double t = std::sqrt(eta);
    const double s = std::sqrt(1.0 - eta);
    Matrix f = Matrix::Zero(4, 4);
    f.block<2, 2>(0, 0) = t * Matrix::Identity(2, 2);
    f.block<2, 2>(0, 2) = s * Matrix::Identity(2, 2);
    f.block<2, 2>(2, 0) = -s * Matrix::Identity(2, 2);
    f.block<2, 2>(2, 2) = t * Matrix::Identity(2, 2);
    return {std::move(f), Vector::Zero(4)};
}

namespace detail {
// Canonical parameterization: negative squeezing folds into theta + pi.
inline void normalize_squeeze(double& r, double& theta) {
    if (r < 0.0) {
        r = -r;
        theta += std::numbers::pi;
    }
}
}  // namespace detail

/// Single-mode squeezing, F = cosh(r) I - sinh(r) S_theta.
inline SymplecticOp squeeze(double r, double theta) {
    detail::normalize_squeeze(r, theta);
    Matrix f = std::cosh(r) * Matrix::Identity(2, 2) - std::sinh(r) * squeeze_direction(theta);
    return {std::move(f), Vector::Zero(2)};
}

/// Two-mode squeezing, diagonal blocks cosh(r) I, off-diagonal -sinh(r) S_theta.
inline SymplecticOp two_mode_squeeze(double r, double theta) {
    detail::normalize_squeeze(r, theta);
    const Matrix s = squeeze_direction(theta);
    Matrix f = Matrix::Zero(4, 4);
    f.block<2, 2>(0, 0) = std::cosh(r) * Matrix::Identity(2, 2);
    f.block<2, 2>(2, 2) = std::cosh(r) * Matrix::Identity(2, 2);
    f.block<2, 2>(0, 2) = -std::sinh(r) * s;
    f.block<2, 2>(2, 0) = -std::sinh(r) * s;
    return {std::move(f), Vector::Zero(4)};
}

/// Embed a k-mode operation into an n-mode system, acting on the selected
/// modes and as the identity elsewhere: F = P^-1 blockdiag(F_op, I) P.
inline SymplecticOp embed(const SymplecticOp& op, const ModeSelector& where) {
    validate(where);
    const int k = op.n_modes();
    const int n = where.total_modes;
    if (static_cast<int>(where.indices.size()) != k) {
        throw std::invalid_argument("embed: operation acts on " + std::to_string(k) +
                                    " modes but selector names " +
                                    std::to_string(where.indices.size()));
    }
    const Matrix perm = mode_permutation(where);
    Matrix block = Matrix::Identity(2 * n, 2 * n);
    block.topLeftCorner(2 * k, 2 * k) = op.F;
    Vector d = Vector::Zero(2 * n);
    d.head(2 * k) = op.d;
    return {perm.transpose() * block * perm, perm.transpose() * d};
}

/// Composition: apply `first`, then `second`.
inline SymplecticOp compose(const SymplecticOp& second, const SymplecticOp& first) {
    if (second.F.rows() != first.F.rows()) {
        throw std::invalid_argument("compose: operations act on different mode counts");
    }
    return {second.F * first.F, second.F * first.d + second.d};
}

/// Inverse via F^-1 = Omega^T F^T Omega.
inline SymplecticOp inverse(const SymplecticOp& op) {
    const Matrix w = omega(op.n_modes());
    Matrix finv = w.transpose() * op.F.transpose() * w;
    Vector d = -(finv * op.d);
    return {std::move(finv), std::move(d)};
}

/// sigma -> F sigma F^T (re-symmetrized), mean -> F mean + d.
inline GaussianState apply(const GaussianState& state, const SymplecticOp& op) {
    if (op.F.rows() != state.cov().rows()) {
        throw std::invalid_argument("apply: operation is " + std::to_string(op.F.rows() / 2) +
                                    "-mode but state has " + std::to_string(state.n_modes()) +
                                    " modes");
    }
    if (!validate_symplectic(op)) {
        throw std::invalid_argument("apply: matrix F is not symplectic");
    }
    Matrix cov = op.F * state.cov() * op.F.transpose();
    cov = ((cov + cov.transpose()) / 2.0).eval();
    Vector mean = op.F * state.mean() + op.d;
    return {std::move(mean), std::move(cov)};
}

}  // namespace covsim
