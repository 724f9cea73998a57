#pragma once

// Phase-space evaluation: Wigner function, characteristic function, Gaussian
// integrals, and the overlap Tr[rho1 rho2].

#include "covsim/types.hpp"

#include <complex>

namespace covsim {

using PhasePoint = Vector;  // (x1, p1, ..., xn, pn)

namespace detail {
// Cholesky factorization of a covariance-like matrix, with a domain error on failure.
inline Eigen::LLT<Matrix> cholesky(const Matrix& m, const char* who) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument(std::string(who) + ": matrix is not positive definite");
    }
    return llt;
}

inline double sqrt_det(const Eigen::LLT<Matrix>& llt) {
    return llt.matrixL().toDenseMatrix().diagonal().prod();
}
}  // namespace detail

/// W(r) = exp(-1/2 (r - mean)^T sigma^-1 (r - mean)) / ((2 pi)^n sqrt(det sigma)).
/// Solves with sigma instead of forming its inverse.
inline double wigner(const GaussianState& state, const PhasePoint& point) {
    const int n = state.n_modes();
    if (point.size() != 2 * n) {
        throw std::invalid_argument("wigner: point has length " + std::to_string(point.size()) +
                                    " but state has " + std::to_string(n) + " modes");
    }
    const auto llt = detail::cholesky(state.cov(), "wigner");
    const Vector delta = point - state.mean();
    const double quad = delta.dot(llt.solve(delta));
    const double norm = std::pow(2.0 * std::numbers::pi, n) * detail::sqrt_det(llt);
    return std::exp(-0.5 * quad) / norm;
}

/// chi(s) = Tr[rho D(s)] = exp(i mean^T Omega s - 1/2 s^T Omega^T sigma Omega s).
inline std::complex<double> characteristic(const GaussianState& state, const PhasePoint& s) {
    const int n = state.n_modes();
    if (s.size() != 2 * n) {
        throw std::invalid_argument("characteristic: argument has length " +
                                    std::to_string(s.size()) + " but state has " +
                                    std::to_string(n) + " modes");
    }
    const Matrix w = omega(n);
    const Vector ws = w * s;
    const double phase = state.mean().dot(ws);
    const double decay = 0.5 * ws.dot(state.cov() * ws);
    return std::exp(std::complex<double>(-decay, phase));
}

/// Integral of exp(-a x^2 + b x + c) over the real line: sqrt(pi/a) exp(b^2/(4a) + c).
inline double gaussian_integral_1d(double a, double b, double c) {
    if (!(a > 0.0)) {
        throw std::invalid_argument("gaussian_integral_1d: need a > 0, got " + std::to_string(a));
    }
    return std::sqrt(std::numbers::pi / a) * std::exp(b * b / (4.0 * a) + c);
}

/// Integral of exp(-1/2 r^T A r + b^T r) over R^n:
/// sqrt((2 pi)^n / det A) exp(1/2 b^T A^-1 b).
inline double gaussian_integral_nd(const Matrix& a, const Vector& b) {
    if (a.rows() != a.cols() || a.rows() != b.size()) {
        throw std::invalid_argument("gaussian_integral_nd: inconsistent dimensions");
    }
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw std::invalid_argument("gaussian_integral_nd: matrix must be symmetric");
    }
    const auto llt = detail::cholesky(a, "gaussian_integral_nd");
    const double n = static_cast<double>(a.rows());
    return std::sqrt(std::pow(2.0 * std::numbers::pi, n)) / detail::sqrt_det(llt) *
           std::exp(0.5 * b.dot(llt.solve(b)));
}

/// Tr[rho1 rho2] = exp(-1/2 dr^T Sigma^-1 dr) / sqrt(det Sigma), Sigma = sigma1 + sigma2.
inline double overlap(const GaussianState& s1, const GaussianState& s2) {
    if (s1.n_modes() != s2.n_modes()) {
        throw std::invalid_argument("overlap: states have different mode counts");
    }
    const Matrix sum = s1.cov() + s2.cov();
    const auto llt = detail::cholesky(sum, "overlap");
    const Vector delta = s1.mean() - s2.mean();
    return std::exp(-0.5 * delta.dot(llt.solve(delta))) / detail::sqrt_det(llt);
}

}  // namespace covsim
