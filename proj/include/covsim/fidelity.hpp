#pragma once

// Fidelity F = Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) between Gaussian states
// (non-squared convention).
//
// The general displacement-free factor is
//   F0^4 = det(2 (sqrt(I + (V Omega)^-2 / 4) + I) V) / det(sigma1 + sigma2),
//   V = Omega^T (sigma1 + sigma2)^-1 (Omega/4 + sigma2 Omega sigma1).
// The matrix function is evaluated spectrally: det f(M) = prod f(lambda_i)
// over the (complex) eigenvalues of M = V Omega, with the principal square
// root branch. An equivalent route through W = -2 V i Omega is provided as
// an independent cross-check path.

#include "covsim/phasespace.hpp"
#include "covsim/types.hpp"

#include <complex>
#include <limits>

namespace covsim {

inline constexpr double kFidelitySlack = 1e-9;  // allowed excursion above 1 before erroring

enum class FidelityFormula { general, pure_state, single_mode };

inline const char* to_string(FidelityFormula f) {
    switch (f) {
        case FidelityFormula::general: return "general";
        case FidelityFormula::pure_state: return "pure";
        case FidelityFormula::single_mode: return "single-mode";
    }
    return "unknown";
}

namespace detail {

inline void require_same_modes(const GaussianState& s1, const GaussianState& s2,
                               const char* who) {
    if (s1.n_modes() != s2.n_modes()) {
        throw std::invalid_argument(std::string(who) + ": states have " +
                                    std::to_string(s1.n_modes()) + " and " +
                                    std::to_string(s2.n_modes()) + " modes");
    }
    if (s1.n_modes() < 1) {
        throw std::invalid_argument(std::string(who) + ": empty states");
    }
}

/// exp(-1/4 dr^T (sigma1 + sigma2)^-1 dr)
inline double displacement_factor(const GaussianState& s1, const GaussianState& s2) {
    const Matrix sum = s1.cov() + s2.cov();
    const auto llt = cholesky(sum, "fidelity");
    const Vector delta = s2.mean() - s1.mean();
    return std::exp(-0.25 * delta.dot(llt.solve(delta)));
}

inline double clamp_fidelity(double f, const char* who) {
    if (f > 1.0 + kFidelitySlack) {
        throw std::runtime_error(std::string(who) + ": value " + std::to_string(f) +
                                 " exceeds 1 beyond tolerance (unphysical input?)");
    }
    return std::min(f, 1.0);
}

inline Matrix fidelity_v_matrix(const GaussianState& s1, const GaussianState& s2) {
    const int n = s1.n_modes();
    const Matrix w = omega(n);
    const Matrix sum = s1.cov() + s2.cov();
    const auto llt = cholesky(sum, "fidelity");
    const Matrix rhs = 0.25 * w + s2.cov() * w * s1.cov();
    return w.transpose() * llt.solve(rhs);
}

/// Displacement-free factor F0 via the eigenvalues of M = V Omega.
///
/// Evaluated in extended precision throughout: near the pure-state boundary
/// an eigenvalue of I + (V Omega)^-2 / 4 vanishes, and taking its square
/// root turns eigenvalue round-off of size eps into an error of sqrt(eps).
inline double fidelity_f0_general(const GaussianState& s1, const GaussianState& s2) {
    using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const int n = s1.n_modes();
    const LongMatrix sig1 = s1.cov().cast<long double>();
    const LongMatrix sig2 = s2.cov().cast<long double>();
    const LongMatrix w = omega(n).cast<long double>();
    const LongMatrix sum = sig1 + sig2;
    Eigen::LLT<LongMatrix> llt(sum);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("fidelity: sigma1 + sigma2 is not positive definite");
    }
    const LongMatrix rhs = 0.25L * w + sig2 * w * sig1;
    const LongMatrix v = w.transpose() * llt.solve(rhs);
    const LongMatrix m = v * w;
    Eigen::EigenSolver<LongMatrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("fidelity: eigenvalue computation for V Omega failed");
    }
    std::complex<long double> det_term(1.0L, 0.0L);
    for (int i = 0; i < 2 * n; ++i) {
        const std::complex<long double> lambda = solver.eigenvalues()(i);
        if (std::abs(lambda) < 1e-12L) {
            throw std::runtime_error("fidelity: V Omega is singular (|eigenvalue| = " +
                                     std::to_string(static_cast<double>(std::abs(lambda))) +
                                     "), cannot evaluate the matrix square root");
        }
        std::complex<long double> g = 1.0L + 1.0L / (4.0L * lambda * lambda);
        // |g| below round-off scale means a pure direction; the square root
        // would amplify eigenvalue noise of size eps into sqrt(eps)
        if (std::abs(g) < 1e-12L) {
            g = 0.0L;
        }
        det_term *= std::sqrt(g) + 1.0L;
    }
    const long double f0_fourth = std::pow(2.0L, 2 * n) *
                                  (det_term * v.determinant()).real() / sum.determinant();
    if (f0_fourth < -1e-9L) {
        throw std::runtime_error("fidelity: negative determinant ratio " +
                                 std::to_string(static_cast<double>(f0_fourth)) +
                                 " (unphysical input?)");
    }
    return static_cast<double>(std::pow(std::max(f0_fourth, 0.0L), 0.25L));
}

/// Cross-check route through W = -2 V i Omega:
/// F0^4 = det((sqrt(I - W^-2) + I) W i Omega) / det(sigma1 + sigma2).
inline double fidelity_f0_w_route(const GaussianState& s1, const GaussianState& s2) {
    const int n = s1.n_modes();
    const Matrix v = fidelity_v_matrix(s1, s2);
    const std::complex<double> unit_im(0.0, 1.0);
    const ComplexMatrix w_mat =
        -2.0 * unit_im * (v * omega(n)).cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(w_mat, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("fidelity: eigenvalue computation for W failed");
    }
    std::complex<double> det_term(1.0, 0.0);
    for (int i = 0; i < 2 * n; ++i) {
        const std::complex<double> wi = solver.eigenvalues()(i);
        if (std::abs(wi) < 1e-12) {
            throw std::runtime_error("fidelity: W is singular");
        }
        det_term *= (std::sqrt(1.0 - 1.0 / (wi * wi)) + 1.0) * wi;
    }
    det_term *= std::pow(unit_im, 2 * n);  // det(i Omega) = i^{2n}
    const double det_sum = (s1.cov() + s2.cov()).determinant();
    const double f0_fourth = det_term.real() / det_sum;
    if (f0_fourth < -1e-9) {
        throw std::runtime_error("fidelity: negative determinant ratio " +
                                 std::to_string(f0_fourth) + " (unphysical input?)");
    }
    return std::pow(std::max(f0_fourth, 0.0), 0.25);
}

}  // namespace detail

/// General-formula fidelity, valid for arbitrary physical Gaussian states.
inline double fidelity_general(const GaussianState& s1, const GaussianState& s2) {
    detail::require_same_modes(s1, s2, "fidelity_general");
    const double f = detail::fidelity_f0_general(s1, s2) * detail::displacement_factor(s1, s2);
    return detail::clamp_fidelity(f, "fidelity_general");
}

/// Same quantity through the W-form; used to cross-validate the default route.
inline double fidelity_general_w(const GaussianState& s1, const GaussianState& s2) {
    detail::require_same_modes(s1, s2, "fidelity_general_w");
    const double f = detail::fidelity_f0_w_route(s1, s2) * detail::displacement_factor(s1, s2);
    return detail::clamp_fidelity(f, "fidelity_general_w");
}

/// Closed form when at least one state is pure: F = det(Sigma)^-1/4 * displacement factor.
inline double fidelity_pure(const GaussianState& s1, const GaussianState& s2) {
    detail::require_same_modes(s1, s2, "fidelity_pure");
    if (!is_pure(s1) && !is_pure(s2)) {
        throw std::invalid_argument("fidelity_pure: neither state is pure");
    }
    const Matrix sum = s1.cov() + s2.cov();
    const auto llt = detail::cholesky(sum, "fidelity_pure");
    const double det_sum = detail::sqrt_det(llt) * detail::sqrt_det(llt);
    const double f = std::pow(det_sum, -0.25) * detail::displacement_factor(s1, s2);
    return detail::clamp_fidelity(f, "fidelity_pure");
}

/// Single-mode closed form, Gamma = sqrt(Delta + Lambda) - sqrt(Lambda).
inline double fidelity_single_mode(const GaussianState& s1, const GaussianState& s2) {
    detail::require_same_modes(s1, s2, "fidelity_single_mode");
    if (s1.n_modes() != 1) {
        throw std::invalid_argument("fidelity_single_mode: states must have exactly one mode");
    }
    const double delta = (s1.cov() + s2.cov()).determinant();
    // Lambda >= 0 for physical states; round-off can push it barely negative.
    const double lambda =
        std::max(4.0 * (s1.cov().determinant() - 0.25) * (s2.cov().determinant() - 0.25), 0.0);
    const double gamma = std::sqrt(delta + lambda) - std::sqrt(lambda);
    if (!(gamma > 0.0)) {
        throw std::runtime_error("fidelity_single_mode: non-positive Gamma");
    }
    const double f = detail::displacement_factor(s1, s2) / std::sqrt(gamma);
    return detail::clamp_fidelity(f, "fidelity_single_mode");
}

struct FidelityResult {
    double value = 0.0;
    FidelityFormula formula = FidelityFormula::general;
};

/// Fidelity with automatic routing: single-mode closed form when n = 1, the
/// pure-state form when either purity >= 1 - kPurityTol, else the general
/// matrix-function formula. Both inputs must be physical.
inline FidelityResult fidelity_detailed(const GaussianState& s1, const GaussianState& s2) {
    detail::require_same_modes(s1, s2, "fidelity");
    for (const auto* s : {&s1, &s2}) {
        const PhysicalityReport report = validate_physical(*s);
        if (!report.physical) {
            throw std::invalid_argument(
                "fidelity: unphysical input state (min eigenvalue of sigma + i Omega/2 = " +
                std::to_string(report.min_eigenvalue) + ")");
        }
    }
    if (s1.n_modes() == 1) {
        return {fidelity_single_mode(s1, s2), FidelityFormula::single_mode};
    }
    if (is_pure(s1) || is_pure(s2)) {
        return {fidelity_pure(s1, s2), FidelityFormula::pure_state};
    }
    return {fidelity_general(s1, s2), FidelityFormula::general};
}

inline double fidelity(const GaussianState& s1, const GaussianState& s2) {
    return fidelity_detailed(s1, s2).value;
}

/// Diagnostic bundle of the quantities entering the fidelity formulas.
/// lambda and gamma are only defined for single-mode pairs (NaN otherwise).
struct FidelityIntermediates {
    Matrix V;
    ComplexMatrix W;
    double delta = 0.0;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double f0 = 0.0;
};

inline FidelityIntermediates fidelity_intermediates(const GaussianState& s1,
                                                    const GaussianState& s2) {
    detail::require_same_modes(s1, s2, "fidelity_intermediates");
    const int n = s1.n_modes();
    FidelityIntermediates out;
    out.V = detail::fidelity_v_matrix(s1, s2);
    out.W = -2.0 * std::complex<double>(0.0, 1.0) *
            (out.V * omega(n)).cast<std::complex<double>>();
    out.delta = (s1.cov() + s2.cov()).determinant();
    out.f0 = detail::fidelity_f0_general(s1, s2);
    if (n == 1) {
        out.lambda = std::max(
            4.0 * (s1.cov().determinant() - 0.25) * (s2.cov().determinant() - 0.25), 0.0);
        out.gamma = std::sqrt(out.delta + out.lambda) - std::sqrt(out.lambda);
    }
    return out;
}

}  // namespace covsim
