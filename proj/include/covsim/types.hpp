#pragma once

// Core types and conventions.
//
// A Gaussian state of n bosonic modes is represented by its displacement
// vector (length 2n) and covariance matrix (2n x 2n) in the interleaved
// quadrature ordering (x1, p1, ..., xn, pn), with hbar = 1 and vacuum
// variance 1/2. Mode indices are 0-based everywhere.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace covsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

// Tolerances shared across the library.
inline constexpr double kSymmetryTol = 1e-10;       // accepted covariance asymmetry
inline constexpr double kPhysicalityTol = 1e-9;     // eigenvalue bound on sigma + (i/2) Omega
inline constexpr double kSymplecticTol = 1e-12;     // entrywise bound on F Omega F^T - Omega
inline constexpr double kPurityTol = 1e-9;          // pure iff purity >= 1 - kPurityTol
inline constexpr double kDegenerateVarTol = 1e-12;  // smallest measurable quadrature variance

/// Symplectic form for n modes: block diagonal with n copies of [[0,1],[-1,0]].
inline Matrix omega(int n_modes) {
    if (n_modes < 1) {
        throw std::invalid_argument("omega: n_modes must be >= 1, got " + std::to_string(n_modes));
    }
    Matrix w = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        w(2 * k, 2 * k + 1) = 1.0;
        w(2 * k + 1, 2 * k) = -1.0;
    }
    return w;
}

/// Gaussian state: displacement vector and covariance matrix.
///
/// The constructor symmetrizes the covariance matrix; asymmetry beyond
/// kSymmetryTol is rejected. Physicality is *not* enforced here — see
/// validate_physical — so intermediate or deliberately unphysical matrices
/// can be represented and diagnosed.
class GaussianState {
  public:
    GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
        if (cov_.rows() != cov_.cols()) {
            throw std::invalid_argument("GaussianState: covariance matrix must be square");
        }
        if (cov_.rows() % 2 != 0) {
            throw std::invalid_argument("GaussianState: covariance dimension must be even");
        }
        if (mean_.size() != cov_.rows()) {
            throw std::invalid_argument(
                "GaussianState: mean has length " + std::to_string(mean_.size()) +
                " but covariance is " + std::to_string(cov_.rows()) + "x" +
                std::to_string(cov_.cols()));
        }
        if (!mean_.allFinite() || !cov_.allFinite()) {
            throw std::invalid_argument("GaussianState: non-finite entries");
        }
        if (cov_.size() > 0) {
            const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
            if (asym > kSymmetryTol) {
                throw std::invalid_argument("GaussianState: covariance asymmetry " +
                                            std::to_string(asym) + " exceeds tolerance");
            }
            cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
        }
        n_modes_ = static_cast<int>(cov_.rows()) / 2;
    }

    /// State of zero modes, the result of measuring out the last mode.
    static GaussianState empty() { return GaussianState(Vector(0), Matrix(0, 0)); }

    [[nodiscard]] int n_modes() const { return n_modes_; }
    [[nodiscard]] const Vector& mean() const { return mean_; }
    [[nodiscard]] const Matrix& cov() const { return cov_; }

  private:
    Vector mean_;
    Matrix cov_;
    int n_modes_ = 0;
};

/// Gaussian unitary as a symplectic matrix F plus displacement d:
/// sigma -> F sigma F^T, mean -> F mean + d.
struct SymplecticOp {
    Matrix F;
    Vector d;

    [[nodiscard]] int n_modes() const { return static_cast<int>(F.rows()) / 2; }
};

/// An ordered choice of distinct modes out of a larger system.
struct ModeSelector {
    std::vector<int> indices;
    int total_modes = 0;
};

inline void validate(const ModeSelector& sel) {
    if (sel.total_modes < 1) {
        throw std::invalid_argument("ModeSelector: total_modes must be >= 1");
    }
    if (sel.indices.empty()) {
        throw std::invalid_argument("ModeSelector: empty mode selection");
    }
    std::vector<int> seen;
    for (int idx : sel.indices) {
        if (idx < 0 || idx >= sel.total_modes) {
            throw std::invalid_argument("ModeSelector: mode index " + std::to_string(idx) +
                                        " out of range [0, " +
                                        std::to_string(sel.total_modes) + ")");
        }
        if (std::find(seen.begin(), seen.end(), idx) != seen.end()) {
            throw std::invalid_argument("ModeSelector: duplicate mode index " +
                                        std::to_string(idx));
        }
        seen.push_back(idx);
    }
}

/// Permutation matrix P with P (x1,p1,...,xn,pn)^T listing the selected
/// modes first (in selector order) followed by the rest in ascending order.
inline Matrix mode_permutation(const ModeSelector& sel) {
    validate(sel);
    const int n = sel.total_modes;
    std::vector<int> order = sel.indices;
    for (int m = 0; m < n; ++m) {
        if (std::find(sel.indices.begin(), sel.indices.end(), m) == sel.indices.end()) {
            order.push_back(m);
        }
    }
    Matrix perm = Matrix::Zero(2 * n, 2 * n);
    for (int slot = 0; slot < n; ++slot) {
        perm(2 * slot, 2 * order[slot]) = 1.0;
        perm(2 * slot + 1, 2 * order[slot] + 1) = 1.0;
    }
    return perm;
}

struct PhysicalityReport {
    bool physical = false;
    double min_eigenvalue = 0.0;  // most negative eigenvalue of sigma + (i/2) Omega
};

/// Uncertainty-principle check: all eigenvalues of the Hermitian matrix
/// sigma + (i/2) Omega must be >= -kPhysicalityTol.
inline PhysicalityReport validate_physical(const GaussianState& state) {
    const int n = state.n_modes();
    if (n == 0) {
        return {true, 0.0};
    }
    ComplexMatrix h = state.cov().cast<std::complex<double>>();
    h += std::complex<double>(0.0, 0.5) * omega(n).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("validate_physical: eigenvalue computation failed");
    }
    const double lo = solver.eigenvalues().minCoeff();
    return {lo >= -kPhysicalityTol, lo};
}

/// True iff max |(F Omega F^T - Omega)_ij| <= kSymplecticTol.
inline bool validate_symplectic(const SymplecticOp& op) {
    if (op.F.rows() != op.F.cols() || op.F.rows() % 2 != 0 || op.F.rows() == 0) {
        throw std::invalid_argument("validate_symplectic: F must be square with even dimension");
    }
    if (op.d.size() != op.F.rows()) {
        throw std::invalid_argument("validate_symplectic: d has length " +
                                    std::to_string(op.d.size()) + " but F is " +
                                    std::to_string(op.F.rows()) + "x" +
                                    std::to_string(op.F.cols()));
    }
    const Matrix w = omega(op.n_modes());
    const double dev = (op.F * w * op.F.transpose() - w).cwiseAbs().maxCoeff();
    return dev <= kSymplecticTol;
}

/// Tr[rho^2] = 1 / (2^n sqrt(det sigma)).
inline double purity(const GaussianState& state) {
    if (state.n_modes() == 0) {
        return 1.0;
    }
    Eigen::LLT<Matrix> llt(state.cov());
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("purity: covariance matrix is not positive definite");
    }
    // sqrt(det sigma) = prod of Cholesky diagonal entries
    const double sqrt_det = llt.matrixL().toDenseMatrix().diagonal().prod();
    return 1.0 / (std::pow(2.0, state.n_modes()) * sqrt_det);
}

inline bool is_pure(const GaussianState& state) { return purity(state) >= 1.0 - kPurityTol; }

}  // namespace covsim
