#pragma once

// Shared test utilities: independent oracles (multivariate-normal
// conditioning, phase-space grid integration, Fourier transform of the
// characteristic function) and random-state generators. The oracles here
// deliberately avoid the library's permutation/block machinery so they can
// arbitrate its sign and ordering conventions.

#include "covsim/covsim.hpp"

#include <complex>
#include <random>

namespace testutil {

using covsim::GaussianState;
using covsim::Matrix;
using covsim::SymplecticOp;
using covsim::Vector;

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Conditioning oracle: treat (mean, cov) as a classical 2n-variate normal and
// condition on the scalar functional q = cos(phi) x_mode + sin(phi) p_mode.
// Built from a selection matrix and the rank-one Schur complement only.

struct ConditionedGaussian {
    Vector mean;
    Matrix cov;
};

inline ConditionedGaussian condition_oracle(const Vector& mean, const Matrix& cov, int mode,
                                            double phi, double outcome) {
    const int dim = static_cast<int>(mean.size());
    const int n = dim / 2;
    Vector dir = Vector::Zero(dim);
    dir(2 * mode) = std::cos(phi);
    dir(2 * mode + 1) = std::sin(phi);
    Matrix keep = Matrix::Zero(dim - 2, dim);
    int row = 0;
    for (int m = 0; m < n; ++m) {
        if (m == mode) continue;
        keep(row, 2 * m) = 1.0;
        keep(row + 1, 2 * m + 1) = 1.0;
        row += 2;
    }
    const double qvar = dir.dot(cov * dir);
    const double qmean = dir.dot(mean);
    const Vector cross = keep * (cov * dir);
    ConditionedGaussian out;
    out.cov = keep * cov * keep.transpose() - (cross * cross.transpose()) / qvar;
    out.mean = keep * mean + cross * ((outcome - qmean) / qvar);
    return out;
}

// ---------------------------------------------------------------------------
// Random inputs. All generators take the engine by reference so individual
// tests stay reproducible under a fixed seed.

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// A random n-mode symplectic op composed from factory gates.
inline SymplecticOp random_symplectic(std::mt19937_64& rng, int n, int depth = 0) {
    using namespace covsim;
    if (depth <= 0) depth = 2 * n + 2;
    SymplecticOp op{Matrix::Identity(2 * n, 2 * n), Vector::Zero(2 * n)};
    for (int step = 0; step < depth; ++step) {
        const int kind = uniform_int(rng, 0, n >= 2 ? 3 : 2);
        SymplecticOp layer{Matrix::Identity(2, 2), Vector::Zero(2)};
        ModeSelector where;
        where.total_modes = n;
        switch (kind) {
            case 0:
                layer = phase_shift(uniform(rng, 0.0, 2.0 * std::numbers::pi));
                where.indices = {uniform_int(rng, 0, n - 1)};
                break;
            case 1:
                layer = squeeze(uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
                where.indices = {uniform_int(rng, 0, n - 1)};
                break;
            case 2: {
                Eigen::VectorXcd alpha(1);
                alpha(0) = std::complex<double>(uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5));
                layer = displacement(alpha);
                where.indices = {uniform_int(rng, 0, n - 1)};
                break;
            }
            default: {
                const int a = uniform_int(rng, 0, n - 1);
                int b = uniform_int(rng, 0, n - 2);
                if (b >= a) ++b;
                layer = beamsplitter(uniform(rng, 0.1, 0.9));
                where.indices = {a, b};
                break;
            }
        }
        op = compose(embed(layer, where), op);
    }
    return op;
}

/// Random physical n-mode state: thermal (or vacuum) inputs pushed through a
/// random gate network. Mixed inputs keep a physicality margin.
inline GaussianState random_state(std::mt19937_64& rng, int n, bool mixed) {
    using namespace covsim;
    GaussianState state = mixed ? thermal(uniform(rng, 0.05, 1.5)) : vacuum(1);
    for (int m = 1; m < n; ++m) {
        state = tensor(state, mixed ? thermal(uniform(rng, 0.05, 1.5)) : vacuum(1));
    }
    return apply(state, random_symplectic(rng, n));
}

// ---------------------------------------------------------------------------
// Grid integration (single mode): rectangle rule, 401 points per axis,
// extent of +-8 marginal standard deviations around the mean.

inline constexpr int kGridPoints = 401;

struct Axis {
    double lo = 0.0;
    double hi = 0.0;
    double step(int points) const { return (hi - lo) / (points - 1); }
};

inline Axis wigner_axis(const GaussianState& s, int coord) {
    const double sd = std::sqrt(s.cov()(coord, coord));
    return {s.mean()(coord) - 8.0 * sd, s.mean()(coord) + 8.0 * sd};
}

template <typename F>
double grid_integral_2d(const Axis& ax, const Axis& ay, int points, F&& f) {
    const double hx = ax.step(points);
    const double hy = ay.step(points);
    double sum = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = ax.lo + hx * i;
        for (int j = 0; j < points; ++j) {
            sum += f(x, ay.lo + hy * j);
        }
    }
    return sum * hx * hy;
}

inline double wigner_grid_integral(const GaussianState& s, int points = kGridPoints) {
    covsim::PhasePoint pt(2);
    return grid_integral_2d(wigner_axis(s, 0), wigner_axis(s, 1), points, [&](double x, double p) {
        pt << x, p;
        return covsim::wigner(s, pt);
    });
}

inline double wigner_product_grid_integral(const GaussianState& a, const GaussianState& b,
                                           int points = kGridPoints) {
    const Axis ax{std::min(wigner_axis(a, 0).lo, wigner_axis(b, 0).lo),
                  std::max(wigner_axis(a, 0).hi, wigner_axis(b, 0).hi)};
    const Axis ap{std::min(wigner_axis(a, 1).lo, wigner_axis(b, 1).lo),
                  std::max(wigner_axis(a, 1).hi, wigner_axis(b, 1).hi)};
    covsim::PhasePoint pt(2);
    return grid_integral_2d(ax, ap, points, [&](double x, double p) {
        pt << x, p;
        return covsim::wigner(a, pt) * covsim::wigner(b, pt);
    });
}

// ---------------------------------------------------------------------------
// Fourier oracle: W(r) = (2 pi)^-2 integral of exp(-i r^T Omega s) chi(s) ds
// for a single mode, evaluated by rectangle rule on a precomputed chi grid.

class CharacteristicFourier {
  public:
    explicit CharacteristicFourier(const GaussianState& s, int points = kGridPoints)
        : points_(points), s1_(points), s2_(points), chi_(points, points) {
        const Matrix w = covsim::omega(1);
        const Matrix precision = w.transpose() * s.cov() * w;
        const Matrix spread = precision.inverse();
        const double l1 = 8.0 * std::sqrt(spread(0, 0));
        const double l2 = 8.0 * std::sqrt(spread(1, 1));
        covsim::PhasePoint pt(2);
        for (int i = 0; i < points; ++i) {
            s1_(i) = -l1 + 2.0 * l1 * i / (points - 1);
        }
        for (int j = 0; j < points; ++j) {
            s2_(j) = -l2 + 2.0 * l2 * j / (points - 1);
        }
        for (int i = 0; i < points; ++i) {
            for (int j = 0; j < points; ++j) {
                pt << s1_(i), s2_(j);
                chi_(i, j) = covsim::characteristic(s, pt);
            }
        }
        cell_ = (s1_(1) - s1_(0)) * (s2_(1) - s2_(0));
    }

    /// r^T Omega s = x s2 - p s1, so the kernel factorizes per axis.
    double wigner_at(double x, double p) const {
        Eigen::VectorXcd left(points_), right(points_);
        for (int i = 0; i < points_; ++i) {
            left(i) = std::exp(std::complex<double>(0.0, p * s1_(i)));
        }
        for (int j = 0; j < points_; ++j) {
            right(j) = std::exp(std::complex<double>(0.0, -x * s2_(j)));
        }
        const std::complex<double> sum = left.transpose() * (chi_ * right);
        return (sum * cell_).real() / std::pow(2.0 * std::numbers::pi, 2);
    }

  private:
    int points_;
    Vector s1_, s2_;
    Eigen::MatrixXcd chi_;
    double cell_ = 0.0;
};

}  // namespace testutil
