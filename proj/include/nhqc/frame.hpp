#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "linalg.hpp"
#include "operator.hpp"
#include "scalar_function.hpp"
#include "time_grid.hpp"

namespace nhqc {

// Time-dependent orthonormal basis {|mu_1(t)>, ..., |mu_K(t)>}, stored as the
// columns of a K x K matrix W(t): column k-1 holds |mu_k>. Ordering matters:
// lower triangularity of H_rot is defined in this order, the ket passage is
// the last column and the bra passage the first.
class AncillaryFrame {
public:
    using MatrixFn = std::function<ComplexMatrix(double)>;

    AncillaryFrame(Eigen::Index dim, MatrixFn basis, MatrixFn derivative)
        : dim_(dim), basis_(std::move(basis)), derivative_(std::move(derivative)), analytic_(true) {
        if (dim < 1) throw DimensionError("AncillaryFrame: dim must be >= 1");
    }

    // User-supplied frame without derivatives: central differences with
    // h = 1e-6 * timescale.
    static AncillaryFrame from_basis(Eigen::Index dim, MatrixFn basis, double timescale = 1.0) {
        const double h = 1e-6 * timescale;
        MatrixFn deriv = [basis, h](double t) { return ComplexMatrix((basis(t + h) - basis(t - h)) / (2.0 * h)); };
        AncillaryFrame f(dim, std::move(basis), std::move(deriv));
        f.analytic_ = false;
        return f;
    }

    Eigen::Index dim() const { return dim_; }
    bool analytic_derivative() const { return analytic_; }

    ComplexMatrix basis_at(double t) const {
        ComplexMatrix w = basis_(t);
        if (w.rows() != dim_ || w.cols() != dim_) throw DimensionError("AncillaryFrame: basis has wrong shape");
        return w;
    }

    ComplexMatrix derivative_at(double t) const {
        ComplexMatrix w = derivative_(t);
        if (w.rows() != dim_ || w.cols() != dim_) throw DimensionError("AncillaryFrame: derivative has wrong shape");
        return w;
    }

    // |mu_k(t)> with k counted from 1.
    StateVector mu(Eigen::Index k, double t) const { return basis_at(t).col(k - 1); }
    StateVector mu_dot(Eigen::Index k, double t) const { return derivative_at(t).col(k - 1); }

private:
    Eigen::Index dim_;
    MatrixFn basis_;
    MatrixFn derivative_;
    bool analytic_;
};

struct TwoLevelFrameParams {
    ScalarFunction theta;
    ScalarFunction alpha;
};

struct ThreeLevelFrameParams {
    ScalarFunction theta;
    ScalarFunction alpha;
    ScalarFunction phi_mix;
    ScalarFunction beta;
};

namespace detail {

// Columns (mu_1, mu_2) of the two-level frame and their partial derivatives.
struct TwoLevelColumns {
    StateVector mu1, mu2, dmu1, dmu2;
};

inline TwoLevelColumns two_level_columns(double theta, double alpha, double theta_dot, double alpha_dot) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx ep = std::exp(I * (alpha / 2.0));
    const cplx em = std::exp(-I * (alpha / 2.0));
    TwoLevelColumns out;
    out.mu1 = StateVector(2);
    out.mu2 = StateVector(2);
    out.dmu1 = StateVector(2);
    out.dmu2 = StateVector(2);
    out.mu1 << c * ep, -s * em;
    out.mu2 << s * ep, c * em;
    const cplx half_i_ad = I * (alpha_dot / 2.0);
    out.dmu1 << (-s * theta_dot + half_i_ad * c) * ep, (-c * theta_dot + half_i_ad * s) * em;
    out.dmu2 << (c * theta_dot + half_i_ad * s) * ep, (-s * theta_dot - half_i_ad * c) * em;
    return out;
}

}  // namespace detail

// |mu_1> = cos(theta) e^{i alpha/2}|0> - sin(theta) e^{-i alpha/2}|1>
// |mu_2> = sin(theta) e^{i alpha/2}|0> + cos(theta) e^{-i alpha/2}|1>
inline AncillaryFrame two_level_frame(const TwoLevelFrameParams& p) {
    auto basis = [p](double t) {
        const auto c = detail::two_level_columns(p.theta(t), p.alpha(t), 0.0, 0.0);
        ComplexMatrix w(2, 2);
        w.col(0) = c.mu1;
        w.col(1) = c.mu2;
        return w;
    };
    auto deriv = [p](double t) {
        const auto c = detail::two_level_columns(p.theta(t), p.alpha(t), p.theta.rate(t), p.alpha.rate(t));
        ComplexMatrix w(2, 2);
        w.col(0) = c.dmu1;
        w.col(1) = c.dmu2;
        return w;
    };
    return AncillaryFrame(2, basis, deriv);
}

// Level order is (|0>, |1>, |e>). With the bright state
// |b> = sin(theta) e^{i alpha/2}|0> + cos(theta) e^{-i alpha/2}|1>:
//   |mu_1> = cos(theta) e^{i alpha/2}|0> - sin(theta) e^{-i alpha/2}|1>
//   |mu_2> = cos(phi) e^{i beta/2}|b> - sin(phi) e^{-i beta/2}|e>
//   |mu_3> = sin(phi) e^{i beta/2}|b> + cos(phi) e^{-i beta/2}|e>
inline AncillaryFrame three_level_frame(const ThreeLevelFrameParams& p) {
    auto build = [p](double t, bool want_derivative) {
        const double th = p.theta(t), al = p.alpha(t), ph = p.phi_mix(t), be = p.beta(t);
        const double thd = p.theta.rate(t), ald = p.alpha.rate(t);
        const double phd = p.phi_mix.rate(t), bed = p.beta.rate(t);
        const auto two = detail::two_level_columns(th, al, thd, ald);
        StateVector mu1 = StateVector::Zero(3), b = StateVector::Zero(3), db = StateVector::Zero(3);
        mu1.head(2) = two.mu1;
        b.head(2) = two.mu2;
        const StateVector e = basis_state(3, 2);
        const double cp = std::cos(ph), sp = std::sin(ph);
        const cplx bp = std::exp(I * (be / 2.0)), bm = std::exp(-I * (be / 2.0));
        ComplexMatrix w(3, 3);
        if (!want_derivative) {
            w.col(0) = mu1;
            w.col(1) = cp * bp * b - sp * bm * e;
            w.col(2) = sp * bp * b + cp * bm * e;
            return w;
        }
        StateVector dmu1 = StateVector::Zero(3);
        dmu1.head(2) = two.dmu1;
        db.head(2) = two.dmu2;
        const cplx hib = I * (bed / 2.0);
        w.col(0) = dmu1;
        w.col(1) = phd * (-sp * bp * b - cp * bm * e) + hib * (cp * bp * b + sp * bm * e) + cp * bp * db;
        w.col(2) = phd * (cp * bp * b - sp * bm * e) + hib * (sp * bp * b - cp * bm * e) + sp * bp * db;
        return w;
    };
    return AncillaryFrame(
        3, [build](double t) { return build(t, false); }, [build](double t) { return build(t, true); });
}

// Frame rotation V(t) = sum_k |mu_k(t)><mu_k(t0)|, with dV/dt from the frame derivative.
inline TimeDependentOperator frame_unitary(const AncillaryFrame& f, double t0) {
    const ComplexMatrix w0_dag = f.basis_at(t0).adjoint();
    return TimeDependentOperator(
        f.dim(), [f, w0_dag](double t) { return ComplexMatrix(f.basis_at(t) * w0_dag); },
        [f, w0_dag](double t) { return ComplexMatrix(f.derivative_at(t) * w0_dag); });
}

inline ComplexMatrix gram_matrix(const AncillaryFrame& f, double t) {
    const ComplexMatrix w = f.basis_at(t);
    return w.adjoint() * w;
}

inline double orthonormality_residual(const AncillaryFrame& f, double t) {
    return max_abs(gram_matrix(f, t) - identity(f.dim()));
}

// A_km = i <mu_k|d mu_m/dt>.
inline ComplexMatrix gauge_potential(const AncillaryFrame& f, double t) {
    return I * (f.basis_at(t).adjoint() * f.derivative_at(t));
}

// The gauge potential as an operator on the system: sum_km A_km |mu_k><mu_m|.
inline ComplexMatrix gauge_operator(const AncillaryFrame& f, double t) {
    const ComplexMatrix w = f.basis_at(t);
    return w * gauge_potential(f, t) * w.adjoint();
}

// max_k || A |mu_k> - i d|mu_k>/dt ||.
inline double constraint_residual(const AncillaryFrame& f, double t) {
    const ComplexMatrix a = gauge_operator(f, t);
    const ComplexMatrix w = f.basis_at(t);
    const ComplexMatrix wd = f.derivative_at(t);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < f.dim(); ++k) worst = std::max(worst, (a * w.col(k) - I * wd.col(k)).norm());
    return worst;
}

// Dynamical term: matrix of <mu_k|H|mu_m>.
inline ComplexMatrix dynamical_term(const ComplexMatrix& h, const AncillaryFrame& f, double t) {
    const ComplexMatrix w = f.basis_at(t);
    return w.adjoint() * h * w;
}

// Coefficients [H_km - A_km] of H_rot in the frozen basis |mu_k(t0)>.
inline ComplexMatrix rotated_hamiltonian(const ComplexMatrix& h, const AncillaryFrame& f, double t) {
    if (h.rows() != f.dim() || h.cols() != f.dim()) throw DimensionError("rotated_hamiltonian: dimension mismatch");
    return dynamical_term(h, f, t) - gauge_potential(f, t);
}

inline ComplexMatrix rotated_hamiltonian(const TimeDependentOperator& h, const AncillaryFrame& f, double t,
                                         Side side = Side::right) {
    if (h.dim() != f.dim()) throw DimensionError("rotated_hamiltonian: dimension mismatch");
    return rotated_hamiltonian(h.value_at(t, side), f, t);
}

// Same coefficients through the frame unitary: W0^dag [V^dag H V - i V^dag dV/dt] W0.
inline ComplexMatrix rotated_hamiltonian_via_unitary(const TimeDependentOperator& h, const AncillaryFrame& f,
                                                     double t0, double t) {
    const TimeDependentOperator v = frame_unitary(f, t0);
    const ComplexMatrix vt = v.value_at(t);
    const ComplexMatrix h_rot = vt.adjoint() * h.value_at(t) * vt - I * (vt.adjoint() * v.derivative_at(t));
    const ComplexMatrix w0 = f.basis_at(t0);
    return w0.adjoint() * h_rot * w0;
}

inline double upper_triangle_max(const ComplexMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k)
        for (Eigen::Index j = k + 1; j < m.cols(); ++j) worst = std::max(worst, std::abs(m(k, j)));
    return worst;
}

namespace detail {
inline Side side_for_index(const TimeGrid& grid, std::size_t i) {
    return (i + 1 == grid.size()) ? Side::left : Side::right;
}
}  // namespace detail

// max over the grid of the upper-triangular entries of H_rot. The grid must
// lie within one smooth stage of both H and the frame.
inline double triangularization_residual(const TimeDependentOperator& h, const AncillaryFrame& f,
                                         const TimeGrid& grid) {
    if (h.dim() != f.dim()) throw DimensionError("triangularization_residual: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        worst = std::max(worst, upper_triangle_max(rotated_hamiltonian(h, f, t, detail::side_for_index(grid, i))));
    }
    return worst;
}

// max over grid and k of || dPi_k/dt + i [H, Pi_k] ||_max, Pi_k = |mu_k><mu_k|.
// Requires Hermitian H (within 1e-12) at every grid point.
inline double von_neumann_residual(const TimeDependentOperator& h, const AncillaryFrame& f, const TimeGrid& grid) {
    if (h.dim() != f.dim()) throw DimensionError("von_neumann_residual: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        const ComplexMatrix hm = h.value_at(t, detail::side_for_index(grid, i));
        const double herm = hermiticity_residual(hm);
        if (herm > 1e-12)
            throw HermiticityError("von_neumann_residual: H is not Hermitian at t = " + std::to_string(t) +
                                   " (residual " + std::to_string(herm) + ")");
        const ComplexMatrix w = f.basis_at(t);
        const ComplexMatrix wd = f.derivative_at(t);
        for (Eigen::Index k = 0; k < f.dim(); ++k) {
            const ComplexMatrix pi = w.col(k) * w.col(k).adjoint();
            const ComplexMatrix pi_dot = wd.col(k) * w.col(k).adjoint() + w.col(k) * wd.col(k).adjoint();
            worst = std::max(worst, max_abs(pi_dot + I * (hm * pi - pi * hm)));
        }
    }
    return worst;
}

}  // namespace nhqc
