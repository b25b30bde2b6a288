#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

#include "errors.hpp"

namespace nhqc {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};
inline constexpr double pi = 3.14159265358979323846;

inline ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

inline ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
    if (!all_finite(m)) throw NonFiniteError(what + " contains NaN or Inf");
}

// Largest entry magnitude.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_residual(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

// exp(A) by scaling and squaring around a degree-6 Taylor core. Intended for
// the K <= 3 constant-generator oracles; A is scaled until ||A||_1 <= 1/64.
inline ComplexMatrix expm(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("expm: matrix is not square");
    require_finite(a, "expm argument");
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    double scaled = norm1;
    while (scaled > 1.0 / 64.0) {
        scaled *= 0.5;
        ++squarings;
    }
    const ComplexMatrix x = a / std::ldexp(1.0, squarings);
    ComplexMatrix result = identity(a.rows());
    ComplexMatrix term = identity(a.rows());
    for (int k = 1; k <= 6; ++k) {
        term = term * x / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// Basis vector |n> in dimension dim.
inline StateVector basis_state(Eigen::Index dim, Eigen::Index n) {
    StateVector v = StateVector::Zero(dim);
    v(n) = 1.0;
    return v;
}

}  // namespace nhqc
