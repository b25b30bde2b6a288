#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"
#include "operator.hpp"

namespace nhqc {

// Sum of the Dyson terms 0..order for the ket propagator on [t0, t]:
//   D_0 = 1,  D_n(s) = -i \int_{t0}^{s} H(s') D_{n-1}(s') ds'.
// Each nested integral is a cumulative trapezoid on quadrature_steps
// intervals, so the result never touches the ODE integrator.
inline ComplexMatrix dyson_truncation(const TimeDependentOperator& h, double t0, double t, int order,
                                      int quadrature_steps = 1024) {
    if (order < 0) throw Error("dyson_truncation: order must be >= 0");
    if (quadrature_steps < 1) throw Error("dyson_truncation: quadrature_steps must be >= 1");
    const Eigen::Index k = h.dim();
    if (order == 0 || t == t0) return identity(k);

    const auto n = static_cast<std::size_t>(quadrature_steps);
    const double step = (t - t0) / static_cast<double>(quadrature_steps);
    std::vector<ComplexMatrix> samples(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double s = (j == n) ? t : t0 + step * static_cast<double>(j);
        samples[j] = h.value_at(s, j == n ? Side::left : Side::right);
        if (!all_finite(samples[j]))
            throw NonFiniteError("dyson_truncation: Hamiltonian sample at t = " + std::to_string(s) + " is not finite");
    }

    std::vector<ComplexMatrix> previous(n + 1, identity(k));
    std::vector<ComplexMatrix> current(n + 1, ComplexMatrix::Zero(k, k));
    ComplexMatrix total = identity(k);
    for (int term = 1; term <= order; ++term) {
        current[0].setZero();
        for (std::size_t j = 0; j < n; ++j) {
            current[j + 1] = current[j] - I * (0.5 * step) * (samples[j] * previous[j] + samples[j + 1] * previous[j + 1]);
        }
        total += current[n];
        std::swap(previous, current);
    }
    return total;
}

}  // namespace nhqc
