#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "operator.hpp"
#include "time_grid.hpp"

namespace nhqc {

// Sampled solution of a Schrodinger-type equation. The norm is free to drift
// under non-Hermitian generators.
struct StateTrajectory {
    TimeGrid grid;
    std::vector<StateVector> states;
    std::vector<std::vector<double>> populations;  // [level][grid index]
    std::vector<double> total_norm;                // sum of populations, i.e. ||psi||^2

    std::size_t size() const { return states.size(); }
    Eigen::Index dim() const { return states.empty() ? 0 : states.front().size(); }
    double norm(std::size_t i) const { return std::sqrt(total_norm.at(i)); }

    static StateTrajectory from_states(TimeGrid grid, std::vector<StateVector> states) {
        StateTrajectory tr{std::move(grid), std::move(states), {}, {}};
        const Eigen::Index k = tr.dim();
        tr.populations.assign(static_cast<std::size_t>(k), std::vector<double>(tr.states.size()));
        tr.total_norm.assign(tr.states.size(), 0.0);
        for (std::size_t i = 0; i < tr.states.size(); ++i) {
            double sum = 0.0;
            for (Eigen::Index n = 0; n < k; ++n) {
                const double p = std::norm(tr.states[i](n));
                tr.populations[static_cast<std::size_t>(n)][i] = p;
                sum += p;
            }
            tr.total_norm[i] = sum;
        }
        return tr;
    }
};

namespace detail {

inline ComplexMatrix checked_sample(const TimeDependentOperator& h, double t, Side side) {
    ComplexMatrix m = h.value_at(t, side);
    if (!all_finite(m)) throw NonFiniteError("Hamiltonian sample at t = " + std::to_string(t) + " is not finite");
    return m;
}

// Classical RK4 for i dY/dt = H(t) Y on every grid step. Samples at the end of
// a step take the left limit so a stage never sees its successor's generator.
inline std::vector<ComplexMatrix> integrate(const TimeDependentOperator& h, const ComplexMatrix& y0,
                                            const TimeGrid& grid) {
    if (h.dim() != y0.rows())
        throw DimensionError("dimension mismatch: operator is " + std::to_string(h.dim()) + ", state is " +
                             std::to_string(y0.rows()));
    require_finite(y0, "initial state");
    std::vector<ComplexMatrix> out;
    out.reserve(grid.size());
    out.push_back(y0);
    ComplexMatrix y = y0;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const double ta = grid.at(i);
        const double tb = grid.at(i + 1);
        const double dt = tb - ta;
        const double tm = ta + 0.5 * dt;
        const ComplexMatrix ha = checked_sample(h, ta, Side::right);
        const ComplexMatrix hm = checked_sample(h, tm, Side::right);
        const ComplexMatrix hb = checked_sample(h, tb, Side::left);
        const ComplexMatrix k1 = -I * (ha * y);
        const ComplexMatrix k2 = -I * (hm * (y + 0.5 * dt * k1));
        const ComplexMatrix k3 = -I * (hm * (y + 0.5 * dt * k2));
        const ComplexMatrix k4 = -I * (hb * (y + dt * k3));
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push_back(y);
    }
    return out;
}

inline StateTrajectory evolve(const TimeDependentOperator& h, const StateVector& psi0, const TimeGrid& grid) {
    auto mats = integrate(h, psi0, grid);
    std::vector<StateVector> states;
    states.reserve(mats.size());
    for (auto& m : mats) states.emplace_back(m.col(0));
    return StateTrajectory::from_states(grid, std::move(states));
}

}  // namespace detail

// Solves i d|psi>/dt = H(t)|psi> on the grid.
inline StateTrajectory evolve_ket(const TimeDependentOperator& h, const StateVector& psi0, const TimeGrid& grid) {
    return detail::evolve(h, psi0, grid);
}

// Solves i d|phi>/dt = H(t)^dagger |phi>.
inline StateTrajectory evolve_bra(const TimeDependentOperator& h, const StateVector& phi0, const TimeGrid& grid) {
    return detail::evolve(h.adjoint(), phi0, grid);
}

// U_0(t) at every grid point, U_0(t0) = 1.
inline std::vector<ComplexMatrix> propagator_ket(const TimeDependentOperator& h, const TimeGrid& grid) {
    return detail::integrate(h, identity(h.dim()), grid);
}

// V_0(t), generated by H(t)^dagger.
inline std::vector<ComplexMatrix> propagator_bra(const TimeDependentOperator& h, const TimeGrid& grid) {
    return detail::integrate(h.adjoint(), identity(h.dim()), grid);
}

// Largest population change at shared grid points when dt is halved.
inline double population_change_under_refinement(const StateTrajectory& coarse, const StateTrajectory& fine) {
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
        for (std::size_t n = 0; n < coarse.populations.size(); ++n)
            worst = std::max(worst, std::abs(coarse.populations[n][i] - fine.populations[n][2 * i]));
    return worst;
}

struct CheckedEvolution {
    StateTrajectory trajectory;
    double refinement_change;
};

// evolve_ket plus the dt/2 self-check; throws ConvergenceError above tolerance.
inline CheckedEvolution evolve_ket_checked(const TimeDependentOperator& h, const StateVector& psi0,
                                           const TimeGrid& grid, double tolerance = 1e-8) {
    StateTrajectory coarse = evolve_ket(h, psi0, grid);
    const StateTrajectory fine = evolve_ket(h, psi0, grid.refined());
    const double change = population_change_under_refinement(coarse, fine);
    if (!(change <= tolerance))
        throw ConvergenceError("step size too large: populations moved by " + std::to_string(change) +
                               " when dt was halved (tolerance " + std::to_string(tolerance) + ")");
    return {std::move(coarse), change};
}

}  // namespace nhqc
