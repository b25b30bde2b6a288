#pragma once

#include <cmath>
#include <functional>

#include "linalg.hpp"
#include "operator.hpp"
#include "time_grid.hpp"

namespace nhqc {

using Envelope = std::function<double(double)>;

inline Envelope constant_envelope(double c) {
    return [c](double) { return c; };
}

// Drive and gain/loss settings of the two-level system. Level order (|0>, |1>).
struct TwoLevelControls {
    Envelope omega;
    Envelope delta;
    double varphi = 0.0;
    Envelope gamma0;
    Envelope gamma1;
    double xi0 = 0.0;
    double xi1 = 0.0;
};

// Level order (|0>, |1>, |e>). varphi0/varphi1 follow alpha(t), hence envelopes.
struct ThreeLevelControls {
    Envelope omega0;
    Envelope omega1;
    Envelope omega_a;
    Envelope omega;
    Envelope delta0;
    Envelope delta1;
    Envelope delta_e;
    Envelope varphi0;
    Envelope varphi1;
    double varphi_a = 0.0;
    double varphi = 0.0;
    Envelope gamma0;
    Envelope gamma1;
    Envelope gamma_e;
    double xi0 = 0.0;
    double xi1 = 0.0;
    double xi_e = 0.0;
};

// H = Delta|1><1| + (e^{i xi0} g0 |0><0| + e^{i xi1} g1 |1><1|)/2
//     + [Omega e^{i varphi} |1><0| / 2 + h.c.]
inline ComplexMatrix two_level_hamiltonian_at(const TwoLevelControls& c, double t) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    const double om = c.omega(t);
    h(0, 0) = 0.5 * std::exp(I * c.xi0) * c.gamma0(t);
    h(1, 1) = c.delta(t) + 0.5 * std::exp(I * c.xi1) * c.gamma1(t);
    h(1, 0) = 0.5 * om * std::exp(I * c.varphi);
    h(0, 1) = std::conj(h(1, 0));
    return h;
}

inline TimeDependentOperator two_level_hamiltonian(const TwoLevelControls& c) {
    return TimeDependentOperator(2, [c](double t) { return two_level_hamiltonian_at(c, t); });
}

inline ComplexMatrix three_level_hamiltonian_at(const ThreeLevelControls& c, double t) {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = c.delta0(t) + 0.5 * std::exp(I * c.xi0) * c.gamma0(t);
    h(1, 1) = c.delta1(t) + 0.5 * std::exp(I * c.xi1) * c.gamma1(t);
    h(2, 2) = c.delta_e(t) + 0.5 * std::exp(I * c.xi_e) * c.gamma_e(t);
    h(2, 0) = 0.5 * c.omega0(t) * std::exp(I * c.varphi0(t));
    h(2, 1) = 0.5 * c.omega1(t) * std::exp(I * c.varphi1(t));
    h(1, 0) = 0.5 * c.omega_a(t) * std::exp(I * c.varphi_a);
    h(0, 2) = std::conj(h(2, 0));
    h(1, 2) = std::conj(h(2, 1));
    h(0, 1) = std::conj(h(1, 0));
    return h;
}

inline TimeDependentOperator three_level_hamiltonian(const ThreeLevelControls& c) {
    return TimeDependentOperator(3, [c](double t) { return three_level_hamiltonian_at(c, t); });
}

// PT symmetry of the two-level generator: |xi0| == |xi1| and Delta == 0 on the grid.
inline bool is_pt_symmetric_two_level(const TwoLevelControls& c, const TimeGrid& grid) {
    if (std::abs(std::abs(c.xi0) - std::abs(c.xi1)) > 1e-12) return false;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (c.delta(grid.at(i)) != 0.0) return false;
    return true;
}

}  // namespace nhqc
