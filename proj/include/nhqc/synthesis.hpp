#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "frame.hpp"
#include "linalg.hpp"
#include "models.hpp"
#include "scalar_function.hpp"
#include "time_grid.hpp"

namespace nhqc {

inline constexpr double singularity_guard = 1e-6;
inline constexpr double consistency_tolerance = 1e-8;

// Inputs for two-level synthesis; Omega is the output.
struct TwoLevelDrive {
    Envelope gamma0 = constant_envelope(0.0);
    Envelope gamma1 = constant_envelope(0.0);
    double xi0 = 0.0;
    double xi1 = 0.0;
    Envelope delta = constant_envelope(0.0);
    double varphi = pi / 2.0;
};

struct ThreeLevelDrive {
    Envelope gamma0 = constant_envelope(0.0);
    Envelope gamma1 = constant_envelope(0.0);
    Envelope gamma_e = constant_envelope(0.0);
    double xi0 = 0.0;
    double xi1 = 0.0;
    double xi_e = 0.0;
    Envelope delta0 = constant_envelope(0.0);
    Envelope delta1 = constant_envelope(0.0);
    Envelope delta_e = constant_envelope(0.0);
    double varphi = pi / 2.0;
    double varphi_a = pi / 2.0;
};

// Accumulated complex phase f(t) of a passage, sampled on a grid, with
// psi(t) = e^{-i f(t)} |passage(t)> up to the initial amplitude.
struct PhaseFunctional {
    std::vector<double> times;
    std::vector<double> f_real;
    std::vector<double> f_imag;

    std::size_t size() const { return times.size(); }

    // Continue with a phase accumulated on the following stage.
    void append(const PhaseFunctional& next) {
        if (times.empty()) {
            *this = next;
            return;
        }
        const double r0 = f_real.back();
        const double i0 = f_imag.back();
        for (std::size_t j = 1; j < next.size(); ++j) {
            times.push_back(next.times[j]);
            f_real.push_back(r0 + next.f_real[j]);
            f_imag.push_back(i0 + next.f_imag[j]);
        }
    }
};

namespace detail {

// cos with exact zeros at odd multiples of pi/2.
inline double clean_cos(double x) {
    const double c = std::cos(x);
    return std::abs(c) < 1e-15 ? 0.0 : c;
}

// coefficient * cot(angle); a vanishing coefficient annihilates the cotangent
// even where it diverges.
inline double cot_product(double coefficient, double angle) {
    if (coefficient == 0.0) return 0.0;
    return coefficient * std::cos(angle) / std::sin(angle);
}

inline void guard_denominator(double value, double t, const char* what) {
    if (!(std::abs(value) >= singularity_guard))
        throw SingularityError(std::string(what) + " = " + std::to_string(value) + " below guard at t = " +
                               std::to_string(t));
}

// Simpson's rule on every grid step (endpoints plus midpoint), accumulated
// from zero at the first grid point.
template <typename RateFn>
PhaseFunctional accumulate(const TimeGrid& grid, RateFn rate) {
    PhaseFunctional out;
    out.times = grid.points();
    const std::size_t n = grid.size();
    out.f_real.assign(n, 0.0);
    out.f_imag.assign(n, 0.0);
    cplx prev = rate(grid.at(0));
    for (std::size_t i = 1; i < n; ++i) {
        const double ta = grid.at(i - 1);
        const double tb = grid.at(i);
        const cplx mid = rate(0.5 * (ta + tb));
        const cplx cur = rate(tb);
        const cplx inc = (tb - ta) / 6.0 * (prev + 4.0 * mid + cur);
        out.f_real[i] = out.f_real[i - 1] + inc.real();
        out.f_imag[i] = out.f_imag[i - 1] + inc.imag();
        prev = cur;
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- two-level

inline double two_level_omega(const TwoLevelFrameParams& frame, const TwoLevelDrive& d, double t) {
    const double th = frame.theta(t);
    const double num = -4.0 * frame.theta.rate(t) +
                       (d.gamma0(t) * std::sin(d.xi0) - d.gamma1(t) * std::sin(d.xi1)) * std::sin(2.0 * th);
    return num / (2.0 * std::sin(d.varphi + frame.alpha(t)));
}

// alpha-dot demanded by the lower-left triangularization, given Omega.
inline double two_level_required_alpha_rate(const TwoLevelControls& c, const TwoLevelFrameParams& frame, double t) {
    const double th = frame.theta(t);
    const double coupling = c.omega(t) * detail::clean_cos(c.varphi + frame.alpha(t));
    return c.delta(t) - detail::cot_product(coupling, 2.0 * th) -
           0.5 * (c.gamma0(t) * std::cos(c.xi0) - c.gamma1(t) * std::cos(c.xi1));
}

inline double two_level_consistency_residual(const TwoLevelControls& c, const TwoLevelFrameParams& frame,
                                             const TimeGrid& grid) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        worst = std::max(worst, std::abs(frame.alpha.rate(t) - two_level_required_alpha_rate(c, frame, t)));
    }
    return worst;
}

// Omega(t) that annihilates the upper entry of H_rot for the two-level frame;
// the alpha-dot equation is checked on the grid, not solved.
inline TwoLevelControls synthesize_two_level_general(const TwoLevelFrameParams& frame, const TwoLevelDrive& d,
                                                     const TimeGrid& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        detail::guard_denominator(std::sin(d.varphi + frame.alpha(t)), t, "sin(varphi + alpha)");
    }
    TwoLevelControls c;
    c.omega = [frame, d](double t) { return two_level_omega(frame, d, t); };
    c.delta = d.delta;
    c.varphi = d.varphi;
    c.gamma0 = d.gamma0;
    c.gamma1 = d.gamma1;
    c.xi0 = d.xi0;
    c.xi1 = d.xi1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        const double r = std::abs(frame.alpha.rate(t) - two_level_required_alpha_rate(c, frame, t));
        if (!(r <= consistency_tolerance))
            throw ConsistencyError("alpha-dot equation violated at t = " + std::to_string(t) + " (residual " +
                                   std::to_string(r) + ")");
    }
    return c;
}

// d f_22/dt for the ket passage |mu_2>.
inline cplx two_level_ket_phase_rate(const TwoLevelControls& c, const TwoLevelFrameParams& frame, double t) {
    const double th = frame.theta(t);
    const double s2 = std::pow(std::sin(th), 2), c2 = std::pow(std::cos(th), 2);
    const cplx h00 = 0.5 * std::exp(I * c.xi0) * c.gamma0(t);
    const cplx h11 = c.delta(t) + 0.5 * std::exp(I * c.xi1) * c.gamma1(t);
    return s2 * h00 + c2 * h11 + 0.5 * c.omega(t) * std::sin(2.0 * th) * std::cos(c.varphi + frame.alpha(t)) -
           0.5 * frame.alpha.rate(t) * std::cos(2.0 * th);
}

// d f_11/dt, the diagonal entry of H_rot on |mu_1>.
inline cplx two_level_f11_rate(const TwoLevelControls& c, const TwoLevelFrameParams& frame, double t) {
    const double th = frame.theta(t);
    const double s2 = std::pow(std::sin(th), 2), c2 = std::pow(std::cos(th), 2);
    const cplx h00 = 0.5 * std::exp(I * c.xi0) * c.gamma0(t);
    const cplx h11 = c.delta(t) + 0.5 * std::exp(I * c.xi1) * c.gamma1(t);
    return c2 * h00 + s2 * h11 - 0.5 * c.omega(t) * std::sin(2.0 * th) * std::cos(c.varphi + frame.alpha(t)) +
           0.5 * frame.alpha.rate(t) * std::cos(2.0 * th);
}

// f_22 along the ket passage.
inline PhaseFunctional phase_two_level(const TwoLevelControls& c, const TwoLevelFrameParams& frame,
                                       const TimeGrid& grid) {
    return detail::accumulate(grid, [&](double t) { return two_level_ket_phase_rate(c, frame, t); });
}

// f_11^* along the bra passage |mu_1> evolved under H^dagger.
inline PhaseFunctional bra_phase_two_level(const TwoLevelControls& c, const TwoLevelFrameParams& frame,
                                           const TimeGrid& grid) {
    return detail::accumulate(grid, [&](double t) { return std::conj(two_level_f11_rate(c, frame, t)); });
}

// Residual of  conj(df11/dt) = Delta + conj(G) - conj(df22/dt), where df11 is
// read off H_rot and df22 comes from the closed form; G is the gain/loss trace
// (zero in the PT-symmetric setting).
inline double bra_phase_relation_two_level(const TwoLevelControls& c, const TwoLevelFrameParams& frame,
                                           const TimeGrid& grid) {
    const AncillaryFrame f = two_level_frame(frame);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        const cplx f11 = rotated_hamiltonian(two_level_hamiltonian_at(c, t), f, t)(0, 0);
        const cplx f22 = two_level_ket_phase_rate(c, frame, t);
        const cplx gain = 0.5 * (std::exp(I * c.xi0) * c.gamma0(t) + std::exp(I * c.xi1) * c.gamma1(t));
        worst = std::max(worst, std::abs(std::conj(f11) - (c.delta(t) + std::conj(gain) - std::conj(f22))));
    }
    return worst;
}

// -------------------------------------------------------------- three-level

inline double three_level_omega(const ThreeLevelFrameParams& frame, const ThreeLevelDrive& d, double t) {
    const double th = frame.theta(t), ph = frame.phi_mix(t);
    const double s2 = std::pow(std::sin(th), 2), c2 = std::pow(std::cos(th), 2);
    const double rates = d.gamma0(t) * std::sin(d.xi0) * s2 + d.gamma1(t) * std::sin(d.xi1) * c2 -
                         d.gamma_e(t) * std::sin(d.xi_e);
    return (rates * std::sin(ph) * std::cos(ph) - 2.0 * frame.phi_mix.rate(t)) / std::sin(d.varphi + frame.beta(t));
}

// Coupling |0> <-> |1>; the two-level Omega under Delta -> Delta1 - Delta0, varphi -> varphi_a.
inline double three_level_omega_a(const ThreeLevelFrameParams& frame, const ThreeLevelDrive& d, double t) {
    const double num = -4.0 * frame.theta.rate(t) +
                       (d.gamma0(t) * std::sin(d.xi0) - d.gamma1(t) * std::sin(d.xi1)) * std::sin(2.0 * frame.theta(t));
    return num / (2.0 * std::sin(d.varphi_a + frame.alpha(t)));
}

inline double three_level_required_alpha_rate(const ThreeLevelControls& c, const ThreeLevelFrameParams& frame,
                                              double t) {
    const double coupling = c.omega_a(t) * detail::clean_cos(c.varphi_a + frame.alpha(t));
    return (c.delta1(t) - c.delta0(t)) - detail::cot_product(coupling, 2.0 * frame.theta(t)) -
           0.5 * (c.gamma0(t) * std::cos(c.xi0) - c.gamma1(t) * std::cos(c.xi1));
}

inline double three_level_required_beta_rate(const ThreeLevelControls& c, const ThreeLevelFrameParams& frame,
                                             double t) {
    const double th = frame.theta(t), ph = frame.phi_mix(t);
    const double s2 = std::pow(std::sin(th), 2), c2 = std::pow(std::cos(th), 2);
    const double detunings = c.delta0(t) * s2 + c.delta1(t) * c2 - c.delta_e(t);
    const double rates = c.gamma0(t) * std::cos(c.xi0) * s2 + c.gamma1(t) * std::cos(c.xi1) * c2 -
                         c.gamma_e(t) * std::cos(c.xi_e);
    const double side = c.omega_a(t) * std::sin(2.0 * th) * detail::clean_cos(c.varphi_a + frame.alpha(t));
    const double coupling = c.omega(t) * detail::clean_cos(c.varphi + frame.beta(t));
    return 0.5 * (frame.alpha.rate(t) * std::cos(2.0 * th) - 2.0 * detunings - rates - side) -
           detail::cot_product(coupling, 2.0 * ph);
}

struct ThreeLevelConsistency {
    double alpha_residual = 0.0;
    double beta_residual = 0.0;
};

inline ThreeLevelConsistency three_level_consistency_residual(const ThreeLevelControls& c,
                                                              const ThreeLevelFrameParams& frame,
                                                              const TimeGrid& grid) {
    ThreeLevelConsistency out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        out.alpha_residual =
            std::max(out.alpha_residual, std::abs(frame.alpha.rate(t) - three_level_required_alpha_rate(c, frame, t)));
        out.beta_residual =
            std::max(out.beta_residual, std::abs(frame.beta.rate(t) - three_level_required_beta_rate(c, frame, t)));
    }
    return out;
}

// Envelopes and phases that lower-triangularize H_rot in the three-level frame:
// varphi0 = varphi - alpha/2, varphi1 = varphi + alpha/2, Omega0 = Omega sin(theta),
// Omega1 = Omega cos(theta). Both phase equations are checked on the grid.
inline ThreeLevelControls synthesize_three_level(const ThreeLevelFrameParams& frame, const ThreeLevelDrive& d,
                                                 const TimeGrid& grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        detail::guard_denominator(std::sin(d.varphi + frame.beta(t)), t, "sin(varphi + beta)");
        detail::guard_denominator(std::sin(d.varphi_a + frame.alpha(t)), t, "sin(varphi_a + alpha)");
    }
    ThreeLevelControls c;
    c.omega = [frame, d](double t) { return three_level_omega(frame, d, t); };
    c.omega0 = [frame, d](double t) { return three_level_omega(frame, d, t) * std::sin(frame.theta(t)); };
    c.omega1 = [frame, d](double t) { return three_level_omega(frame, d, t) * std::cos(frame.theta(t)); };
    c.omega_a = [frame, d](double t) { return three_level_omega_a(frame, d, t); };
    c.varphi0 = [frame, vp = d.varphi](double t) { return vp - 0.5 * frame.alpha(t); };
    c.varphi1 = [frame, vp = d.varphi](double t) { return vp + 0.5 * frame.alpha(t); };
    c.varphi = d.varphi;
    c.varphi_a = d.varphi_a;
    c.delta0 = d.delta0;
    c.delta1 = d.delta1;
    c.delta_e = d.delta_e;
    c.gamma0 = d.gamma0;
    c.gamma1 = d.gamma1;
    c.gamma_e = d.gamma_e;
    c.xi0 = d.xi0;
    c.xi1 = d.xi1;
    c.xi_e = d.xi_e;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        const double ra = std::abs(frame.alpha.rate(t) - three_level_required_alpha_rate(c, frame, t));
        if (!(ra <= consistency_tolerance))
            throw ConsistencyError("alpha-dot equation violated at t = " + std::to_string(t) + " (residual " +
                                   std::to_string(ra) + ")");
        const double rb = std::abs(frame.beta.rate(t) - three_level_required_beta_rate(c, frame, t));
        if (!(rb <= consistency_tolerance))
            throw ConsistencyError("beta-dot equation violated at t = " + std::to_string(t) + " (residual " +
                                   std::to_string(rb) + ")");
    }
    return c;
}

// d f_33/dt for the ket passage |mu_3>.
inline cplx three_level_ket_phase_rate(const ThreeLevelControls& c, const ThreeLevelFrameParams& frame, double t) {
    const double th = frame.theta(t), ph = frame.phi_mix(t);
    const double st2 = std::pow(std::sin(th), 2), ct2 = std::pow(std::cos(th), 2);
    const double sp2 = std::pow(std::sin(ph), 2), cp2 = std::pow(std::cos(ph), 2);
    const cplx bright = c.delta0(t) * st2 + c.delta1(t) * ct2 +
                        0.5 * (std::exp(I * c.xi0) * c.gamma0(t) * st2 + std::exp(I * c.xi1) * c.gamma1(t) * ct2) +
                        0.5 * c.omega_a(t) * std::sin(2.0 * th) * std::cos(c.varphi_a + frame.alpha(t));
    const cplx excited = c.delta_e(t) + 0.5 * std::exp(I * c.xi_e) * c.gamma_e(t);
    return sp2 * bright + cp2 * excited + 0.5 * c.omega(t) * std::sin(2.0 * ph) * std::cos(c.varphi + frame.beta(t)) -
           0.5 * (frame.beta.rate(t) * std::cos(2.0 * ph) + frame.alpha.rate(t) * sp2 * std::cos(2.0 * th));
}

inline cplx three_level_f11_rate(const ThreeLevelControls& c, const ThreeLevelFrameParams& frame, double t) {
    const double th = frame.theta(t);
    const double s2 = std::pow(std::sin(th), 2), c2 = std::pow(std::cos(th), 2);
    const cplx h00 = c.delta0(t) + 0.5 * std::exp(I * c.xi0) * c.gamma0(t);
    const cplx h11 = c.delta1(t) + 0.5 * std::exp(I * c.xi1) * c.gamma1(t);
    return c2 * h00 + s2 * h11 - 0.5 * c.omega_a(t) * std::sin(2.0 * th) * std::cos(c.varphi_a + frame.alpha(t)) +
           0.5 * frame.alpha.rate(t) * std::cos(2.0 * th);
}

inline PhaseFunctional phase_three_level(const ThreeLevelControls& c, const ThreeLevelFrameParams& frame,
                                         const TimeGrid& grid) {
    return detail::accumulate(grid, [&](double t) { return three_level_ket_phase_rate(c, frame, t); });
}

inline PhaseFunctional bra_phase_three_level(const ThreeLevelControls& c, const ThreeLevelFrameParams& frame,
                                             const TimeGrid& grid) {
    return detail::accumulate(grid, [&](double t) { return std::conj(three_level_f11_rate(c, frame, t)); });
}

// conj(df11/dt) = Delta0 cos^2(theta) + Delta1 + conj(G) - conj(g22), with g22 the
// two-level df22/dt under Delta -> Delta1, Omega -> Omega_a, varphi -> varphi_a.
inline double bra_phase_relation_three_level(const ThreeLevelControls& c, const ThreeLevelFrameParams& frame,
                                             const TimeGrid& grid) {
    const AncillaryFrame f = three_level_frame(frame);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.at(i);
        const double th = frame.theta(t);
        const double s2 = std::pow(std::sin(th), 2), c2 = std::pow(std::cos(th), 2);
        const cplx f11 = rotated_hamiltonian(three_level_hamiltonian_at(c, t), f, t)(0, 0);
        const cplx g22 = c.delta1(t) * c2 +
                         0.5 * (std::exp(I * c.xi0) * c.gamma0(t) * s2 + std::exp(I * c.xi1) * c.gamma1(t) * c2) +
                         0.5 * c.omega_a(t) * std::sin(2.0 * th) * std::cos(c.varphi_a + frame.alpha(t)) -
                         0.5 * frame.alpha.rate(t) * std::cos(2.0 * th);
        const cplx gain = 0.5 * (std::exp(I * c.xi0) * c.gamma0(t) + std::exp(I * c.xi1) * c.gamma1(t));
        const cplx expected = c.delta0(t) * c2 + c.delta1(t) + std::conj(gain) - std::conj(g22);
        worst = std::max(worst, std::abs(std::conj(f11) - expected));
    }
    return worst;
}

}  // namespace nhqc
