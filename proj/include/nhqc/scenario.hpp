#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "config.hpp"
#include "dynamics.hpp"
#include "dyson.hpp"
#include "frame.hpp"
#include "models.hpp"
#include "schedule.hpp"
#include "synthesis.hpp"

namespace nhqc {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<", ">" or "~" (|value - threshold| within band)
    double band = 0.0;
    bool passed = false;
};

struct Checkpoint {
    double t = 0.0;
    std::vector<double> populations;
    double total = 0.0;
};

// Maxima of every residual a run records. NaN marks "not evaluated".
struct Residuals {
    double triangularization = 0.0;
    double consistency = 0.0;
    double bra_relation = 0.0;
    double refinement_change = 0.0;
    double passage_fidelity = 0.0;
    double phase_norm = 0.0;
    double stage_end_phase = 0.0;
    double biorthogonality = std::numeric_limits<double>::quiet_NaN();
    double von_neumann = std::numeric_limits<double>::quiet_NaN();
    double hermitian_triangularization = std::numeric_limits<double>::quiet_NaN();
    double dyson_order = std::numeric_limits<double>::quiet_NaN();
};

struct RunReport {
    ScenarioConfig config;
    std::vector<std::string> level_names;
    StateTrajectory trajectory;
    PhaseFunctional phase;
    Residuals residuals;
    std::vector<Checkpoint> checkpoints;
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }

    const CheckResult* find_check(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// One smooth stage: its own frame, synthesized Hamiltonian and passage.
struct StageModel {
    TimeGrid grid;
    AncillaryFrame frame;
    TimeDependentOperator hamiltonian;
    Passage passage;
    PhaseFunctional phase;
    double consistency;
    double bra_relation;

    TimeDependentOperator generator() const {
        return passage == Passage::ket ? hamiltonian : hamiltonian.adjoint();
    }
    Eigen::Index passage_column() const { return passage == Passage::ket ? frame.dim() - 1 : 0; }
};

struct ScenarioModel {
    TimeGrid grid;
    std::vector<StageModel> stages;
    StateVector initial_state;
    std::vector<std::string> level_names;

    TimeDependentOperator generator() const {
        if (stages.size() == 1) return stages.front().generator();
        std::vector<TimeDependentOperator> parts;
        std::vector<double> bounds{grid.t0()};
        for (const auto& s : stages) {
            parts.push_back(s.generator());
            bounds.push_back(s.grid.tf());
        }
        return TimeDependentOperator::concatenate(parts, bounds);
    }
};

// theta(t) of the four two-level transfer tasks and of the custom passage.
inline ScalarFunction two_level_theta(const ScenarioConfig& c) {
    const double T = c.T;
    const double w = pi / (4.0 * T);
    switch (c.id) {
        case ScenarioId::two_level_a: return ScalarFunction::affine(-w, T, -pi / 4.0);
        case ScenarioId::two_level_b: return ScalarFunction::affine(w, T, -pi / 4.0);
        case ScenarioId::two_level_c:
            return {[=](double t) { return -(pi / 2.0) * std::sin(w * (t + 2.0 * T)); },
                    [=](double t) { return -(pi / 2.0) * w * std::cos(w * (t + 2.0 * T)); }};
        case ScenarioId::two_level_d:
            return {[=](double t) { return (pi / 2.0) * std::cos(w * (t + 2.0 * T)); },
                    [=](double t) { return -(pi / 2.0) * w * std::sin(w * (t + 2.0 * T)); }};
        case ScenarioId::custom: {
            const double slope = (c.theta_end - c.theta_start) / (2.0 * T);
            return ScalarFunction::affine(slope, 0.0, c.theta_start);
        }
        default: throw ConfigError("two_level_theta: not a two-level scenario");
    }
}

inline Passage two_level_passage(const ScenarioConfig& c) {
    switch (c.id) {
        case ScenarioId::two_level_a:
        case ScenarioId::two_level_b: return Passage::ket;
        case ScenarioId::two_level_c:
        case ScenarioId::two_level_d: return Passage::bra;
        default: return c.passage;
    }
}

// Loss on |0>, gain on |1> with gamma = gamma_scale * 2 dtheta/dt, varphi = pi/2,
// alpha = 0, Delta = 0.
inline ScenarioModel build_two_level_model(const ScenarioConfig& c) {
    c.validate();
    const TimeGrid grid(0.0, 2.0 * c.T, c.step());
    const TwoLevelFrameParams frame{two_level_theta(c), ScalarFunction::constant(0.0)};
    TwoLevelDrive drive;
    const Envelope gamma = [theta = frame.theta, s = c.gamma_scale](double t) { return s * 2.0 * theta.rate(t); };
    drive.gamma0 = gamma;
    drive.gamma1 = gamma;
    drive.xi0 = -pi / 2.0;
    drive.xi1 = pi / 2.0;
    drive.varphi = pi / 2.0;
    TwoLevelControls controls = synthesize_two_level_general(frame, drive, grid);
    if (c.omega_scale != 1.0)
        controls.omega = [om = controls.omega, s = c.omega_scale](double t) { return s * om(t); };

    const Passage passage = two_level_passage(c);
    PhaseFunctional phase =
        passage == Passage::ket ? phase_two_level(controls, frame, grid) : bra_phase_two_level(controls, frame, grid);
    const AncillaryFrame f = two_level_frame(frame);
    StageModel stage{grid,
                     f,
                     two_level_hamiltonian(controls),
                     passage,
                     std::move(phase),
                     two_level_consistency_residual(controls, frame, grid),
                     bra_phase_relation_two_level(controls, frame, grid)};
    const StateVector psi0 = f.basis_at(0.0).col(stage.passage_column());
    return {grid, {std::move(stage)}, psi0, {"P0", "P1"}};
}

// Stage of a cyclic loop: alpha = beta = 0, varphi = varphi_a = pi/2, all
// detunings zero, gamma = gamma_scale * 3 dtheta/dt on |0> (loss) and |1> (gain),
// |gamma_e| = gamma/2 with the stage's xi_e.
inline StageModel build_cyclic_stage(const StagePiece& piece, const TimeGrid& grid, const ScenarioConfig& c) {
    const ThreeLevelFrameParams frame{piece.theta, ScalarFunction::constant(0.0), piece.phi_mix,
                                      ScalarFunction::constant(0.0)};
    ThreeLevelDrive drive;
    const double gamma = c.gamma_scale * 3.0 * piece.theta.rate(piece.begin);
    drive.gamma0 = constant_envelope(gamma);
    drive.gamma1 = constant_envelope(gamma);
    drive.gamma_e = constant_envelope(gamma / 2.0);
    drive.xi0 = -pi / 2.0;
    drive.xi1 = pi / 2.0;
    drive.xi_e = piece.xi_e;
    ThreeLevelControls controls = synthesize_three_level(frame, drive, grid);
    if (c.omega_scale != 1.0) {
        controls.omega = [om = controls.omega, s = c.omega_scale](double t) { return s * om(t); };
        controls.omega0 = [om = controls.omega0, s = c.omega_scale](double t) { return s * om(t); };
        controls.omega1 = [om = controls.omega1, s = c.omega_scale](double t) { return s * om(t); };
    }
    PhaseFunctional phase = piece.passage == Passage::ket ? phase_three_level(controls, frame, grid)
                                                          : bra_phase_three_level(controls, frame, grid);
    const auto consistency = three_level_consistency_residual(controls, frame, grid);
    return StageModel{grid,
                      three_level_frame(frame),
                      three_level_hamiltonian(controls),
                      piece.passage,
                      std::move(phase),
                      std::max(consistency.alpha_residual, consistency.beta_residual),
                      bra_phase_relation_three_level(controls, frame, grid)};
}

inline ScenarioModel build_cyclic_model(const ScenarioConfig& c) {
    c.validate();
    const Direction dir = c.id == ScenarioId::cyclic_cw ? Direction::clockwise : Direction::counterclockwise;
    std::vector<double> bounds;
    const int stage_total = 3 * c.loops;
    for (int s = 1; s < stage_total; ++s) bounds.push_back(2.0 * c.T * s);
    const TimeGrid grid(0.0, 2.0 * c.T * stage_total, c.step(), bounds);
    std::vector<StageModel> stages;
    for (int k = 1; k <= c.loops; ++k) {
        const StageSchedule sched = cyclic_schedule(dir, k, c.T);
        for (std::size_t j = 0; j < 3; ++j)
            stages.push_back(build_cyclic_stage(sched.stages[j], grid.stage_grid(stages.size()), c));
    }
    return {grid, std::move(stages), basis_state(3, 0), {"P0", "P1", "Pe"}};
}

inline ScenarioModel build_model(const ScenarioConfig& c) {
    return is_cyclic(c.id) ? build_cyclic_model(c) : build_two_level_model(c);
}

namespace detail {

inline CheckResult below(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, "<", 0.0, value < threshold};
}
inline CheckResult above(std::string name, double value, double threshold) {
    return {std::move(name), value, threshold, ">", 0.0, value > threshold};
}
inline CheckResult near(std::string name, double value, double target, double band) {
    return {std::move(name), value, target, "~", band, std::abs(value - target) <= band};
}

inline std::size_t level_index(const std::string& name) {
    if (name == "P0") return 0;
    if (name == "P1") return 1;
    return 2;
}

inline Checkpoint checkpoint_at(const StateTrajectory& tr, std::size_t i) {
    Checkpoint cp;
    cp.t = tr.grid.at(i);
    for (const auto& p : tr.populations) cp.populations.push_back(p[i]);
    cp.total = tr.total_norm[i];
    return cp;
}

inline std::string fmt_time(double t_over_T) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%gT", t_over_T);
    return buf;
}

// Level reached at the end of each stage.
inline std::vector<std::string> stage_targets(const ScenarioConfig& c) {
    switch (c.id) {
        case ScenarioId::two_level_a:
        case ScenarioId::two_level_c: return {"P0"};
        case ScenarioId::two_level_b:
        case ScenarioId::two_level_d: return {"P1"};
        case ScenarioId::cyclic_cw: return {"Pe", "P1", "P0"};
        case ScenarioId::cyclic_ccw: return {"P1", "Pe", "P0"};
        default: return {};
    }
}

}  // namespace detail

// Runs the model and fills the trajectory, phase, residuals and the
// scenario's acceptance checks. The dt/2 self-check throws ConvergenceError
// when throw_on_divergence is set; otherwise it is recorded as a failed check.
inline RunReport run_model(const ScenarioModel& model, const ScenarioConfig& c, bool throw_on_divergence = true) {
    const TimeDependentOperator gen = model.generator();
    StateTrajectory tr = evolve_ket(gen, model.initial_state, model.grid);
    const StateTrajectory fine = evolve_ket(gen, model.initial_state, model.grid.refined());
    Residuals res;
    res.refinement_change = population_change_under_refinement(tr, fine);
    if (throw_on_divergence && !(res.refinement_change <= 1e-8))
        throw ConvergenceError("step size too large: populations moved by " + std::to_string(res.refinement_change) +
                               " when dt was halved");

    PhaseFunctional phase;
    for (std::size_t s = 0; s < model.stages.size(); ++s) {
        const StageModel& st = model.stages[s];
        phase.append(st.phase);
        res.triangularization = std::max(res.triangularization, triangularization_residual(st.hamiltonian, st.frame, st.grid));
        res.consistency = std::max(res.consistency, st.consistency);
        res.bra_relation = std::max(res.bra_relation, st.bra_relation);
        res.stage_end_phase = std::max(res.stage_end_phase, std::abs(st.phase.f_imag.back() - st.phase.f_imag.front()));

        // psi(t) = a_s e^{-i (f(t) - f(t_s))} |passage(t)> on stage s.
        const std::size_t b = model.grid.stage_begin(s);
        const std::size_t e = model.grid.stage_end(s);
        const Eigen::Index col = st.passage_column();
        const cplx amp = st.frame.basis_at(model.grid.at(b)).col(col).dot(tr.states[b]);
        for (std::size_t i = b; i <= e; ++i) {
            const std::size_t j = i - b;
            const cplx df(st.phase.f_real[j], st.phase.f_imag[j]);
            const StateVector predicted = amp * std::exp(-I * df) * st.frame.basis_at(model.grid.at(i)).col(col);
            res.passage_fidelity = std::max(res.passage_fidelity, (tr.states[i] - predicted).norm());
        }
    }
    const double norm0 = tr.norm(0);
    for (std::size_t i = 0; i < tr.size(); ++i)
        res.phase_norm = std::max(res.phase_norm, std::abs(norm0 * std::exp(phase.f_imag[i]) - tr.norm(i)));

    RunReport rep{c, model.level_names, tr, phase, res, {}, {}};
    const double tol = c.tolerance;
    const double T = c.T;
    auto& checks = rep.checks;

    rep.checkpoints.push_back(detail::checkpoint_at(tr, 0));
    for (std::size_t s = 0; s < model.stages.size(); ++s)
        rep.checkpoints.push_back(detail::checkpoint_at(tr, model.grid.stage_end(s)));

    const bool custom = c.id == ScenarioId::custom;
    const bool lossy = c.gamma_scale != 0.0;
    if (!custom) {
        const auto targets = detail::stage_targets(c);
        for (std::size_t s = 0; s < model.stages.size(); ++s) {
            const std::size_t i = model.grid.stage_end(s);
            const std::string& lvl = targets[s % targets.size()];
            const std::string when = detail::fmt_time(model.grid.at(i) / T);
            checks.push_back(detail::near(lvl + "(" + when + ") = 1", tr.populations[detail::level_index(lvl)][i], 1.0, tol));
            checks.push_back(detail::near("total(" + when + ") = 1", tr.total_norm[i], 1.0, tol));
        }
        if (lossy) {
            const double dip = *std::min_element(tr.total_norm.begin(), tr.total_norm.end());
            checks.push_back(detail::below("mid-passage norm dip", dip, 1.0 - 1e-3));
        }
        checks.push_back(detail::below("stage-end f_imag", res.stage_end_phase, 1e-8));
    }

    if (c.id == ScenarioId::cyclic_cw) {
        const std::size_t i16 = static_cast<std::size_t>(std::llround(1.6 * T / model.grid.dt()));
        checks.push_back(detail::near("P1(1.6T) ~ 0.07", tr.populations[1][i16], 0.07, 0.02));
        double pe = 0.0;
        for (std::size_t s = 2; s < model.stages.size(); s += 3)
            for (std::size_t i = model.grid.stage_begin(s) + 1; i < model.grid.stage_end(s); ++i)
                pe = std::max(pe, tr.populations[2][i]);
        checks.push_back(detail::below("max Pe in stage 3", pe, 1e-8));
    }
    if (is_cyclic(c.id) && c.loops > 1) {
        double drift = 0.0;
        for (std::size_t k = 1; k < static_cast<std::size_t>(c.loops); ++k)
            for (std::size_t j = 1; j <= 3; ++j) {
                const auto& a = rep.checkpoints[3 * (k - 1) + j];
                const auto& b = rep.checkpoints[3 * k + j];
                for (std::size_t n = 0; n < a.populations.size(); ++n)
                    drift = std::max(drift, std::abs(a.populations[n] - b.populations[n]));
            }
        checks.push_back(detail::below("loop periodicity", drift, tol));
    }

    checks.push_back(detail::below("triangularization residual", res.triangularization, 1e-9));
    checks.push_back(detail::below("phase consistency residual", res.consistency, 1e-8));
    checks.push_back(detail::below("bra phase relation", res.bra_relation, 1e-8));
    checks.push_back(detail::below("dt/2 population change", res.refinement_change, 1e-8));
    checks.push_back(detail::below("passage fidelity", res.passage_fidelity, tol));
    checks.push_back(detail::below("phase-norm identity", res.phase_norm, tol));
    return rep;
}

inline RunReport run_two_level(const ScenarioConfig& c) {
    if (is_cyclic(c.id)) throw ConfigError("run_two_level: scenario must be a, b, c, d or custom");
    return run_model(build_two_level_model(c), c);
}

inline RunReport run_cyclic(const ScenarioConfig& c) {
    if (!is_cyclic(c.id)) throw ConfigError("run_cyclic: scenario must be cyclic_cw or cyclic_ccw");
    return run_model(build_cyclic_model(c), c);
}

// Fitted convergence order of the order-4 Dyson truncation for a constant
// generator, against expm(-i h tau) for tau = tau0, tau0/2, tau0/4.
inline double dyson_fitted_order(const ComplexMatrix& h, double tau0, int quadrature_steps = 1024) {
    const TimeDependentOperator op = TimeDependentOperator::constant(h);
    std::vector<double> errs;
    for (double tau : {tau0, tau0 / 2.0, tau0 / 4.0}) {
        const ComplexMatrix exact = expm(ComplexMatrix(-I * tau * h));
        errs.push_back(max_abs(exact - dyson_truncation(op, 0.0, tau, 4, quadrature_steps)));
    }
    return std::min(std::log2(errs[0] / errs[1]), std::log2(errs[1] / errs[2]));
}

// max over the grid of ||V_0^dag U_0 - 1||_max.
inline double biorthogonality_residual(const TimeDependentOperator& h, const TimeGrid& grid) {
    const auto u = propagator_ket(h, grid);
    const auto v = propagator_bra(h, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, max_abs(v[i].adjoint() * u[i] - identity(h.dim())));
    return worst;
}

// Full residual suite on one scenario. Never throws for numerical failures;
// they show up as failed checks.
inline RunReport verify(const ScenarioConfig& c) {
    const ScenarioModel model = build_model(c);
    RunReport rep = run_model(model, c, false);

    const TimeDependentOperator gen = model.generator();
    rep.residuals.biorthogonality = biorthogonality_residual(gen, model.grid);
    rep.checks.push_back(detail::below("biorthogonality", rep.residuals.biorthogonality, 1e-6));

    // Generator frozen at interior points of the first stage.
    double order = std::numeric_limits<double>::infinity();
    const StageModel& first = model.stages.front();
    for (double frac : {0.25, 0.5, 0.75}) {
        const double t = first.grid.t0() + frac * (first.grid.tf() - first.grid.t0());
        order = std::min(order, dyson_fitted_order(first.hamiltonian.value_at(t), 0.2 * c.T));
    }
    rep.residuals.dyson_order = order;
    rep.checks.push_back(detail::above("Dyson order-4 fitted order", rep.residuals.dyson_order, 4.5));

    ScenarioConfig hermitian = c;
    hermitian.gamma_scale = 0.0;
    const ScenarioModel herm = build_model(hermitian);
    double vn = 0.0, tri = 0.0;
    for (const auto& st : herm.stages) {
        vn = std::max(vn, von_neumann_residual(st.hamiltonian, st.frame, st.grid));
        tri = std::max(tri, triangularization_residual(st.hamiltonian, st.frame, st.grid));
    }
    rep.residuals.von_neumann = vn;
    rep.residuals.hermitian_triangularization = tri;
    rep.checks.push_back(detail::below("Hermitian-limit von Neumann residual", vn, 1e-9));
    rep.checks.push_back(detail::below("Hermitian-limit triangularization", tri, 1e-9));
    return rep;
}

}  // namespace nhqc
