// Acceptance gate: one line per criterion, non-zero exit if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nhqc/nhqc.hpp"
#include "test_support.hpp"

using namespace nhqc;
using namespace testing_support;

namespace {

int failures = 0;

void report_line(int n, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d  %-34s %s\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* spec, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, spec, a, b, c);
    return buf;
}

ScenarioConfig config_for(ScenarioId id) {
    ScenarioConfig c;
    c.id = id;
    return c;
}

const ScenarioId builtin[] = {ScenarioId::two_level_a, ScenarioId::two_level_b, ScenarioId::two_level_c,
                              ScenarioId::two_level_d, ScenarioId::cyclic_cw,   ScenarioId::cyclic_ccw};

RunReport run(ScenarioId id) { return is_cyclic(id) ? run_cyclic(config_for(id)) : run_two_level(config_for(id)); }

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

double stage_triangularization(const ScenarioModel& m) {
    double worst = 0.0;
    for (const auto& st : m.stages) worst = std::max(worst, triangularization_residual(st.hamiltonian, st.frame, st.grid));
    return worst;
}

void criterion1(const std::vector<RunReport>& reports) {
    const int target[] = {0, 1, 0, 1};
    double worst_target = 0.0, worst_norm = 0.0, worst_dip = 0.0;
    for (int s = 0; s < 4; ++s) {
        const auto& tr = reports[s].trajectory;
        worst_target = std::max(worst_target, std::abs(tr.populations[target[s]].back() - 1.0));
        worst_norm = std::max(worst_norm, std::abs(tr.total_norm.back() - 1.0));
        worst_dip = std::max(worst_dip, min_of(tr.total_norm));
    }
    const bool ok = worst_target <= 1e-6 && worst_norm <= 1e-6 && worst_dip < 1.0 - 1e-3;
    report_line(1, "two-level transfers a-d", ok,
                fmt("|P_target-1|=%.2e |total-1|=%.2e max(min total)=%.4f", worst_target, worst_norm, worst_dip));
}

void criterion2(const RunReport& cw) {
    const auto& tr = cw.trajectory;
    const double T = cw.config.T;
    const auto at = [&](double t) { return static_cast<std::size_t>(std::llround(t / tr.grid.dt())); };
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double off = 6.0 * k * T;
        worst = std::max(worst, std::abs(tr.populations[2][at(off + 2 * T)] - 1.0));
        worst = std::max(worst, std::abs(tr.populations[1][at(off + 4 * T)] - 1.0));
        worst = std::max(worst, std::abs(tr.populations[0][at(off + 6 * T)] - 1.0));
    }
    const double p16 = tr.populations[1][at(1.6 * T)];
    double pe3 = 0.0;
    for (std::size_t i = at(4 * T) + 1; i < at(6 * T); ++i) pe3 = std::max(pe3, tr.populations[2][i]);
    const bool ok = worst <= 1e-6 && std::abs(p16 - 0.07) <= 0.02 && pe3 < 1e-8;
    report_line(2, "cyclic clockwise, two loops", ok,
                fmt("stage-end |P-1|=%.2e P1(1.6T)=%.4f max Pe(stage 3)=%.2e", worst, p16, pe3));
}

void criterion3(const RunReport& ccw) {
    const auto& tr = ccw.trajectory;
    const double T = ccw.config.T;
    const auto at = [&](double t) { return static_cast<std::size_t>(std::llround(t / tr.grid.dt())); };
    double worst = 0.0;
    for (int k = 0; k < 2; ++k) {
        const double off = 6.0 * k * T;
        worst = std::max(worst, std::abs(tr.populations[1][at(off + 2 * T)] - 1.0));
        worst = std::max(worst, std::abs(tr.populations[2][at(off + 4 * T)] - 1.0));
        worst = std::max(worst, std::abs(tr.populations[0][at(off + 6 * T)] - 1.0));
    }
    report_line(3, "cyclic counterclockwise, two loops", worst <= 1e-6, fmt("stage-end |P-1|=%.2e", worst));
}

void criterion4() {
    double worst = 0.0, weakest_perturbed = INFINITY;
    for (ScenarioId id : builtin) {
        auto c = config_for(id);
        worst = std::max(worst, stage_triangularization(build_model(c)));
        c.omega_scale = 1.01;
        weakest_perturbed = std::min(weakest_perturbed, stage_triangularization(build_model(c)));
    }
    report_line(4, "triangularization certificate", worst < 1e-9 && weakest_perturbed > 1e-3,
                fmt("max residual=%.2e  min residual with 1.01 Omega=%.2e", worst, weakest_perturbed));
}

void criterion5() {
    double tri = 0.0, vn = 0.0, tri_bad = INFINITY, vn_bad = INFINITY;
    std::mt19937_64 rng(5005);
    for (ScenarioId id : builtin) {
        auto c = config_for(id);
        c.gamma_scale = 0.0;
        const ScenarioModel m = build_model(c);
        for (const auto& st : m.stages) {
            tri = std::max(tri, triangularization_residual(st.hamiltonian, st.frame, st.grid));
            vn = std::max(vn, von_neumann_residual(st.hamiltonian, st.frame, st.grid));
            // Misaligned: a random fixed unitary applied to the passage frame.
            const ComplexMatrix u = random_unitary(rng, st.frame.dim());
            const AncillaryFrame f = st.frame;
            const AncillaryFrame bad(
                f.dim(), [f, u](double t) { return ComplexMatrix(u * f.basis_at(t)); },
                [f, u](double t) { return ComplexMatrix(u * f.derivative_at(t)); });
            tri_bad = std::min(tri_bad, triangularization_residual(st.hamiltonian, bad, st.grid));
            vn_bad = std::min(vn_bad, von_neumann_residual(st.hamiltonian, bad, st.grid));
        }
    }
    const bool ok = tri < 1e-9 && vn < 1e-9 && tri_bad > 1e-3 && vn_bad > 1e-3;
    report_line(5, "Hermitian-limit equivalence", ok,
                fmt("tri=%.2e vN=%.2e | misaligned: tri=%.2e", tri, vn, tri_bad) + fmt(" vN=%.2e", vn_bad));
}

void criterion6() {
    std::mt19937_64 rng(6006);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + trial % 2;
        const ComplexMatrix a = random_matrix(rng, n), b = random_matrix(rng, n);
        const double w = uniform(rng, 0.5, 3.0);
        const auto h = TimeDependentOperator(n, [a, b, w](double t) { return ComplexMatrix(a + std::cos(w * t) * b); });
        const TimeGrid g(0.0, 3.0, 0.001);
        // Kets and bras from separate evolutions of the basis vectors.
        std::vector<StateTrajectory> kets, bras;
        for (Eigen::Index k = 0; k < n; ++k) {
            kets.push_back(evolve_ket(h, basis_state(n, k), g));
            bras.push_back(evolve_bra(h, basis_state(n, k), g));
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index m = 0; m < n; ++m) {
                    const cplx overlap = bras[k].states[i].dot(kets[m].states[i]);
                    worst = std::max(worst, std::abs(overlap - (k == m ? 1.0 : 0.0)));
                }
    }
    report_line(6, "biorthogonality (random 2x2, 3x3)", worst <= 1e-6, fmt("max |<phi_k|psi_m>-delta|=%.2e", worst));
}

void criterion7() {
    std::mt19937_64 rng(7007);
    double weakest = INFINITY;
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Index n = 2 + trial % 2;
        const auto h = TimeDependentOperator::constant(random_matrix(rng, n));
        std::vector<double> err;
        for (double tau : {0.2, 0.1, 0.05}) {
            const ComplexMatrix u = propagator_ket(h, TimeGrid(0.0, tau, tau / 400)).back();
            err.push_back(max_abs(u - dyson_truncation(h, 0.0, tau, 4, 1024)));
        }
        weakest = std::min({weakest, std::log2(err[0] / err[1]), std::log2(err[1] / err[2])});
    }
    report_line(7, "Dyson order-4 oracle", weakest >= 4.5, fmt("min fitted order=%.3f", weakest));
}

void criterion8_9_10(const std::vector<RunReport>& reports) {
    double phase_norm = 0.0, stage_end = 0.0, bra = 0.0, refine = 0.0;
    for (const auto& r : reports) {
        const auto& tr = r.trajectory;
        for (std::size_t i = 0; i < tr.size(); ++i)
            phase_norm = std::max(phase_norm, std::abs(std::exp(r.phase.f_imag[i]) - tr.norm(i)));
        for (std::size_t s = 0; s < tr.grid.stage_count(); ++s)
            stage_end = std::max(stage_end, std::abs(r.phase.f_imag[tr.grid.stage_end(s)]));
        bra = std::max(bra, r.residuals.bra_relation);
        refine = std::max(refine, r.residuals.refinement_change);
    }
    report_line(8, "phase-norm identity", phase_norm <= 1e-6 && stage_end <= 1e-8,
                fmt("max |e^f_imag-|psi||=%.2e  max |f_imag(stage end)|=%.2e", phase_norm, stage_end));
    report_line(9, "bra-phase relation", bra < 1e-8, fmt("max residual=%.2e", bra));

    bool identical = true;
    for (ScenarioId id : builtin) {
        const RunReport again = run(id);
        const RunReport& first = reports[static_cast<std::size_t>(id)];
        identical = identical && csv_string(first) == csv_string(again) && svg_string(first) == svg_string(again);
    }
    report_line(10, "determinism and dt/2 convergence", refine <= 1e-8 && identical,
                fmt("max dt/2 population change=%.2e  byte-identical exports: ", refine) +
                    (identical ? "yes" : "no"));
}

}  // namespace

int main() try {
    std::vector<RunReport> reports;
    for (ScenarioId id : builtin) reports.push_back(run(id));

    criterion1(reports);
    criterion2(reports[4]);
    criterion3(reports[5]);
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8_9_10(reports);

    std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
} catch (const std::exception& e) {
    std::printf("FAIL: aborted: %s\n", e.what());
    return 1;
}
