#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nhqc/frame.hpp"
#include "nhqc/synthesis.hpp"
#include "test_support.hpp"

using namespace nhqc;
using namespace testing_support;

namespace {

ScalarFunction wobble(double a, double w, double c) {
    return {[=](double t) { return c + a * std::sin(w * t); }, [=](double t) { return a * w * std::cos(w * t); }};
}

TwoLevelFrameParams random_two_level(std::mt19937_64& rng) {
    return {wobble(uniform(rng, 0.2, 1.0), uniform(rng, 0.5, 2.0), uniform(rng, -1, 1)),
            wobble(uniform(rng, 0.2, 1.0), uniform(rng, 0.5, 2.0), uniform(rng, -1, 1))};
}

ThreeLevelFrameParams random_three_level(std::mt19937_64& rng) {
    auto r = [&] { return wobble(uniform(rng, 0.2, 1.0), uniform(rng, 0.5, 2.0), uniform(rng, -1, 1)); };
    return {r(), r(), r(), r()};
}

ComplexMatrix central_difference(const AncillaryFrame& f, double t, double h = 1e-5) {
    return (f.basis_at(t + h) - f.basis_at(t - h)) / (2.0 * h);
}

// Scenario a passage: theta = -[pi (t - T)/(4T) + pi/4], gamma = 2 dtheta/dt.
struct ScenarioA {
    double T = 1.0;
    TwoLevelFrameParams frame{ScalarFunction::affine(-pi / 4.0, 1.0, -pi / 4.0), ScalarFunction::constant(0.0)};
    TimeGrid grid{0.0, 2.0, 0.0005};

    TwoLevelControls controls(double gamma_scale = 1.0) const {
        TwoLevelDrive d;
        const double g = gamma_scale * 2.0 * frame.theta.rate(0.0);
        d.gamma0 = d.gamma1 = constant_envelope(g);
        d.xi0 = -pi / 2;
        d.xi1 = pi / 2;
        return synthesize_two_level_general(frame, d, grid);
    }
};

}  // namespace

TEST(TwoLevelFrame, IdentityAndSwap) {
    TwoLevelFrameParams p{ScalarFunction::constant(0.0), ScalarFunction::constant(0.0)};
    auto f = two_level_frame(p);
    EXPECT_LT(max_abs(f.basis_at(0.3) - identity(2)), 1e-15);
    p.theta = ScalarFunction::constant(pi / 2);
    f = two_level_frame(p);
    EXPECT_LT((f.mu(1, 0.0) + basis_state(2, 1)).norm(), 1e-15);
    EXPECT_LT((f.mu(2, 0.0) - basis_state(2, 0)).norm(), 1e-15);
}

TEST(ThreeLevelFrame, PassageEndpoints) {
    ThreeLevelFrameParams p{ScalarFunction::constant(-pi / 2), ScalarFunction::constant(0.0),
                            ScalarFunction::constant(-pi / 2), ScalarFunction::constant(0.0)};
    EXPECT_LT((three_level_frame(p).mu(3, 0.0) - basis_state(3, 0)).norm(), 1e-15);
    p.theta = p.phi_mix = ScalarFunction::constant(0.0);
    EXPECT_LT((three_level_frame(p).mu(3, 0.0) - basis_state(3, 2)).norm(), 1e-15);
}

TEST(Property, FrameOrthonormalityAndDerivatives) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f2 = two_level_frame(random_two_level(rng));
        const auto f3 = three_level_frame(random_three_level(rng));
        for (int k = 0; k < 10; ++k) {
            const double t = uniform(rng, -3.0, 3.0);
            EXPECT_LT(orthonormality_residual(f2, t), 1e-12);
            EXPECT_LT(orthonormality_residual(f3, t), 1e-12);
            EXPECT_LT(max_abs(f2.derivative_at(t) - central_difference(f2, t)), 1e-8);
            EXPECT_LT(max_abs(f3.derivative_at(t) - central_difference(f3, t)), 1e-8);
        }
    }
}

TEST(FrameUnitary, IdentityAtStartAndUnitary) {
    std::mt19937_64 rng(19);
    const auto f = three_level_frame(random_three_level(rng));
    const auto v = frame_unitary(f, 0.4);
    EXPECT_LT(max_abs(v.value_at(0.4) - identity(3)), 1e-14);
    for (int k = 0; k < 10; ++k) {
        const ComplexMatrix m = v.value_at(uniform(rng, -2, 2));
        EXPECT_LT(max_abs(m.adjoint() * m - identity(3)), 1e-12);
    }
    const ComplexMatrix u = random_unitary(rng, 3);
    const AncillaryFrame fixed(3, [u](double) { return u; }, [](double) { return ComplexMatrix::Zero(3, 3); });
    EXPECT_LT(max_abs(frame_unitary(fixed, 0.0).value_at(1.7) - identity(3)), 1e-14);
}

TEST(GaugePotential, StaticFrameIsZero) {
    const AncillaryFrame f(2, [](double) { return identity(2); }, [](double) { return ComplexMatrix::Zero(2, 2); });
    EXPECT_EQ(max_abs(gauge_potential(f, 0.5)), 0.0);
}

TEST(Property, GaugePotentialHermitianAndMatchesFiniteDifference) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_two_level(rng);
        const auto f = two_level_frame(p);
        const auto f3 = three_level_frame(random_three_level(rng));
        for (int k = 0; k < 5; ++k) {
            const double t = uniform(rng, -2, 2);
            const ComplexMatrix a = gauge_potential(f, t);
            const ComplexMatrix fd = I * f.basis_at(t).adjoint() * central_difference(f, t);
            EXPECT_LT(max_abs(a - fd), 1e-8);
            EXPECT_LT(hermiticity_residual(a), 1e-10);
            EXPECT_LT(hermiticity_residual(gauge_potential(f3, t)), 1e-10);
            EXPECT_LT(constraint_residual(f, t), 1e-8);
            EXPECT_LT(constraint_residual(f3, t), 1e-8);
        }
    }
}

TEST(GaugePotential, AlphaFreeTwoLevelPattern) {
    // alpha = 0: A = theta_dot * [[0, i], [-i, 0]] in the frame basis.
    const TwoLevelFrameParams p{wobble(0.7, 1.3, 0.2), ScalarFunction::constant(0.0)};
    const auto f = two_level_frame(p);
    const double t = 0.37;
    const ComplexMatrix a = gauge_potential(f, t);
    EXPECT_LT(std::abs(a(0, 1) - I * p.theta.rate(t)), 1e-14);
    EXPECT_LT(std::abs(a(1, 0) + I * p.theta.rate(t)), 1e-14);
    EXPECT_LT(std::abs(a(0, 0)) + std::abs(a(1, 1)), 1e-14);
}

TEST(FiniteDifferenceFrame, AgreesWithAnalytic) {
    std::mt19937_64 rng(29);
    const auto p = random_three_level(rng);
    const auto exact = three_level_frame(p);
    const auto fd = AncillaryFrame::from_basis(3, [exact](double t) { return exact.basis_at(t); });
    EXPECT_FALSE(fd.analytic_derivative());
    for (int k = 0; k < 10; ++k) {
        const double t = uniform(rng, -2, 2);
        EXPECT_LT(max_abs(fd.derivative_at(t) - exact.derivative_at(t)), 1e-8);
        EXPECT_LT(hermiticity_residual(gauge_potential(fd, t)), 1e-6);
    }
}

TEST(RotatedHamiltonian, StaticFrameAndZeroHamiltonian) {
    std::mt19937_64 rng(31);
    const ComplexMatrix u = random_unitary(rng, 3);
    const ComplexMatrix h = random_matrix(rng, 3);
    const AncillaryFrame fixed(3, [u](double) { return u; }, [](double) { return ComplexMatrix::Zero(3, 3); });
    EXPECT_LT(max_abs(rotated_hamiltonian(h, fixed, 0.8) - u.adjoint() * h * u), 1e-14);
    const auto moving = three_level_frame(random_three_level(rng));
    EXPECT_LT(max_abs(rotated_hamiltonian(ComplexMatrix::Zero(3, 3), moving, 0.8) + gauge_potential(moving, 0.8)),
              1e-15);
    EXPECT_THROW(rotated_hamiltonian(random_matrix(rng, 2), moving, 0.0), DimensionError);
}

TEST(Property, RotatedHamiltonianTwoRoutesAgree) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + trial % 2;
        const ComplexMatrix a = random_matrix(rng, n), b = random_matrix(rng, n);
        const auto h = TimeDependentOperator(n, [a, b](double t) { return ComplexMatrix(a + std::sin(t) * b); });
        const AncillaryFrame f = n == 2 ? two_level_frame(random_two_level(rng)) : three_level_frame(random_three_level(rng));
        const double t0 = uniform(rng, -1, 1), t = uniform(rng, -2, 2);
        EXPECT_LT(max_abs(rotated_hamiltonian(h, f, t) - rotated_hamiltonian_via_unitary(h, f, t0, t)), 1e-10);
    }
}

TEST(Triangularization, ScenarioACertificateAndPerturbation) {
    const ScenarioA s;
    const TwoLevelControls c = s.controls();
    const auto f = two_level_frame(s.frame);
    EXPECT_LT(upper_triangle_max(rotated_hamiltonian(two_level_hamiltonian(c), f, 0.7 * 2.0)), 1e-9);
    EXPECT_LT(triangularization_residual(two_level_hamiltonian(c), f, s.grid), 1e-9);
    TwoLevelControls bad = c;
    bad.omega = [om = c.omega](double t) { return 1.01 * om(t); };
    EXPECT_GT(triangularization_residual(two_level_hamiltonian(bad), f, s.grid), 1e-3);
}

TEST(Triangularization, DiagonalHamiltonianStaticFrame) {
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h.diagonal() << cplx(1, -0.2), cplx(0.3, 0.5), cplx(-2, 0);
    const AncillaryFrame f(3, [](double) { return identity(3); }, [](double) { return ComplexMatrix::Zero(3, 3); });
    EXPECT_EQ(triangularization_residual(TimeDependentOperator::constant(h), f, TimeGrid(0, 1, 0.1)), 0.0);
}

TEST(VonNeumann, EigenframeOfConstantHermitian) {
    std::mt19937_64 rng(41);
    const ComplexMatrix h = random_hermitian(rng, 3);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const ComplexMatrix w = es.eigenvectors();
    const AncillaryFrame f(3, [w](double) { return w; }, [](double) { return ComplexMatrix::Zero(3, 3); });
    EXPECT_LT(von_neumann_residual(TimeDependentOperator::constant(h), f, TimeGrid(0, 1, 0.1)), 1e-13);
}

TEST(VonNeumann, RejectsNonHermitian) {
    std::mt19937_64 rng(43);
    const AncillaryFrame f(2, [](double) { return identity(2); }, [](double) { return ComplexMatrix::Zero(2, 2); });
    EXPECT_THROW(von_neumann_residual(TimeDependentOperator::constant(random_matrix(rng, 2)), f, TimeGrid(0, 1, 0.1)),
                 HermiticityError);
}

TEST(VonNeumann, HermitianLimitOfScenarioAAndMisalignedFrame) {
    const ScenarioA s;
    const TwoLevelControls c = s.controls(0.0);
    const auto h = two_level_hamiltonian(c);
    const auto f = two_level_frame(s.frame);
    EXPECT_LT(von_neumann_residual(h, f, s.grid), 1e-9);
    EXPECT_LT(triangularization_residual(h, f, s.grid), 1e-9);

    std::mt19937_64 rng(47);
    const auto misaligned = two_level_frame(random_two_level(rng));
    EXPECT_GT(von_neumann_residual(h, misaligned, s.grid), 1e-3);
    EXPECT_GT(triangularization_residual(h, misaligned, s.grid), 1e-3);
}

// For Hermitian H: triangularization < eps  <=>  von Neumann < C eps,
// with eps = 1e-9 and C = 10, checked in both directions.
TEST(Property, HermitianEquivalenceBothDirections) {
    std::mt19937_64 rng(53);
    const double eps = 1e-9, C = 10.0;
    const TimeGrid g(0.0, 2.0, 0.01);
    for (int trial = 0; trial < 20; ++trial) {
        // Aligned: synthesized Hermitian drive for a random theta(t).
        const double a = uniform(rng, 0.1, 0.5), w = uniform(rng, 0.5, 1.5), c0 = uniform(rng, 0.2, 0.6);
        const TwoLevelFrameParams p{wobble(a, w, c0), ScalarFunction::constant(0.0)};
        TwoLevelDrive d;
        const auto controls = synthesize_two_level_general(p, d, g);
        const auto h = two_level_hamiltonian(controls);
        const auto f = two_level_frame(p);
        const double tri = triangularization_residual(h, f, g);
        const double vn = von_neumann_residual(h, f, g);
        EXPECT_EQ(tri < eps, vn < C * eps) << "aligned trial " << trial;
        EXPECT_LT(tri, eps);

        // Misaligned: the same drive seen from a frame that turns at another rate.
        // (A constant theta offset would still be exact: it commutes with the drive.)
        const TwoLevelFrameParams q{wobble(a * uniform(rng, 1.2, 1.8), w, c0), ScalarFunction::constant(0.0)};
        const auto g2 = two_level_frame(q);
        const double tri2 = triangularization_residual(h, g2, g);
        const double vn2 = von_neumann_residual(h, g2, g);
        EXPECT_EQ(tri2 < eps, vn2 < C * eps) << "misaligned trial " << trial;
        EXPECT_GT(tri2, eps);
    }
}
