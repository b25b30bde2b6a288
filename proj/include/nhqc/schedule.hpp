#pragma once

#include <array>
#include <string>

#include "errors.hpp"
#include "linalg.hpp"
#include "scalar_function.hpp"

namespace nhqc {

enum class Direction { clockwise, counterclockwise };

// ket: last frame vector under H. bra: first frame vector under H^dagger.
enum class Passage { ket, bra };

inline const char* to_string(Direction d) { return d == Direction::clockwise ? "cw" : "ccw"; }
inline const char* to_string(Passage p) { return p == Passage::ket ? "ket" : "bra"; }

// One 2T-long stage of a cyclic loop. theta and phi_mix are affine on
// [begin, end]; xi_e carries the stage's gain/loss assignment for |e>.
struct StagePiece {
    double begin = 0.0;
    double end = 0.0;
    ScalarFunction theta;
    ScalarFunction phi_mix;
    Passage passage = Passage::ket;
    double xi_e = pi / 2.0;
};

struct StageSchedule {
    double T = 1.0;
    int loop = 1;
    Direction direction = Direction::clockwise;
    std::array<StagePiece, 3> stages;
};

namespace detail {
inline void check_schedule_args(int k, double T) {
    if (k < 1) throw ConfigError("schedule: loop index must be >= 1, got " + std::to_string(k));
    if (!(T > 0.0)) throw ConfigError("schedule: T must be positive");
}
}  // namespace detail

// Loop k of |0> -> |e> -> |1> -> |0>. Stages 1-2 ride |mu_3> under H, stage 3
// rides |mu_1> under H^dagger; |e> is lossy during stage 2.
inline StageSchedule clockwise_schedule(int k, double T) {
    detail::check_schedule_args(k, T);
    const double w = pi / (4.0 * T);
    const double start = 6.0 * (k - 1) * T;
    StageSchedule s{T, k, Direction::clockwise, {}};
    const ScalarFunction th1 = ScalarFunction::affine(w, 2.0 * (3 * k - 2) * T);
    const ScalarFunction th2 = ScalarFunction::affine(w, 2.0 * (3 * k - 1) * T);
    const ScalarFunction th3 = ScalarFunction::affine(w, 2.0 * (3 * k - 2) * T);
    s.stages[0] = {start, start + 2.0 * T, th1, th1, Passage::ket, pi / 2.0};
    s.stages[1] = {start + 2.0 * T, start + 4.0 * T, th2, ScalarFunction::affine(w, 2.0 * (3 * k - 1) * T, -pi / 2.0),
                   Passage::ket, -pi / 2.0};
    s.stages[2] = {start + 4.0 * T, start + 6.0 * T, th3, ScalarFunction::affine(w, 2.0 * (3 * k - 2) * T, pi / 2.0),
                   Passage::bra, pi / 2.0};
    return s;
}

// Loop k of |0> -> |1> -> |e> -> |0>. Stage 1 rides |mu_1> under H^dagger,
// stages 2-3 ride |mu_3> under H.
inline StageSchedule counterclockwise_schedule(int k, double T) {
    detail::check_schedule_args(k, T);
    const double w = pi / (4.0 * T);
    const double start = 6.0 * (k - 1) * T;
    StageSchedule s{T, k, Direction::counterclockwise, {}};
    const double a1 = 6.0 * (k - 1) * T;
    const double a2 = 2.0 * (3 * k - 2) * T;
    const double a3 = 2.0 * (3 * k - 1) * T;
    // phi = -theta + offset  =>  slope +w about the same anchor.
    s.stages[0] = {start, start + 2.0 * T, ScalarFunction::affine(-w, a1), ScalarFunction::affine(w, a1),
                   Passage::bra, pi / 2.0};
    s.stages[1] = {start + 2.0 * T, start + 4.0 * T, ScalarFunction::affine(-w, a2),
                   ScalarFunction::affine(w, a2, -pi / 2.0), Passage::ket, -pi / 2.0};
    s.stages[2] = {start + 4.0 * T, start + 6.0 * T, ScalarFunction::affine(-w, a3), ScalarFunction::affine(w, a3, pi),
                   Passage::ket, pi / 2.0};
    return s;
}

inline StageSchedule cyclic_schedule(Direction d, int k, double T) {
    return d == Direction::clockwise ? clockwise_schedule(k, T) : counterclockwise_schedule(k, T);
}

}  // namespace nhqc
