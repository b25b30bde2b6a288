#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nhqc {

// Uniform grid on [t0, tf]. Stage boundaries are interior times that must land
// on grid points; integration never evaluates a stage across its boundary.
class TimeGrid {
public:
    TimeGrid(double t0, double tf, double dt, std::vector<double> stage_boundaries = {})
        : t0_(t0), tf_(tf), dt_(dt) {
        if (!std::isfinite(t0) || !std::isfinite(tf) || !(tf > t0))
            throw GridError("TimeGrid: require finite tf > t0");
        if (!std::isfinite(dt) || !(dt > 0.0)) throw GridError("TimeGrid: dt must be positive");
        steps_ = snap_to_steps(tf - t0, "tf - t0");
        dt_ = (tf - t0) / static_cast<double>(steps_);

        std::sort(stage_boundaries.begin(), stage_boundaries.end());
        stage_starts_.push_back(0);
        for (double b : stage_boundaries) {
            if (!(b > t0) || !(b < tf))
                throw GridError("TimeGrid: stage boundary " + std::to_string(b) + " outside (t0, tf)");
            const std::size_t idx = snap_to_steps(b - t0, "stage boundary offset");
            if (idx != stage_starts_.back()) stage_starts_.push_back(idx);
        }
        stage_starts_.push_back(steps_);
    }

    double t0() const { return t0_; }
    double tf() const { return tf_; }
    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    std::size_t size() const { return steps_ + 1; }

    double at(std::size_t i) const {
        if (i == steps_) return tf_;
        return t0_ + (tf_ - t0_) * static_cast<double>(i) / static_cast<double>(steps_);
    }

    std::vector<double> points() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i);
        return out;
    }

    std::size_t stage_count() const { return stage_starts_.size() - 1; }
    std::size_t stage_begin(std::size_t s) const { return stage_starts_.at(s); }
    std::size_t stage_end(std::size_t s) const { return stage_starts_.at(s + 1); }

    std::vector<double> stage_boundaries() const {
        std::vector<double> out;
        for (std::size_t s = 1; s + 1 < stage_starts_.size(); ++s) out.push_back(at(stage_starts_[s]));
        return out;
    }

    // Stage that owns the step [t_i, t_{i+1}].
    std::size_t stage_of_step(std::size_t i) const {
        auto it = std::upper_bound(stage_starts_.begin(), stage_starts_.end(), i);
        return static_cast<std::size_t>(std::distance(stage_starts_.begin(), it)) - 1;
    }

    // Grid with the same spacing restricted to stage s.
    TimeGrid stage_grid(std::size_t s) const {
        return TimeGrid(at(stage_begin(s)), at(stage_end(s)), dt_);
    }

    // Same span and boundaries with the step halved.
    TimeGrid refined() const { return TimeGrid(t0_, tf_, dt_ / 2.0, stage_boundaries()); }

private:
    std::size_t snap_to_steps(double span, const char* what) const {
        const double ratio = span / dt_;
        const double rounded = std::round(ratio);
        if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-7 * std::max(1.0, rounded))
            throw GridError(std::string("TimeGrid: dt does not divide ") + what);
        return static_cast<std::size_t>(rounded);
    }

    double t0_;
    double tf_;
    double dt_;
    std::size_t steps_ = 0;
    std::vector<std::size_t> stage_starts_;
};

}  // namespace nhqc
