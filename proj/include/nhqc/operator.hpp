#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace nhqc {

// Which one-sided limit to take when t sits exactly on a piece boundary.
enum class Side { left, right };

// K x K matrix-valued function of time, optionally piecewise. Each piece is
// smooth on its closed interval; at shared boundaries the caller picks a side.
class TimeDependentOperator {
public:
    using Fn = std::function<ComplexMatrix(double)>;

    struct Piece {
        double begin;
        double end;
        Fn value;
        Fn derivative;  // may be empty
    };

    TimeDependentOperator(Eigen::Index dim, Fn value, Fn derivative = {}) : dim_(dim) {
        if (dim < 1) throw DimensionError("TimeDependentOperator: dim must be >= 1");
        if (!value) throw Error("TimeDependentOperator: empty value function");
        pieces_.push_back({-std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity(), std::move(value),
                           std::move(derivative)});
    }

    static TimeDependentOperator constant(const ComplexMatrix& m) {
        if (m.rows() != m.cols()) throw DimensionError("constant operator must be square");
        const Eigen::Index k = m.rows();
        return TimeDependentOperator(
            k, [m](double) { return m; }, [k](double) { return ComplexMatrix::Zero(k, k).eval(); });
    }

    // Pieces must be given in time order with matching endpoints.
    static TimeDependentOperator piecewise(Eigen::Index dim, std::vector<Piece> pieces) {
        if (pieces.empty()) throw Error("piecewise operator needs at least one piece");
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (!(pieces[i].end > pieces[i].begin)) throw Error("piecewise operator: empty piece");
            if (!pieces[i].value) throw Error("piecewise operator: empty value function");
            if (i > 0 && pieces[i].begin != pieces[i - 1].end)
                throw Error("piecewise operator: pieces are not contiguous");
        }
        TimeDependentOperator op(dim, pieces.front().value);
        op.pieces_ = std::move(pieces);
        return op;
    }

    // Piecewise operator made of whole operators restricted to [bounds[i], bounds[i+1]].
    static TimeDependentOperator concatenate(const std::vector<TimeDependentOperator>& parts,
                                             const std::vector<double>& bounds) {
        if (parts.empty() || bounds.size() != parts.size() + 1)
            throw Error("concatenate: need parts.size() + 1 bounds");
        std::vector<Piece> pieces;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].dim() != parts.front().dim()) throw DimensionError("concatenate: dims differ");
            auto shared = std::make_shared<TimeDependentOperator>(parts[i]);
            const double lo = bounds[i];
            const double hi = bounds[i + 1];
            Fn deriv;
            if (parts[i].has_derivative())
                deriv = [shared, lo, hi](double t) { return shared->derivative_at(t, side_inside(t, lo, hi)); };
            pieces.push_back({lo, hi,
                              [shared, lo, hi](double t) { return shared->value_at(t, side_inside(t, lo, hi)); },
                              std::move(deriv)});
        }
        return piecewise(parts.front().dim(), std::move(pieces));
    }

    Eigen::Index dim() const { return dim_; }
    std::size_t piece_count() const { return pieces_.size(); }

    ComplexMatrix value_at(double t, Side side = Side::right) const {
        ComplexMatrix m = piece_for(t, side).value(t);
        if (m.rows() != dim_ || m.cols() != dim_)
            throw DimensionError("TimeDependentOperator: sample has wrong shape");
        return m;
    }

    bool has_derivative() const {
        for (const auto& p : pieces_)
            if (!p.derivative) return false;
        return true;
    }

    ComplexMatrix derivative_at(double t, Side side = Side::right) const {
        const Piece& p = piece_for(t, side);
        if (!p.derivative) throw Error("TimeDependentOperator: no analytic derivative");
        return p.derivative(t);
    }

    // Pointwise Hermitian conjugate, t -> H(t)^dagger.
    TimeDependentOperator adjoint() const {
        TimeDependentOperator out = *this;
        for (auto& p : out.pieces_) {
            p.value = [f = p.value](double t) { return ComplexMatrix(f(t).adjoint()); };
            if (p.derivative) p.derivative = [f = p.derivative](double t) { return ComplexMatrix(f(t).adjoint()); };
        }
        return out;
    }

private:
    // Inside a restricted copy, stay on the interior side of its own bounds.
    static Side side_inside(double t, double lo, double hi) {
        if (t >= hi) return Side::left;
        if (t <= lo) return Side::right;
        return Side::right;
    }

    const Piece& piece_for(double t, Side side) const {
        if (pieces_.size() == 1) return pieces_.front();
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const Piece& p = pieces_[i];
            if (t < p.end) return p;
            if (t == p.end) {
                if (side == Side::left || i + 1 == pieces_.size()) return p;
                return pieces_[i + 1];
            }
        }
        return pieces_.back();
    }

    Eigen::Index dim_;
    std::vector<Piece> pieces_;
};

}  // namespace nhqc
