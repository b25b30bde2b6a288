#pragma once

#include <functional>
#include <utility>

namespace nhqc {

// Real function of time carried together with its analytic derivative.
struct ScalarFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;

    double operator()(double t) const { return value(t); }
    double rate(double t) const { return derivative(t); }

    static ScalarFunction constant(double c) {
        return {[c](double) { return c; }, [](double) { return 0.0; }};
    }

    // slope * (t - anchor) + offset
    static ScalarFunction affine(double slope, double anchor, double offset = 0.0) {
        return {[=](double t) { return slope * (t - anchor) + offset; }, [slope](double) { return slope; }};
    }

    ScalarFunction scaled(double factor) const {
        return {[f = value, factor](double t) { return factor * f(t); },
                [d = derivative, factor](double t) { return factor * d(t); }};
    }
};

}  // namespace nhqc
