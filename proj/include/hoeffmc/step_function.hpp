#pragma once

#include "hoeffmc/errors.hpp"
#include "hoeffmc/linalg.hpp"

#include <string>
#include <utility>

namespace hoeffmc {

/// A real function on the states of a finite chain with a declared range [a, b].
class StepFunction {
public:
    StepFunction(Vector values, double a, double b) : values_(std::move(values)), a_(a), b_(b) {
        if (values_.size() == 0) fail(ErrorKind::InvalidInput, "step function has no values");
        if (!(a_ <= b_)) fail(ErrorKind::InvalidInput, "declared range has a > b");
        if (values_.minCoeff() < a_ || values_.maxCoeff() > b_) {
            fail(ErrorKind::InvalidInput, "values leave the declared range [" + std::to_string(a_) + ", " +
                                              std::to_string(b_) + "]");
        }
    }

    /// Range set to [min, max] of the values.
    static StepFunction tight(Vector values) {
        const double lo = values.size() ? values.minCoeff() : 0.0;
        const double hi = values.size() ? values.maxCoeff() : 0.0;
        return StepFunction(std::move(values), lo, hi);
    }

    const Vector& values() const noexcept { return values_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double width() const noexcept { return b_ - a_; }
    Eigen::Index size() const noexcept { return values_.size(); }
    double operator()(Eigen::Index state) const { return values_(state); }

    /// pi(f).
    double mean(const Vector& pi) const { return pi.dot(values_); }

private:
    Vector values_;
    double a_;
    double b_;
};

}  // namespace hoeffmc
