#pragma once

#include "hoeffmc/errors.hpp"

#include <algorithm>
#include <string>

namespace hoeffmc {

inline constexpr double kGapEpsilon = 1e-12;

/// Dependence penalty (1 + lam) / (1 - lam) applied to the classical Hoeffding proxy.
inline double alpha(double lam) {
    if (!(lam < 1.0 - kGapEpsilon)) {
        fail(ErrorKind::GapExhausted, "spectral quantity " + std::to_string(lam) + " leaves no gap");
    }
    return (1.0 + lam) / (1.0 - lam);
}

/// alpha(max(lam_r, 0)); right spectral quantities may be negative.
inline double alpha_right(double lam_r) { return alpha(std::max(lam_r, 0.0)); }

}  // namespace hoeffmc
