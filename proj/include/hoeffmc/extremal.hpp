#pragma once

// Eigenvalues of E^{f/2} P_c E^{f/2} for the Leon-Perron kernel P_c = cI + (1-c)Pi,
// the two-state extremal chain, and the comparison between them.

#include "hoeffmc/alpha.hpp"
#include "hoeffmc/chain.hpp"
#include "hoeffmc/errors.hpp"
#include "hoeffmc/linalg.hpp"
#include "hoeffmc/sim.hpp"
#include "hoeffmc/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace hoeffmc {

inline constexpr double kBetaMergeTol = 1e-12;

/// A function taking finitely many values beta_1 > ... > beta_k with pi-masses m_j.
class SimpleFunction {
public:
    SimpleFunction(std::vector<double> betas, std::vector<double> masses)
        : betas_(std::move(betas)), masses_(std::move(masses)) {
        if (betas_.empty() || betas_.size() != masses_.size()) {
            fail(ErrorKind::InvalidInput, "simple function needs matching, non-empty betas and masses");
        }
        for (std::size_t j = 0; j < betas_.size(); ++j) {
            if (!std::isfinite(betas_[j])) fail(ErrorKind::InvalidInput, "beta values must be finite");
            if (!(masses_[j] > 0.0)) fail(ErrorKind::InvalidInput, "masses must be positive");
            if (j > 0 && !(betas_[j] < betas_[j - 1])) fail(ErrorKind::InvalidInput, "betas must be strictly decreasing");
        }
        const double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
        if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::InvalidInput, "masses must sum to 1");
    }

    /// Collapses a state function to its distinct values; values within 1e-12 are merged.
    static SimpleFunction from_state_function(const Vector& values, const Vector& pi) {
        if (values.size() != pi.size() || values.size() == 0) {
            fail(ErrorKind::InvalidInput, "values and pi must have the same non-zero length");
        }
        std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return values(i) > values(j); });
        std::vector<double> betas, masses;
        for (auto i : order) {
            if (!betas.empty() && betas.back() - values(i) <= kBetaMergeTol) {
                masses.back() += pi(i);
            } else {
                betas.push_back(values(i));
                masses.push_back(pi(i));
            }
        }
        const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
        for (double& m : masses) m /= total;
        return SimpleFunction(std::move(betas), std::move(masses));
    }

    std::size_t k() const noexcept { return betas_.size(); }
    const std::vector<double>& betas() const noexcept { return betas_; }
    const std::vector<double>& masses() const noexcept { return masses_; }

private:
    std::vector<double> betas_;
    std::vector<double> masses_;
};

namespace detail {

inline void check_lp_coefficient(double c) {
    if (!(c >= 0.0 && c < 1.0)) fail(ErrorKind::InvalidInput, "Leon-Perron coefficient must lie in [0,1)");
}

}  // namespace detail

/// F(r) = sum_j (1-c) e^{beta_j} m_j / (r - c e^{beta_j}).
inline double f_of_r(const SimpleFunction& sf, double c, double r) {
    detail::check_lp_coefficient(c);
    const double scale = std::max(1.0, std::abs(r));
    double sum = 0.0;
    for (std::size_t j = 0; j < sf.k(); ++j) {
        const double e = std::exp(sf.betas()[j]);
        const double gap = r - c * e;
        if (std::abs(gap) <= 1e-14 * scale) fail(ErrorKind::PoleHit, "r coincides with the pole c*exp(beta)");
        sum += (1.0 - c) * e * sf.masses()[j] / gap;
    }
    return sum;
}

struct RootBracket {
    double lower = 0.0;  // c e^{beta_j}
    double upper = 0.0;  // c e^{beta_{j-1}}, +inf for the top root
};

/// Open intervals that each contain exactly one root of F(r) = 1 (c > 0).
inline std::vector<RootBracket> leon_perron_brackets(const SimpleFunction& sf, double c) {
    detail::check_lp_coefficient(c);
    std::vector<RootBracket> out;
    for (std::size_t j = 0; j < sf.k(); ++j) {
        RootBracket b;
        b.lower = c * std::exp(sf.betas()[j]);
        b.upper = j == 0 ? std::numeric_limits<double>::infinity() : c * std::exp(sf.betas()[j - 1]);
        out.push_back(b);
    }
    return out;
}

/// Roots r_1 > ... > r_k of F(r) = 1. Work is done in units of e^{beta_1}; root j is
/// located by bisection on its offset s = r - c e^{beta_j} from the left pole, where F
/// is strictly decreasing from +inf. For c = 0 the operator has rank one and the only
/// root is pi(e^f).
inline std::vector<double> leon_perron_eigenvalues(const SimpleFunction& sf, double c) {
    detail::check_lp_coefficient(c);
    const std::size_t k = sf.k();
    const double top = sf.betas()[0];
    std::vector<double> g(k);
    for (std::size_t j = 0; j < k; ++j) g[j] = std::exp(sf.betas()[j] - top);
    const double unit = std::exp(top);

    if (c == 0.0) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += g[j] * sf.masses()[j];
        return {unit * s};
    }

    std::vector<double> roots;
    roots.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        // Pole offsets c (g_j - g_i), exact zero for i = j.
        std::vector<double> shift(k);
        for (std::size_t i = 0; i < k; ++i) shift[i] = c * (g[j] - g[i]);
        auto F = [&](double s) {
            double sum = 0.0;
            for (std::size_t i = 0; i < k; ++i) sum += (1.0 - c) * g[i] * sf.masses()[i] / (s + shift[i]);
            return sum;
        };

        double lo = 0.0;
        // Top root: F(1) <= 1 because (1-c) g / (1 - c g) <= 1 for g <= 1.
        double hi = j == 0 ? 1.0 - c : c * (g[j - 1] - g[j]);
        if (!(hi > 0.0)) fail(ErrorKind::BracketFailure, "adjacent poles coincide after scaling");
        if (j == 0 && F(hi) > 1.0) {
            for (int expand = 0; expand < 64 && F(hi) > 1.0; ++expand) hi *= 2.0;
            if (F(hi) > 1.0) fail(ErrorKind::BracketFailure, "could not bracket the top root");
        }
        if (j == 0 && F(hi) == 1.0) {
            roots.push_back(unit * (c + hi));
            continue;
        }
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi) break;
            const double v = F(mid);
            if (!std::isfinite(v)) fail(ErrorKind::BracketFailure, "F is not finite inside the bracket");
            if (v > 1.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        double s = lo + 0.5 * (hi - lo);
        if (!(s > 0.0)) s = hi;
        const double residual = std::abs(F(s) - 1.0);
        if (!std::isfinite(residual)) fail(ErrorKind::BracketFailure, "root residual is not finite");
        roots.push_back(unit * (c * g[j] + s));
    }
    return roots;
}

/// |||E^{f/2} P_c E^{f/2}|||_pi, the largest root.
inline double lp_operator_norm(const SimpleFunction& sf, double c) { return leon_perron_eigenvalues(sf, c).front(); }

/// The chain on {a, b} with kernel lam I + (1 - lam) 1 (1-mu, mu).
class TwoStateSystem {
public:
    TwoStateSystem(double lam, double mu, double a, double b) : lam_(lam), mu_(mu), a_(a), b_(b) {
        if (!(lam_ >= 0.0 && lam_ < 1.0)) fail(ErrorKind::InvalidInput, "lambda must lie in [0,1)");
        if (!(mu_ > 0.0 && mu_ < 1.0)) fail(ErrorKind::InvalidInput, "mu must lie in (0,1)");
        if (!(a_ < b_)) fail(ErrorKind::InvalidInput, "two-state values need a < b");
    }

    double lambda() const noexcept { return lam_; }
    double mu() const noexcept { return mu_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    /// (lam + (1 - lam) mu) / (1 + lam).
    double p() const noexcept { return (lam_ + (1.0 - lam_) * mu_) / (1.0 + lam_); }
    /// Stationary mean (1 - mu) a + mu b.
    double mean() const noexcept { return (1.0 - mu_) * a_ + mu_ * b_; }

private:
    double lam_;
    double mu_;
    double a_;
    double b_;
};

/// Largest eigenvalue of E^{ty/2} Q E^{ty/2}, the larger root of
/// theta^2 - B theta + lam e^{t(a+b)} with B = (1+lam)[(1-p) e^{ta} + p e^{tb}].
inline double theta(const TwoStateSystem& ts, double t) {
    const double ea = std::exp(t * ts.a());
    const double eb = std::exp(t * ts.b());
    const double B = (1.0 + ts.lambda()) * ((1.0 - ts.p()) * ea + ts.p() * eb);
    const double prod = ts.lambda() * std::exp(t * (ts.a() + ts.b()));
    double disc = B * B - 4.0 * prod;
    if (disc < 0.0) {
        if (disc < -1e-12 * B * B) fail(ErrorKind::InvalidInput, "negative discriminant beyond roundoff");
        disc = 0.0;
    }
    return 0.5 * (B + std::sqrt(disc));
}

/// exp(t mu(y) + t^2/2 alpha(lam) (b-a)^2/4).
inline double theta_tilde(const TwoStateSystem& ts, double t) {
    const double w = ts.b() - ts.a();
    return std::exp(t * ts.mean() + 0.5 * t * t * alpha(ts.lambda()) * w * w / 4.0);
}

inline FiniteChain two_state_matrix(const TwoStateSystem& ts) {
    Vector pi(2);
    pi << 1.0 - ts.mu(), ts.mu();
    return leon_perron_kernel(pi, ts.lambda());
}

/// Recovers c from a kernel of the form cI + (1-c) 1 pi^T; InvalidInput otherwise.
inline double leon_perron_coefficient(const FiniteChain& chain) {
    const Eigen::Index d = chain.d();
    if (d == 1) return 0.0;
    const Vector& pi = chain.pi();
    const double c = 1.0 - chain.P()(1, 0) / pi(0);
    const Matrix expected = c * Matrix::Identity(d, d) + (1.0 - c) * projection_kernel(pi);
    if ((expected - chain.P()).cwiseAbs().maxCoeff() > 1e-10) {
        fail(ErrorKind::InvalidInput, "chain is not a Leon-Perron kernel");
    }
    return c;
}

struct ExtremalityGap {
    double lhs = 0.0;  // E_pi exp(t sum f(X_i)) under the Leon-Perron chain
    double rhs = 0.0;  // E_mu exp(t sum Y_i) under the matched two-state chain
    double c = 0.0;
    double mu = 0.0;
};

/// Both sides of the comparison between a Leon-Perron chain and its two-state extremal
/// chain on {a, b} with mu = (pi(f) - a) / (b - a), over n steps.
inline ExtremalityGap extremality_gap(const FiniteChain& chain, const StepFunction& f, int n, double t) {
    if (n < 1) fail(ErrorKind::InvalidInput, "need at least one step");
    if (f.size() != chain.d()) fail(ErrorKind::InvalidInput, "step function length differs from the state count");
    ExtremalityGap out;
    out.c = leon_perron_coefficient(chain);
    const double a = f.a();
    const double b = f.b();
    const auto steps = repeat_step(f, static_cast<std::size_t>(n));
    out.lhs = exact_mgf(chain, chain.pi(), steps, t);

    if (a == b) {
        out.rhs = std::exp(t * n * a);
        return out;
    }
    out.mu = std::clamp((f.mean(chain.pi()) - a) / (b - a), 0.0, 1.0);
    if (out.mu == 0.0 || out.mu == 1.0) {
        out.rhs = std::exp(t * n * (out.mu == 0.0 ? a : b));
        return out;
    }
    Vector pi2(2);
    pi2 << 1.0 - out.mu, out.mu;
    Vector y(2);
    y << a, b;
    const FiniteChain two = leon_perron_kernel(pi2, out.c);
    out.rhs = exact_mgf(two, pi2, repeat_step(StepFunction(y, a, b), static_cast<std::size_t>(n)), t);
    return out;
}

}  // namespace hoeffmc
