#pragma once

// Exact moment generating functions by matrix products, trajectory sampling,
// Monte Carlo tail estimates, asymptotic variance, and the lazy Gaussian chain
// whose sums admit no linear-in-n variance proxy.

#include "hoeffmc/chain.hpp"
#include "hoeffmc/errors.hpp"
#include "hoeffmc/linalg.hpp"
#include "hoeffmc/rng.hpp"
#include "hoeffmc/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace hoeffmc {

namespace detail {

inline void check_start(const Vector& start, Eigen::Index d) {
    if (start.size() != d) fail(ErrorKind::InvalidInput, "start vector has the wrong length");
    if ((start.array() < 0.0).any() || std::abs(start.sum() - 1.0) > 1e-12) {
        fail(ErrorKind::InvalidInput, "start vector is not a probability vector");
    }
}

inline void check_steps(std::span<const StepFunction> fs, Eigen::Index d) {
    if (fs.empty()) fail(ErrorKind::InvalidInput, "need at least one step function");
    for (const auto& f : fs) {
        if (f.size() != d) fail(ErrorKind::InvalidInput, "step function length differs from the state count");
    }
}

inline double log_sum_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(-std::abs(x - y)));
}

}  // namespace detail

/// log E_start[exp(t * sum_i f_i(X_i))] = log start^T E^{t f_1} prod_{i>=2} (P E^{t f_i}) 1,
/// evaluated right to left with a running log scale so that no intermediate overflows.
inline double exact_log_mgf(const Matrix& P, const Vector& start, std::span<const StepFunction> fs, double t) {
    detail::check_steps(fs, P.rows());
    detail::check_start(start, P.rows());

    auto scaled_exp = [t](const StepFunction& f, double& log_scale) {
        const Vector tf = t * f.values();
        const double shift = tf.maxCoeff();
        log_scale += shift;
        return Vector((tf.array() - shift).exp());
    };

    double log_scale = 0.0;
    Vector v = scaled_exp(fs.back(), log_scale);
    for (std::size_t i = fs.size() - 1; i-- > 0;) {
        const Vector w = P * v;
        v = scaled_exp(fs[i], log_scale).cwiseProduct(w);
        const double top = v.maxCoeff();
        v /= top;
        log_scale += std::log(top);
    }
    return std::log(start.dot(v)) + log_scale;
}

inline double exact_log_mgf(const FiniteChain& chain, const Vector& start, std::span<const StepFunction> fs, double t) {
    return exact_log_mgf(chain.P(), start, fs, t);
}

inline double exact_mgf(const FiniteChain& chain, const Vector& start, std::span<const StepFunction> fs, double t) {
    return std::exp(exact_log_mgf(chain, start, fs, t));
}

/// log E_start[exp(t * sum_i (f_i(X_i) - pi(f_i)))]; centering is always at the stationary means.
inline double centered_exact_log_mgf(const FiniteChain& chain, const Vector& start, std::span<const StepFunction> fs,
                                     double t) {
    double centre = 0.0;
    for (const auto& f : fs) centre += f.mean(chain.pi());
    return exact_log_mgf(chain, start, fs, t) - t * centre;
}

/// n copies of the same step function.
inline std::vector<StepFunction> repeat_step(const StepFunction& f, std::size_t n) {
    return std::vector<StepFunction>(n, f);
}

/// Law of X_{k+1} when X_1 ~ start.
inline Vector propagate(const FiniteChain& chain, Vector start, int steps) {
    for (int i = 0; i < steps; ++i) start = (start.transpose() * chain.P()).transpose();
    return start;
}

enum class StartKind { Stationary, Measure };

struct Trajectory {
    std::vector<int> states;
    std::uint64_t seed = 0;
    StartKind start = StartKind::Stationary;
};

/// Inverse-CDF sampler over the rows of a kernel.
class PathSampler {
public:
    explicit PathSampler(const Matrix& P) : cumulative_(P.rows(), std::vector<double>(static_cast<std::size_t>(P.cols()))) {
        for (Eigen::Index i = 0; i < P.rows(); ++i) cumulative_[static_cast<std::size_t>(i)] = cdf(P.row(i).transpose());
    }

    static std::vector<double> cdf(const Vector& probs) {
        std::vector<double> c(static_cast<std::size_t>(probs.size()));
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            acc += probs(static_cast<Eigen::Index>(j));
            c[j] = acc;
            if (probs(static_cast<Eigen::Index>(j)) > 0.0) last_positive = j;
        }
        for (std::size_t j = last_positive; j < c.size(); ++j) c[j] = 1.0;
        return c;
    }

    static int draw(const std::vector<double>& cdf, double u) {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    }

    template <class Gen>
    int step(int from, Gen& gen) const {
        return draw(cumulative_[static_cast<std::size_t>(from)], uniform01(gen));
    }

    template <class Gen>
    void fill(const std::vector<double>& start_cdf, Gen& gen, std::vector<int>& out) const {
        if (out.empty()) return;
        out[0] = draw(start_cdf, uniform01(gen));
        for (std::size_t i = 1; i < out.size(); ++i) out[i] = step(out[i - 1], gen);
    }

private:
    std::vector<std::vector<double>> cumulative_;
};

template <class Gen>
Trajectory sample_path(const FiniteChain& chain, const Vector& start, int n, Gen& gen) {
    if (n < 1) fail(ErrorKind::InvalidInput, "path length must be at least 1");
    detail::check_start(start, chain.d());
    Trajectory tr;
    tr.start = (start - chain.pi()).cwiseAbs().maxCoeff() == 0.0 ? StartKind::Stationary : StartKind::Measure;
    tr.states.resize(static_cast<std::size_t>(n));
    PathSampler(chain.P()).fill(PathSampler::cdf(start), gen, tr.states);
    return tr;
}

inline Trajectory sample_path(const FiniteChain& chain, const Vector& start, int n, std::uint64_t seed) {
    auto gen = replicate_stream(seed, 0);
    Trajectory tr = sample_path(chain, start, n, gen);
    tr.seed = seed;
    return tr;
}

struct TailEstimate {
    double phat = 0.0;
    double wilson_halfwidth = 0.0;
    double wilson_center = 0.0;
    long exceedances = 0;
    long reps = 0;
};

/// 95% Wilson score interval for a binomial proportion.
inline TailEstimate wilson_interval(long successes, long trials) {
    constexpr double z = 1.959963984540054;
    TailEstimate e;
    e.exceedances = successes;
    e.reps = trials;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    e.phat = p;
    e.wilson_center = (p + z * z / (2.0 * n)) / denom;
    e.wilson_halfwidth = z / denom * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    return e;
}

/// Fraction of replicates with |sum f_i(X_i) - sum pi(f_i)| > eps.
inline TailEstimate empirical_tail(const FiniteChain& chain, const Vector& start, std::span<const StepFunction> fs,
                                   double eps, long reps, std::uint64_t seed) {
    if (reps < 100) fail(ErrorKind::InvalidInput, "empirical tail needs at least 100 replicates");
    detail::check_steps(fs, chain.d());
    detail::check_start(start, chain.d());
    double centre = 0.0;
    for (const auto& f : fs) centre += f.mean(chain.pi());

    const PathSampler sampler(chain.P());
    const auto start_cdf = PathSampler::cdf(start);
    std::vector<int> path(fs.size());
    long hits = 0;
    for (long r = 0; r < reps; ++r) {
        auto gen = replicate_stream(seed, static_cast<std::uint64_t>(r));
        sampler.fill(start_cdf, gen, path);
        double sum = 0.0;
        for (std::size_t i = 0; i < path.size(); ++i) sum += fs[i](path[i]);
        if (std::abs(sum - centre) > eps) ++hits;
    }
    return wilson_interval(hits, reps);
}

struct MonteCarloMgf {
    double mean = 0.0;
    double standard_error = 0.0;
};

/// Sample mean of exp(t * sum f_i(X_i)) over independent replicates.
inline MonteCarloMgf monte_carlo_mgf(const FiniteChain& chain, const Vector& start, std::span<const StepFunction> fs,
                                     double t, long reps, std::uint64_t seed) {
    if (reps < 2) fail(ErrorKind::InvalidInput, "need at least two replicates");
    detail::check_steps(fs, chain.d());
    detail::check_start(start, chain.d());
    const PathSampler sampler(chain.P());
    const auto start_cdf = PathSampler::cdf(start);
    std::vector<int> path(fs.size());
    std::vector<double> values(static_cast<std::size_t>(reps));
    for (long r = 0; r < reps; ++r) {
        auto gen = replicate_stream(seed, static_cast<std::uint64_t>(r));
        sampler.fill(start_cdf, gen, path);
        double sum = 0.0;
        for (std::size_t i = 0; i < path.size(); ++i) sum += fs[i](path[i]);
        values[static_cast<std::size_t>(r)] = std::exp(t * sum);
    }
    MonteCarloMgf out;
    out.mean = pairwise_sum(values) / static_cast<double>(reps);
    for (double& v : values) v = (v - out.mean) * (v - out.mean);
    const double var = pairwise_sum(values) / static_cast<double>(reps - 1);
    out.standard_error = std::sqrt(var / static_cast<double>(reps));
    return out;
}

/// lim Var(n^{-1/2} sum f(X_i)) = <f0, (2 (I - (P - Pi))^{-1} - I) f0>_pi with f0 = f - pi(f).
inline double asymptotic_variance(const FiniteChain& chain, const StepFunction& f) {
    const Vector& pi = chain.pi();
    const Eigen::Index d = chain.d();
    if (f.size() != d) fail(ErrorKind::InvalidInput, "step function length differs from the state count");
    const Vector f0 = f.values().array() - f.mean(pi);
    const Matrix A = Matrix::Identity(d, d) - chain.P() + projection_kernel(pi);
    Eigen::FullPivLU<Matrix> lu(A);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) fail(ErrorKind::GapExhausted, "I - (P - Pi) is singular; the chain has no spectral gap");
    const Vector x = lu.solve(f0);
    return 2.0 * pi_inner(pi, f0, x) - pi_inner(pi, f0, f0);
}

struct LazyGaussianConfig {
    double lam = 0.0;
    int n = 1;
    double t = 0.0;
};

inline constexpr int kLazyGaussianMaxHorizon = 60;

/// log E[exp(t sum_{i<=n} X_i)] for the chain that keeps its N(0,1) state with
/// probability lam and refreshes otherwise. Conditional on the refresh pattern the
/// sum is Gaussian with variance sum of squared run lengths, so the mgf is
/// E[exp(t^2/2 * sum_runs len^2)], computed by a forward pass over (position, current run length).
inline double lazy_gaussian_log_mgf(const LazyGaussianConfig& cfg) {
    if (!(cfg.lam >= 0.0 && cfg.lam < 1.0)) fail(ErrorKind::InvalidInput, "lam must lie in [0, 1)");
    if (cfg.n < 1) fail(ErrorKind::InvalidInput, "horizon must be at least 1");
    if (cfg.n > kLazyGaussianMaxHorizon) {
        fail(ErrorKind::HorizonTooLarge, "horizon " + std::to_string(cfg.n) + " exceeds " +
                                             std::to_string(kLazyGaussianMaxHorizon));
    }
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    const double half_t2 = 0.5 * cfg.t * cfg.t;
    const double log_stay = cfg.lam > 0.0 ? std::log(cfg.lam) : neg_inf;
    const double log_refresh = std::log1p(-cfg.lam);
    const auto n = static_cast<std::size_t>(cfg.n);

    // log_weight[len]: log of the probability-weighted closed-run mass with the open run of length len.
    std::vector<double> log_weight(n + 1, neg_inf), next(n + 1, neg_inf);
    log_weight[1] = 0.0;
    for (std::size_t i = 2; i <= n; ++i) {
        std::fill(next.begin(), next.end(), neg_inf);
        double closed = neg_inf;
        for (std::size_t len = 1; len < i; ++len) {
            if (log_weight[len] == neg_inf) continue;
            next[len + 1] = log_weight[len] + log_stay;
            closed = detail::log_sum_exp(closed, log_weight[len] + half_t2 * static_cast<double>(len * len));
        }
        next[1] = closed + log_refresh;
        std::swap(log_weight, next);
    }
    double total = neg_inf;
    for (std::size_t len = 1; len <= n; ++len) {
        if (log_weight[len] == neg_inf) continue;
        total = detail::log_sum_exp(total, log_weight[len] + half_t2 * static_cast<double>(len * len));
    }
    return total;
}

struct WitnessRow {
    int n = 0;
    double log_mgf = 0.0;
    double log_mgf_per_n = 0.0;
    /// 2 log_mgf / (n t^2): the smallest per-step proxy consistent with this n.
    double implied_alpha = 0.0;
    /// Same quantity from the single-run lower bound lam^n exp(t^2 n^2 / 2).
    double implied_alpha_lower = 0.0;
};

struct NoProxyWitness {
    std::vector<WitnessRow> rows;
    /// First row index from which log_mgf / n is strictly increasing to the end of the grid;
    /// rows.size() when the tail is not increasing.
    std::size_t increasing_from = 0;
};

inline NoProxyWitness no_proxy_witness(double lam, double t, std::span<const int> n_grid) {
    if (t == 0.0) fail(ErrorKind::InvalidInput, "t must be non-zero");
    NoProxyWitness w;
    for (int n : n_grid) {
        WitnessRow row;
        row.n = n;
        row.log_mgf = lazy_gaussian_log_mgf({lam, n, t});
        row.log_mgf_per_n = row.log_mgf / n;
        row.implied_alpha = 2.0 * row.log_mgf / (n * t * t);
        row.implied_alpha_lower = lam > 0.0 ? static_cast<double>(n) + 2.0 * std::log(lam) / (t * t)
                                            : -std::numeric_limits<double>::infinity();
        w.rows.push_back(row);
    }
    w.increasing_from = w.rows.empty() ? 0 : w.rows.size() - 1;
    while (w.increasing_from > 0 &&
           w.rows[w.increasing_from - 1].log_mgf_per_n < w.rows[w.increasing_from].log_mgf_per_n) {
        --w.increasing_from;
    }
    if (w.rows.size() >= 2 && w.increasing_from == w.rows.size() - 1) w.increasing_from = w.rows.size();
    return w;
}

}  // namespace hoeffmc
