#pragma once

// Statistical learning with Markov-dependent samples at desk scale: least squares,
// the lasso restricted-eigenvalue check, thresholded covariance, respondent-driven
// sampling on graphs, and UCB with Markovian rewards.

#include "hoeffmc/alpha.hpp"
#include "hoeffmc/chain.hpp"
#include "hoeffmc/errors.hpp"
#include "hoeffmc/linalg.hpp"
#include "hoeffmc/rng.hpp"
#include "hoeffmc/sim.hpp"
#include "hoeffmc/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hoeffmc {

/// d_feat bounded features on the states of a chain; row x of values() is f(x)'.
class FeatureMap {
public:
    FeatureMap(Matrix values, bool centered) : values_(std::move(values)), centered_(centered) {
        if (values_.rows() < 1 || values_.cols() < 1) fail(ErrorKind::InvalidInput, "feature map is empty");
        if (!values_.allFinite() || values_.cwiseAbs().maxCoeff() > 1.0) {
            fail(ErrorKind::InvalidInput, "features must take values in [-1, 1]");
        }
    }

    Eigen::Index states() const noexcept { return values_.rows(); }
    Eigen::Index dim() const noexcept { return values_.cols(); }
    const Matrix& values() const noexcept { return values_; }
    bool centered() const noexcept { return centered_; }
    StepFunction column(Eigen::Index j) const { return StepFunction(values_.col(j), -1.0, 1.0); }

    /// Sigma = sum_x pi(x) f(x) f(x)'.
    Matrix sigma(const Vector& pi) const {
        check_pi(pi);
        return values_.transpose() * pi.asDiagonal() * values_;
    }

    /// Sigma-hat from state visit counts: sum_x (counts_x / n) f(x) f(x)'.
    Matrix empirical_sigma(const std::vector<long>& counts, long n) const {
        Vector w(states());
        for (Eigen::Index x = 0; x < states(); ++x) w(x) = static_cast<double>(counts[static_cast<std::size_t>(x)]) / n;
        return values_.transpose() * w.asDiagonal() * values_;
    }

    void check_pi(const Vector& pi) const {
        if (pi.size() != states()) fail(ErrorKind::InvalidInput, "feature map and chain disagree on the state count");
    }

private:
    Matrix values_;
    bool centered_;
};

/// Seeded dictionary: uniform entries on [-1, 1]; with `centered` each column is shifted
/// by its pi-mean. Columns are rescaled to sup-norm 1.
inline FeatureMap random_feature_map(const Vector& pi, Eigen::Index d_feat, std::uint64_t seed, bool centered) {
    if (d_feat < 1) fail(ErrorKind::InvalidInput, "need at least one feature");
    auto gen = replicate_stream(seed, 0);
    Matrix v(pi.size(), d_feat);
    for (Eigen::Index j = 0; j < d_feat; ++j) {
        for (Eigen::Index x = 0; x < pi.size(); ++x) v(x, j) = 2.0 * uniform01(gen) - 1.0;
    }
    for (Eigen::Index j = 0; j < d_feat; ++j) {
        if (centered) v.col(j).array() -= pi.dot(v.col(j));
        const double top = v.col(j).cwiseAbs().maxCoeff();
        if (top > 0.0) v.col(j) /= top;
    }
    return FeatureMap(std::move(v), centered);
}

/// Differences of adjacent indicators, f_j = 1{x = j} - 1{x = j+1} on d_feat + 1 states.
/// Under the uniform law they are centered and Sigma is tridiagonal.
inline FeatureMap banded_feature_map(Eigen::Index d_feat) {
    if (d_feat < 1) fail(ErrorKind::InvalidInput, "need at least one feature");
    Matrix v = Matrix::Zero(d_feat + 1, d_feat);
    for (Eigen::Index j = 0; j < d_feat; ++j) {
        v(j, j) = 1.0;
        v(j + 1, j) = -1.0;
    }
    return FeatureMap(std::move(v), true);
}

namespace detail {

inline std::vector<long> visit_counts(const FiniteChain& chain, long n, std::uint64_t seed, std::uint64_t stream) {
    if (n < 1) fail(ErrorKind::InvalidInput, "need at least one sample");
    const PathSampler sampler(chain.P());
    auto gen = replicate_stream(seed, stream);
    std::vector<long> counts(static_cast<std::size_t>(chain.d()), 0);
    int x = PathSampler::draw(PathSampler::cdf(chain.pi()), uniform01(gen));
    ++counts[static_cast<std::size_t>(x)];
    for (long i = 1; i < n; ++i) {
        x = sampler.step(x, gen);
        ++counts[static_cast<std::size_t>(x)];
    }
    return counts;
}

inline double min_eigenvalue(const Matrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(S), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// ||Sigma^{-1}||; SingularSigma when Sigma is not positive definite.
inline double inverse_norm(const Matrix& sigma) {
    const double lo = min_eigenvalue(sigma);
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if (!(lo > 1e-12 * scale)) fail(ErrorKind::SingularSigma, "Sigma is not positive definite");
    return 1.0 / lo;
}

inline double log_d(Eigen::Index d) { return std::log(static_cast<double>(d)); }

}  // namespace detail

/// P(eps_n >= eps) <= 2 d^2 exp(-n eps^2 / (2 alpha(lam_r v 0))).
inline double epsilon_n_tail(double lam_r, long d_feat, long n, double eps) {
    if (d_feat < 1 || n < 1) fail(ErrorKind::InvalidInput, "d_feat and n must be positive");
    const double d = static_cast<double>(d_feat);
    return 2.0 * d * d * std::exp(-static_cast<double>(n) * eps * eps / (2.0 * alpha_right(lam_r)));
}

/// The eps at which epsilon_n_tail equals delta.
inline double epsilon_n_quantile(double lam_r, long d_feat, long n, double delta) {
    const double d = static_cast<double>(d_feat);
    return std::sqrt(2.0 * alpha_right(lam_r) * std::log(2.0 * d * d / delta) / static_cast<double>(n));
}

/// max_jk |Sigma-hat_jk - Sigma_jk|.
inline double epsilon_n(const Matrix& sigma_hat, const Matrix& sigma) {
    return (sigma_hat - sigma).cwiseAbs().maxCoeff();
}

/// ||S1^{-1}||^2 ||S1 - S2|| / (1 - ||S1^{-1}|| ||S1 - S2||), spectral norms.
inline double inverse_perturbation_bound(const Matrix& S1, const Matrix& S2) {
    if (S1.rows() != S1.cols() || S1.rows() != S2.rows() || S2.rows() != S2.cols()) {
        fail(ErrorKind::InvalidInput, "matrices must be square and of equal size");
    }
    Eigen::FullPivLU<Matrix> lu(S1);
    if (!lu.isInvertible()) fail(ErrorKind::SingularSigma, "S1 is singular");
    const double inv = spectral_norm(lu.inverse());
    const double diff = spectral_norm(S1 - S2);
    if (!(inv * diff < 1.0)) fail(ErrorKind::PerturbationTooLarge, "||S1^-1|| ||S1 - S2|| must be below 1");
    return inv * inv * diff / (1.0 - inv * diff);
}

struct OlsResult {
    double err = 0.0;
    double bound = 0.0;
    long n_min = 0;
    double eps_n = 0.0;
    double alpha = 1.0;
    double sigma_inv_norm = 0.0;
    bool pass = false;
};

/// n >= 2 d^2 alpha ||Sigma^{-1}||^2 log(d^2 / delta) / (1 - eta)^2; at eta = 1/2 this is
/// 8 alpha d^2 ||Sigma^{-1}||^2 (log(1/delta) + 2 log d).
inline long ols_min_samples(double alpha_value, Eigen::Index d_feat, double sigma_inv_norm, double delta,
                            double eta = 0.5) {
    const double d = static_cast<double>(d_feat);
    const double raw = 2.0 * d * d * alpha_value * sigma_inv_norm * sigma_inv_norm *
                       (std::log(1.0 / delta) + 2.0 * std::log(d)) / ((1.0 - eta) * (1.0 - eta));
    return std::max<long>(1, static_cast<long>(std::ceil(raw)));
}

/// sigma ||Sigma^{-1}|| sqrt(2 d log(d / delta) / n) / eta.
inline double ols_error_bound(double sigma, Eigen::Index d_feat, double sigma_inv_norm, long n, double delta,
                              double eta = 0.5) {
    const double d = static_cast<double>(d_feat);
    return sigma * sigma_inv_norm *
           std::sqrt(2.0 * d * (std::log(1.0 / delta) + std::log(d)) / static_cast<double>(n)) / eta;
}

/// Simulates a stationary design chain with Gaussian noise and compares ||beta-hat - beta*||
/// against the bound that holds with probability at least 1 - 4 delta.
inline OlsResult ols_experiment(const FiniteChain& chain, const FeatureMap& fmap, const Vector& beta_star, double sigma,
                                long n, double delta, std::uint64_t seed, double eta = 0.5) {
    fmap.check_pi(chain.pi());
    if (beta_star.size() != fmap.dim()) fail(ErrorKind::InvalidInput, "beta* length differs from the feature count");
    if (!(sigma >= 0.0)) fail(ErrorKind::InvalidInput, "noise level must be non-negative");
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::InvalidInput, "delta must lie in (0,1)");
    if (!(eta > 0.0 && eta < 1.0)) fail(ErrorKind::InvalidInput, "eta must lie in (0,1)");

    const Matrix sig = fmap.sigma(chain.pi());
    OlsResult r;
    r.sigma_inv_norm = detail::inverse_norm(sig);
    r.alpha = alpha_right(right_lambda(chain));
    r.n_min = ols_min_samples(r.alpha, fmap.dim(), r.sigma_inv_norm, delta, eta);
    if (n < r.n_min) {
        fail(ErrorKind::SampleTooSmall, "n = " + std::to_string(n) + " is below n_min = " + std::to_string(r.n_min));
    }
    r.bound = ols_error_bound(sigma, fmap.dim(), r.sigma_inv_norm, n, delta, eta);

    const PathSampler sampler(chain.P());
    auto path_gen = replicate_stream(seed, 0);
    auto noise_gen = replicate_stream(seed, 1);
    const Matrix& F = fmap.values();
    Vector fty = Vector::Zero(fmap.dim());
    std::vector<long> counts(static_cast<std::size_t>(chain.d()), 0);
    int x = PathSampler::draw(PathSampler::cdf(chain.pi()), uniform01(path_gen));
    for (long i = 0; i < n; ++i) {
        if (i > 0) x = sampler.step(x, path_gen);
        ++counts[static_cast<std::size_t>(x)];
        const Vector f = F.row(x).transpose();
        const double y = f.dot(beta_star) + sigma * standard_normal(noise_gen);
        fty += y * f;
    }
    const Matrix gram = fmap.empirical_sigma(counts, n);
    fty /= static_cast<double>(n);
    r.eps_n = epsilon_n(gram, sig);
    Eigen::FullPivLU<Matrix> lu(gram);
    if (lu.isInvertible()) {
        r.err = (lu.solve(fty) - beta_star).norm();
    } else {
        r.err = std::numeric_limits<double>::infinity();
    }
    r.pass = r.err <= r.bound;
    return r;
}

struct LassoCheck {
    double kappa = 0.0;
    bool feasible = false;
    double lambda_min = 0.0;  // ||Sigma^{-1}||^{-1}
    /// 16 s sqrt(2 (2 + delta) alpha log d / n)
    double deflation = 0.0;
    /// sqrt(2 (2 + delta) alpha log d / n), the level eps_n stays below w.p. 1 - 2 d^{-delta}
    double eps_level = 0.0;
    double alpha = 1.0;
};

inline double lasso_eps_level(double alpha_value, Eigen::Index d_feat, double delta, long n) {
    return std::sqrt(2.0 * (2.0 + delta) * alpha_value * detail::log_d(d_feat) / static_cast<double>(n));
}

/// Restricted-eigenvalue constant for the Markov design; no lasso solve is performed.
inline LassoCheck lasso_re_check(const FiniteChain& chain, const FeatureMap& fmap, int s, double delta, long n) {
    fmap.check_pi(chain.pi());
    if (s < 1) fail(ErrorKind::InvalidInput, "sparsity s must be at least 1");
    if (n < 1) fail(ErrorKind::InvalidInput, "n must be at least 1");
    LassoCheck out;
    out.lambda_min = 1.0 / detail::inverse_norm(fmap.sigma(chain.pi()));
    out.alpha = alpha_right(right_lambda(chain));
    out.eps_level = lasso_eps_level(out.alpha, fmap.dim(), delta, n);
    out.deflation = 16.0 * s * out.eps_level;
    out.kappa = out.lambda_min - out.deflation;
    out.feasible = out.deflation / out.lambda_min < 1.0;
    return out;
}

/// T_t(M): keeps entries with |M_jk| > t.
inline Matrix threshold_cov(const Matrix& M, double t) {
    if (!(t >= 0.0)) fail(ErrorKind::InvalidInput, "threshold must be non-negative");
    return M.unaryExpr([t](double v) { return std::abs(v) > t ? v : 0.0; });
}

struct ThresholdBracket {
    double lower = 0.0;  // 2 sqrt(2 (2 + delta) alpha log d / n)
    double upper = 0.0;  // sqrt(alpha log d / n)
    bool nonempty() const noexcept { return lower <= upper; }
};

/// The two-sided condition on the threshold as displayed. Its upper end lies below its
/// lower end for every delta > 0, so only the lower end is used in the experiments.
inline ThresholdBracket threshold_bracket(double alpha_value, Eigen::Index d_feat, double delta, long n) {
    ThresholdBracket b;
    b.lower = 2.0 * lasso_eps_level(alpha_value, d_feat, delta, n);
    b.upper = std::sqrt(alpha_value * detail::log_d(d_feat) / static_cast<double>(n));
    return b;
}

/// Rejects Sigma outside M(s, m): PSD, diagonal at most m, at most s non-zeros per row.
inline void check_sparse_model(const Matrix& sigma, int s, double m) {
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if (detail::min_eigenvalue(sigma) < -1e-12 * scale) fail(ErrorKind::ModelViolation, "Sigma is not PSD");
    for (Eigen::Index j = 0; j < sigma.rows(); ++j) {
        if (sigma(j, j) > m + 1e-12) {
            fail(ErrorKind::ModelViolation, "diagonal entry " + std::to_string(j) + " exceeds m");
        }
        const auto nnz = (sigma.row(j).array().abs() > 1e-12).count();
        if (nnz > s) {
            fail(ErrorKind::ModelViolation, "row " + std::to_string(j) + " has " + std::to_string(nnz) +
                                                " non-zeros, above s = " + std::to_string(s));
        }
    }
}

struct CovResult {
    double err_1norm = 0.0;
    double err_spectral = 0.0;
    double bound = 0.0;
    double t = 0.0;
    double eps_n = 0.0;
    ThresholdBracket bracket;
    bool pass = false;
};

/// Thresholded estimate of Sigma = pi(f f') from a stationary run of length n. The threshold
/// defaults to the lower end of the bracket; an explicit t below it is rejected.
inline CovResult sparse_cov_experiment(const FiniteChain& chain, const FeatureMap& fmap, int s, double m, double delta,
                                       long n, std::uint64_t seed, std::optional<double> t = std::nullopt) {
    fmap.check_pi(chain.pi());
    if (fmap.dim() < 2) fail(ErrorKind::InvalidInput, "need at least two features");
    if (!(delta > 0.0)) fail(ErrorKind::InvalidInput, "delta must be positive");
    const Vector means = fmap.values().transpose() * chain.pi();
    if (!fmap.centered() || means.cwiseAbs().maxCoeff() > 1e-12) {
        fail(ErrorKind::ModelViolation, "features must be centered under pi");
    }
    const Matrix sig = fmap.sigma(chain.pi());
    check_sparse_model(sig, s, m);
    const double a = alpha_right(right_lambda(chain));

    CovResult r;
    r.bracket = threshold_bracket(a, fmap.dim(), delta, n);
    r.t = t.value_or(r.bracket.lower);
    if (r.t < r.bracket.lower) fail(ErrorKind::BracketEmpty, "threshold lies below the admissible lower end");
    r.bound = s * (2.0 * r.t + 3.0 * lasso_eps_level(a, fmap.dim(), delta, n));

    const auto counts = detail::visit_counts(chain, n, seed, 0);
    const Matrix hat = fmap.empirical_sigma(counts, n);
    r.eps_n = epsilon_n(hat, sig);
    const Matrix diff = threshold_cov(hat, r.t) - sig;
    r.err_1norm = l1_operator_norm(diff);
    r.err_spectral = spectral_norm(diff);
    r.pass = r.err_1norm <= r.bound;
    return r;
}

/// Undirected simple graph on nodes 0..n_nodes-1.
struct Graph {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges;
};

inline std::vector<int> graph_degrees(const Graph& g) {
    std::vector<int> deg(static_cast<std::size_t>(g.n_nodes), 0);
    for (auto [u, v] : g.edges) {
        ++deg[static_cast<std::size_t>(u)];
        ++deg[static_cast<std::size_t>(v)];
    }
    return deg;
}

/// Simple random walk; pi(x) = d(x) / 2|E| is attached and verified.
inline FiniteChain random_walk_chain(const Graph& g) {
    if (g.n_nodes < 1) fail(ErrorKind::InvalidInput, "graph has no nodes");
    std::set<std::pair<int, int>> seen;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n_nodes));
    for (auto [u, v] : g.edges) {
        if (u < 0 || v < 0 || u >= g.n_nodes || v >= g.n_nodes) fail(ErrorKind::InvalidInput, "edge endpoint out of range");
        if (u == v) fail(ErrorKind::InvalidInput, "self-loops are not allowed");
        if (!seen.insert(std::minmax(u, v)).second) fail(ErrorKind::InvalidInput, "duplicate edge");
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::vector<bool> reached(static_cast<std::size_t>(g.n_nodes), false);
    std::queue<int> frontier;
    frontier.push(0);
    reached[0] = true;
    int count = 1;
    while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (!reached[static_cast<std::size_t>(v)]) {
                reached[static_cast<std::size_t>(v)] = true;
                ++count;
                frontier.push(v);
            }
        }
    }
    if (count != g.n_nodes || (g.n_nodes > 1 && g.edges.empty())) fail(ErrorKind::Disconnected, "graph is not connected");
    if (g.n_nodes == 1) fail(ErrorKind::Disconnected, "a single node has no edges to walk");

    const auto deg = graph_degrees(g);
    Matrix P = Matrix::Zero(g.n_nodes, g.n_nodes);
    Vector pi(g.n_nodes);
    const double two_e = 2.0 * static_cast<double>(g.edges.size());
    for (int u = 0; u < g.n_nodes; ++u) {
        const double du = deg[static_cast<std::size_t>(u)];
        for (int v : adj[static_cast<std::size_t>(u)]) P(u, v) = 1.0 / du;
        pi(u) = du / two_e;
    }
    return FiniteChain::with_stationary(std::move(P), std::move(pi));
}

struct RdsResult {
    double prevalence_hat = 0.0;
    double truth = 0.0;
    /// Plain average of f(X_i), biased toward high-degree nodes.
    double naive_mean = 0.0;
    double numerator_mean = 0.0;    // n^{-1} sum f(X_i)/d(X_i)
    double numerator_limit = 0.0;   // sum f / 2|E|
    double denominator_mean = 0.0;  // n^{-1} sum 1/d(X_i)
    double denominator_limit = 0.0; // |X| / 2|E|
    double lam_r = 0.0;
    double alpha = 1.0;
    /// 2 exp(-2 n eps^2 / alpha), shared by both averages.
    double tail_at_eps = 0.0;
    bool vacuous = false;
};

/// Degree-weighted prevalence estimate from a stationary random walk of n steps.
inline RdsResult rds_estimate(const Graph& g, const std::vector<double>& infected, long n, std::uint64_t seed,
                              double eps) {
    if (static_cast<int>(infected.size()) != g.n_nodes) fail(ErrorKind::InvalidInput, "indicator length differs from node count");
    if (n < 1) fail(ErrorKind::InvalidInput, "n must be at least 1");
    const FiniteChain chain = random_walk_chain(g);
    const auto deg = graph_degrees(g);
    const double two_e = 2.0 * static_cast<double>(g.edges.size());

    RdsResult r;
    r.lam_r = right_lambda(chain);
    r.alpha = alpha_right(r.lam_r);
    r.truth = std::accumulate(infected.begin(), infected.end(), 0.0) / g.n_nodes;
    r.numerator_limit = std::accumulate(infected.begin(), infected.end(), 0.0) / two_e;
    r.denominator_limit = g.n_nodes / two_e;

    const auto counts = detail::visit_counts(chain, n, seed, 0);
    double num = 0.0, den = 0.0, plain = 0.0;
    for (int x = 0; x < g.n_nodes; ++x) {
        const double c = static_cast<double>(counts[static_cast<std::size_t>(x)]);
        const double d = deg[static_cast<std::size_t>(x)];
        num += c * infected[static_cast<std::size_t>(x)] / d;
        den += c / d;
        plain += c * infected[static_cast<std::size_t>(x)];
    }
    const double nn = static_cast<double>(n);
    r.numerator_mean = num / nn;
    r.denominator_mean = den / nn;
    r.naive_mean = plain / nn;
    r.prevalence_hat = num / den;
    r.tail_at_eps = 2.0 * std::exp(-2.0 * nn * eps * eps / r.alpha);
    r.vacuous = r.tail_at_eps > 1.0;
    return r;
}

/// One arm: a chain, a reward into [0, 1], and the chain's right lambda.
struct BanditArm {
    FiniteChain chain;
    StepFunction reward;
    double lam_r = 0.0;

    BanditArm(FiniteChain c, StepFunction f) : chain(std::move(c)), reward(std::move(f)) {
        if (reward.size() != chain.d()) fail(ErrorKind::InvalidInput, "reward length differs from the state count");
        if (reward.a() < 0.0 || reward.b() > 1.0) fail(ErrorKind::InvalidInput, "rewards must lie in [0, 1]");
        lam_r = right_lambda(chain);
    }

    double mean() const { return reward.mean(chain.pi()); }
};

struct RegretTrace {
    std::vector<long> pulls;  // N_j(T)
    std::vector<double> gaps; // Delta_j
    double pseudo_regret = 0.0;
    /// (t, sum_j Delta_j N_j(t)) at evenly spaced rounds, ending at T.
    std::vector<std::pair<long, double>> curve;
    double bound = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<double> arm_gaps(std::span<const BanditArm> arms) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : arms) best = std::max(best, a.mean());
    std::vector<double> gaps;
    for (const auto& a : arms) gaps.push_back(best - a.mean());
    return gaps;
}

inline constexpr double kGapZeroTol = 1e-12;

/// sum_{Delta_j > 0} (2c log T / Delta_j + c Delta_j / (c - 2 alpha)) with alpha taken at the
/// largest right lambda over the arms.
inline double ucb_bound(std::span<const BanditArm> arms, double c, long T) {
    if (arms.empty()) fail(ErrorKind::InvalidInput, "need at least one arm");
    if (T < 1) fail(ErrorKind::InvalidInput, "horizon must be positive");
    double lam = -1.0;
    for (const auto& a : arms) lam = std::max(lam, a.lam_r);
    const double al = alpha_right(lam);
    if (!(c > 2.0 * al)) {
        fail(ErrorKind::CTooSmall, "c = " + std::to_string(c) + " must exceed 2 alpha = " + std::to_string(2.0 * al));
    }
    double total = 0.0;
    for (double gap : arm_gaps(arms)) {
        if (gap <= kGapZeroTol) continue;
        total += 2.0 * c / gap * std::log(static_cast<double>(T)) + c * gap / (c - 2.0 * al);
    }
    return total;
}

/// c-UCB over T rounds. Every arm is pulled once first, then the arm with the largest
/// mean + sqrt(c log t / (2 N)) is pulled, ties going to the lowest index. Each arm's chain
/// starts from its stationary law and moves only when pulled.
inline RegretTrace ucb_run(std::span<const BanditArm> arms, double c, long T, std::uint64_t seed,
                           int curve_points = 100) {
    const std::size_t K = arms.size();
    if (K < 2) fail(ErrorKind::InvalidInput, "need at least two arms");
    if (!(c > 0.0)) fail(ErrorKind::InvalidInput, "c must be positive");
    if (T < static_cast<long>(K)) fail(ErrorKind::InvalidInput, "horizon must allow one pull per arm");

    std::vector<PathSampler> samplers;
    std::vector<SplitMix64> gens;
    std::vector<int> state(K);
    for (std::size_t j = 0; j < K; ++j) {
        samplers.emplace_back(arms[j].chain.P());
        gens.push_back(replicate_stream(seed, j));
        state[j] = PathSampler::draw(PathSampler::cdf(arms[j].chain.pi()), uniform01(gens[j]));
    }

    RegretTrace tr;
    tr.gaps = arm_gaps(arms);
    tr.pulls.assign(K, 0);
    std::vector<double> reward_sum(K, 0.0);
    const long every = std::max<long>(1, T / std::max(1, curve_points));
    double regret = 0.0;

    auto pull = [&](std::size_t j) {
        reward_sum[j] += arms[j].reward(state[j]);
        ++tr.pulls[j];
        regret += tr.gaps[j];
        state[j] = samplers[j].step(state[j], gens[j]);
    };

    for (long t = 1; t <= T; ++t) {
        if (t <= static_cast<long>(K)) {
            pull(static_cast<std::size_t>(t - 1));
        } else {
            const double log_t = std::log(static_cast<double>(t));
            std::size_t best = 0;
            double best_index = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < K; ++j) {
                const double nj = static_cast<double>(tr.pulls[j]);
                const double index = reward_sum[j] / nj + std::sqrt(c * log_t / (2.0 * nj));
                if (index > best_index) {
                    best_index = index;
                    best = j;
                }
            }
            pull(best);
        }
        if (t % every == 0 || t == T) {
            if (tr.curve.empty() || tr.curve.back().first != t) tr.curve.emplace_back(t, regret);
        }
    }
    tr.pseudo_regret = regret;
    try {
        tr.bound = ucb_bound(arms, c, T);
    } catch (const Error&) {
        tr.bound = std::numeric_limits<double>::quiet_NaN();
    }
    return tr;
}

}  // namespace hoeffmc
