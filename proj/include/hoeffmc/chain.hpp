#pragma once

// Finite-state Markov chains and their L2(pi) spectral quantities.

#include "hoeffmc/alpha.hpp"
#include "hoeffmc/errors.hpp"
#include "hoeffmc/linalg.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hoeffmc {

namespace detail {

inline constexpr double kRowSumInputTol = 1e-9;
inline constexpr double kInvarianceTol = 1e-10;
inline constexpr double kMinStationaryMass = 1e-13;

inline std::string fmt_index(Eigen::Index i) { return std::to_string(static_cast<long long>(i)); }

}  // namespace detail

/// A row-stochastic kernel on d states together with its (full-support) stationary law.
class FiniteChain {
public:
    /// Validates P and pairs it with a caller-supplied stationary vector. The vector is
    /// checked against pi P = pi, never taken on faith.
    static FiniteChain with_stationary(Matrix P, Vector pi, std::vector<std::string> labels = {});

    Eigen::Index d() const noexcept { return P_.rows(); }
    const Matrix& P() const noexcept { return P_; }
    const Vector& pi() const noexcept { return pi_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    FiniteChain(Matrix P, Vector pi, std::vector<std::string> labels)
        : P_(std::move(P)), pi_(std::move(pi)), labels_(std::move(labels)) {}

    Matrix P_;
    Vector pi_;
    std::vector<std::string> labels_;
};

namespace detail {

/// Checks shape and entries, then renormalizes rows so they sum to 1 to machine precision.
inline Matrix validated_kernel(Matrix P) {
    if (P.rows() < 1 || P.rows() != P.cols()) {
        fail(ErrorKind::NotStochastic, "transition matrix must be square with at least one state");
    }
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
        for (Eigen::Index j = 0; j < P.cols(); ++j) {
            const double v = P(i, j);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0 + kRowSumInputTol) {
                fail(ErrorKind::NotStochastic,
                     "entry (" + fmt_index(i) + "," + fmt_index(j) + ") = " + std::to_string(v) + " is not a probability");
            }
        }
        const double s = P.row(i).sum();
        if (std::abs(s - 1.0) > kRowSumInputTol) {
            fail(ErrorKind::NotStochastic, "row " + fmt_index(i) + " sums to " + std::to_string(s));
        }
        P.row(i) /= s;
    }
    return P;
}

inline void check_stationary(const Matrix& P, const Vector& pi) {
    if (pi.size() != P.rows()) fail(ErrorKind::DegenerateStationary, "stationary vector has the wrong length");
    if (std::abs(pi.sum() - 1.0) > 1e-12) fail(ErrorKind::DegenerateStationary, "stationary vector does not sum to 1");
    for (Eigen::Index i = 0; i < pi.size(); ++i) {
        if (!(pi(i) > kMinStationaryMass)) {
            fail(ErrorKind::DegenerateStationary,
                 "state " + fmt_index(i) + " has stationary mass " + std::to_string(pi(i)) + " (full support required)");
        }
    }
    const double residual = (pi.transpose() * P - pi.transpose()).cwiseAbs().maxCoeff();
    if (residual > kInvarianceTol) {
        fail(ErrorKind::DegenerateStationary, "pi P != pi (residual " + std::to_string(residual) + ")");
    }
}

/// Solves (P^T - I) pi = 0 with sum(pi) = 1; polishes by power iteration when the
/// direct solve leaves a residual.
inline Vector solve_stationary(const Matrix& P) {
    const Eigen::Index d = P.rows();
    if (d == 1) return Vector::Ones(1);

    Matrix A = P.transpose() - Matrix::Identity(d, d);
    Eigen::FullPivLU<Matrix> rank_probe(A);
    rank_probe.setThreshold(1e-10);
    if (rank_probe.rank() < d - 1) {
        fail(ErrorKind::DegenerateStationary,
             "stationary distribution is not unique (" + std::to_string(d - rank_probe.rank()) + " closed classes)");
    }

    A.row(d - 1).setOnes();
    Vector rhs = Vector::Zero(d);
    rhs(d - 1) = 1.0;
    Vector pi = A.fullPivLu().solve(rhs);

    auto residual = [&](const Vector& v) { return (v.transpose() * P - v.transpose()).cwiseAbs().maxCoeff(); };
    if (!(residual(pi) <= 1e-13)) {
        Vector x = pi.cwiseMax(0.0);
        if (!(x.sum() > 0.0)) x = Vector::Constant(d, 1.0 / static_cast<double>(d));
        x /= x.sum();
        for (long iter = 0; iter < 1'000'000; ++iter) {
            Vector next = P.transpose() * x;
            next /= next.sum();
            const double change = (next - x).cwiseAbs().maxCoeff();
            x = std::move(next);
            if (change < 1e-14) break;
        }
        if (residual(x) < residual(pi)) pi = x;
    }
    pi /= pi.sum();
    return pi;
}

}  // namespace detail

inline FiniteChain FiniteChain::with_stationary(Matrix P, Vector pi, std::vector<std::string> labels) {
    P = detail::validated_kernel(std::move(P));
    detail::check_stationary(P, pi);
    return FiniteChain(std::move(P), std::move(pi), std::move(labels));
}

/// Builds a chain from its kernel; the stationary law is always solved for.
inline FiniteChain build_chain(Matrix P, std::vector<std::string> labels = {}) {
    P = detail::validated_kernel(std::move(P));
    Vector pi = detail::solve_stationary(P);
    return FiniteChain::with_stationary(std::move(P), std::move(pi), std::move(labels));
}

/// P*(i, j) = pi_j P(j, i) / pi_i.
inline Matrix time_reversal(const FiniteChain& chain) {
    const Vector& pi = chain.pi();
    return pi.cwiseInverse().asDiagonal() * chain.P().transpose() * pi.asDiagonal();
}

/// R = (P + P*) / 2.
inline Matrix additive_reversiblization(const FiniteChain& chain) {
    return 0.5 * (chain.P() + time_reversal(chain));
}

/// c I + (1 - c) 1 pi^T. Returned with pi attached, since for c = 1 the kernel alone
/// does not determine it.
inline FiniteChain leon_perron_kernel(const Vector& pi, double c) {
    if (!(c >= 0.0 && c <= 1.0)) fail(ErrorKind::InvalidInput, "Leon-Perron coefficient must lie in [0,1]");
    const Eigen::Index d = pi.size();
    Matrix P = c * Matrix::Identity(d, d) + (1.0 - c) * projection_kernel(pi);
    return FiniteChain::with_stationary(std::move(P), pi);
}

/// lambda(P) = |||P - Pi|||_pi.
inline double absolute_lambda(const FiniteChain& chain) {
    const double v = pi_operator_norm(chain.pi(), chain.P() - projection_kernel(chain.pi()));
    return std::clamp(v, 0.0, 1.0);
}

/// Top of the spectrum of (P + P*)/2 on mean-zero functions. A one-state chain has no
/// mean-zero functions; it is reported as 0, matching the i.i.d. kernel.
inline double right_lambda(const FiniteChain& chain) {
    if (chain.d() == 1) return 0.0;
    const Matrix S = symmetrize(pi_similarity(chain.pi(), additive_reversiblization(chain)));
    const Matrix B = mean_zero_basis(chain.pi());
    Eigen::SelfAdjointEigenSolver<Matrix> es(B.transpose() * S * B, Eigen::EigenvaluesOnly);
    return std::clamp(es.eigenvalues().maxCoeff(), -1.0, 1.0);
}

struct SpectralRadiusEstimate {
    double estimate = 0.0;
    int k_used = 0;
    std::vector<double> sequence;  // |||P^k - Pi|||^{1/k}, k = 1..k_used
    bool envelope_nonincreasing = true;
};

/// |||P^k - Pi|||_pi^{1/k} for k = 1..k_max. No stopping rule: the caller judges convergence.
inline SpectralRadiusEstimate spectral_radius_lambda(const FiniteChain& chain, int k_max) {
    if (k_max < 1) fail(ErrorKind::InvalidInput, "k_max must be at least 1");
    const Matrix M = pi_similarity(chain.pi(), chain.P() - projection_kernel(chain.pi()));
    SpectralRadiusEstimate out;
    out.k_used = k_max;
    out.sequence.reserve(static_cast<std::size_t>(k_max));
    Matrix power = M;
    for (int k = 1; k <= k_max; ++k) {
        if (k > 1) power = power * M;
        const double norm = spectral_norm(power);
        const double value = std::min(1.0, std::pow(norm, 1.0 / k));
        if (!out.sequence.empty() && value > out.sequence.back() + 1e-12) out.envelope_nonincreasing = false;
        out.sequence.push_back(value);
    }
    out.estimate = out.sequence.back();
    return out;
}

struct SpectralSummary {
    double lambda_abs = 0.0;
    double lambda_right = 0.0;
    double lambda_inf_estimate = 0.0;
    int k_used = 0;
    std::vector<double> k_sequence;
    std::optional<double> alpha_abs;    // empty when lambda_abs leaves no gap
    std::optional<double> alpha_right;  // alpha(max(lambda_right, 0))
};

inline SpectralSummary summarize(const FiniteChain& chain, int k_max = 30) {
    SpectralSummary s;
    s.lambda_abs = absolute_lambda(chain);
    s.lambda_right = right_lambda(chain);
    auto radius = spectral_radius_lambda(chain, k_max);
    s.lambda_inf_estimate = radius.estimate;
    s.k_used = radius.k_used;
    s.k_sequence = std::move(radius.sequence);
    if (s.lambda_abs < 1.0 - kGapEpsilon) s.alpha_abs = alpha(s.lambda_abs);
    if (std::max(s.lambda_right, 0.0) < 1.0 - kGapEpsilon) s.alpha_right = alpha_right(s.lambda_right);
    return s;
}

/// An initial law nu paired with the stationary law pi and a norm order p in (1, inf].
class MeasurePair {
public:
    MeasurePair(Vector nu, Vector pi, double p) : nu_(std::move(nu)), pi_(std::move(pi)), p_(p) {
        if (std::isnan(p_) || !(p_ > 1.0)) fail(ErrorKind::InvalidP, "norm order p must exceed 1");
        if (nu_.size() != pi_.size()) fail(ErrorKind::InvalidInput, "nu and pi differ in length");
        if ((nu_.array() < 0.0).any()) fail(ErrorKind::InvalidInput, "nu has negative entries");
        if (std::abs(nu_.sum() - 1.0) > 1e-12) fail(ErrorKind::InvalidInput, "nu does not sum to 1");
        density_ = nu_.cwiseQuotient(pi_);
    }

    static MeasurePair stationary(const Vector& pi, double p) { return MeasurePair(pi, pi, p); }

    const Vector& nu() const noexcept { return nu_; }
    const Vector& pi() const noexcept { return pi_; }
    const Vector& density() const noexcept { return density_; }
    double p() const noexcept { return p_; }
    bool p_is_infinite() const noexcept { return std::isinf(p_); }
    /// Conjugate exponent q = p / (p - 1); 1 at p = inf.
    double q() const noexcept { return p_is_infinite() ? 1.0 : p_ / (p_ - 1.0); }

private:
    Vector nu_;
    Vector pi_;
    Vector density_;
    double p_;
};

}  // namespace hoeffmc
