#pragma once

// Hoeffding-type mgf and tail bounds for sums along a Markov chain, their
// non-stationary and burn-in variants, and inversion into sample sizes.

#include "hoeffmc/alpha.hpp"
#include "hoeffmc/chain.hpp"
#include "hoeffmc/errors.hpp"
#include "hoeffmc/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hoeffmc {

enum class Theorem { Classical, T2_1, T2_2, T2_3, T6_2, TA_1, Inhomog };

inline constexpr std::string_view theorem_name(Theorem th) noexcept {
    switch (th) {
        case Theorem::Classical: return "classical";
        case Theorem::T2_1: return "t21";
        case Theorem::T2_2: return "t22";
        case Theorem::T2_3: return "t23";
        case Theorem::T6_2: return "t62";
        case Theorem::TA_1: return "ta1";
        case Theorem::Inhomog: return "inhomog";
    }
    return "unknown";
}

inline Theorem parse_theorem(std::string_view name) {
    for (Theorem th : {Theorem::Classical, Theorem::T2_1, Theorem::T2_2, Theorem::T2_3, Theorem::T6_2, Theorem::TA_1,
                       Theorem::Inhomog}) {
        if (theorem_name(th) == name) return th;
    }
    fail(ErrorKind::InvalidInput, "unknown theorem '" + std::string(name) + "'");
}

struct Range {
    double a = 0.0;
    double b = 0.0;
    double width() const noexcept { return b - a; }
};

inline void to_json(nlohmann::json& j, const Range& r) { j = nlohmann::json::array({r.a, r.b}); }

struct BoundReport {
    Theorem theorem = Theorem::Classical;
    double variance_proxy = 0.0;
    double prefactor = 1.0;
    double t = 0.0;
    double log_mgf_bound = 0.0;
    double mgf_bound = 1.0;
    /// Deviation of the sum from its stationary centre. For T6_2 this is n times the
    /// mean-scale epsilon, which is kept in inputs_echo.
    double eps = 0.0;
    double log_tail_bound = 0.0;
    double tail_bound = 0.0;
    /// Tail bound exceeds 1 and says nothing.
    bool vacuous = false;
    nlohmann::json inputs_echo;
};

namespace detail {

inline void check_ranges(std::span<const Range> ranges) {
    if (ranges.empty()) fail(ErrorKind::InvalidInput, "need at least one range");
    for (const auto& r : ranges) {
        if (!(r.a <= r.b)) fail(ErrorKind::InvalidInput, "range has a > b");
    }
}

inline void check_eps(double eps) {
    if (!(eps >= 0.0)) fail(ErrorKind::InvalidInput, "eps must be non-negative");
}

/// sum_i (b_i - a_i)^2 / 4.
inline double range_mass(std::span<const Range> ranges) {
    double s = 0.0;
    for (const auto& r : ranges) s += r.width() * r.width();
    return s / 4.0;
}

/// Fills the mgf and tail fields from proxy and prefactor, in log space.
inline BoundReport make_report(Theorem th, double proxy, double prefactor, double t, double eps) {
    check_eps(eps);
    BoundReport r;
    r.theorem = th;
    r.variance_proxy = proxy;
    r.prefactor = prefactor;
    r.t = t;
    r.eps = eps;
    r.log_mgf_bound = std::log(prefactor) + 0.5 * t * t * proxy;
    r.mgf_bound = std::exp(r.log_mgf_bound);
    if (proxy > 0.0) {
        r.log_tail_bound = std::log(2.0 * prefactor) - eps * eps / (2.0 * proxy);
    } else {
        r.log_tail_bound = eps > 0.0 ? -std::numeric_limits<double>::infinity() : std::log(2.0 * prefactor);
    }
    r.tail_bound = std::exp(r.log_tail_bound);
    r.vacuous = r.tail_bound > 1.0;
    return r;
}

}  // namespace detail

/// Independent summands: proxy sum (b_i - a_i)^2 / 4. A zero proxy gives tail 0 for eps > 0.
inline BoundReport classical_hoeffding(std::span<const Range> ranges, double t, double eps) {
    detail::check_ranges(ranges);
    auto r = detail::make_report(Theorem::Classical, detail::range_mass(ranges), 1.0, t, eps);
    r.inputs_echo = {{"ranges", std::vector<Range>(ranges.begin(), ranges.end())}, {"t", t}, {"eps", eps}};
    return r;
}

inline double t21_proxy(double lam, std::span<const Range> ranges) {
    detail::check_ranges(ranges);
    return alpha(lam) * detail::range_mass(ranges);
}

/// Stationary start, absolute gap: proxy alpha(lam) sum (b_i - a_i)^2 / 4.
inline BoundReport bound_t21(double lam, std::span<const Range> ranges, double t, double eps) {
    auto r = detail::make_report(Theorem::T2_1, t21_proxy(lam, ranges), 1.0, t, eps);
    r.inputs_echo = {{"lam", lam}, {"ranges", std::vector<Range>(ranges.begin(), ranges.end())}, {"t", t}, {"eps", eps}};
    return r;
}

namespace detail {

inline double identical_mass(const Range& range, long n) {
    if (n < 1) fail(ErrorKind::InvalidInput, "n must be at least 1");
    if (!(range.a <= range.b)) fail(ErrorKind::InvalidInput, "range has a > b");
    return static_cast<double>(n) * (range.width() * range.width()) / 4.0;
}

inline BoundReport t22_like(Theorem th, double q, double lam_r, const Range& range, long n, double prefactor, double t,
                            double eps) {
    const double proxy = (q * alpha_right(lam_r)) * identical_mass(range, n);
    return make_report(th, proxy, prefactor, t, eps);
}

}  // namespace detail

/// Stationary start, identical f, right gap: proxy alpha(max(lam_r, 0)) n (b - a)^2 / 4.
inline BoundReport bound_t22(double lam_r, const Range& range, long n, double t, double eps) {
    auto r = detail::t22_like(Theorem::T2_2, 1.0, lam_r, range, n, 1.0, t, eps);
    r.inputs_echo = {{"lam_r", lam_r}, {"range", range}, {"n", n}, {"t", t}, {"eps", eps}};
    return r;
}

enum class Shift { Raw, MinusOne };

/// ||g||_{pi,p} with g = dnu/dpi (Raw) or dnu/dpi - 1 (MinusOne).
inline double density_pnorm(const MeasurePair& mp, Shift shift) {
    Vector g = mp.density();
    if (shift == Shift::MinusOne) g.array() -= 1.0;
    g = g.cwiseAbs();
    if (mp.p_is_infinite()) return g.maxCoeff();
    const double p = mp.p();
    return std::pow((mp.pi().array() * g.array().pow(p)).sum(), 1.0 / p);
}

/// Start at nu: prefactor ||dnu/dpi||_{pi,p}, proxy q alpha(lam) sum (b_i - a_i)^2 / 4.
inline BoundReport bound_t23(double lam, const MeasurePair& mp, std::span<const Range> ranges, double t, double eps) {
    detail::check_ranges(ranges);
    const double proxy = (mp.q() * alpha(lam)) * detail::range_mass(ranges);
    auto r = detail::make_report(Theorem::T2_3, proxy, density_pnorm(mp, Shift::Raw), t, eps);
    r.inputs_echo = {{"lam", lam},
                     {"p", mp.p_is_infinite() ? nlohmann::json("inf") : nlohmann::json(mp.p())},
                     {"nu", to_std(mp.nu())},
                     {"ranges", std::vector<Range>(ranges.begin(), ranges.end())},
                     {"t", t},
                     {"eps", eps}};
    return r;
}

/// C_p from a precomputed deviation norm ||dnu/dpi - 1||_{pi,p} (ignored at p = inf,
/// where the prefactor is sup dnu/dpi and must be passed as sup_density).
inline double c_p_from_norm(double lam, double p, long n0, double deviation_norm, double sup_density) {
    if (std::isnan(p) || !(p > 1.0)) fail(ErrorKind::InvalidP, "norm order p must exceed 1");
    if (!(lam >= 0.0 && lam <= 1.0)) fail(ErrorKind::InvalidInput, "lambda must lie in [0,1]");
    if (n0 < 0) fail(ErrorKind::InvalidInput, "burn-in n0 must be non-negative");
    if (std::isinf(p)) return sup_density;
    const double q = p / (p - 1.0);
    const double m = static_cast<double>(n0);
    if (p < 2.0) return 1.0 + std::pow(2.0, 2.0 / p) * std::pow(lam, 2.0 * m / q) * deviation_norm;
    if (p == 2.0) return 1.0 + std::pow(lam, m) * deviation_norm;
    return 1.0 + std::pow(2.0, 2.0 / q) * std::pow(lam, 2.0 * m / p) * deviation_norm;
}

/// Burn-in prefactor C_p(nu, n0).
inline double c_p_prefactor(double lam, const MeasurePair& mp, long n0) {
    if (mp.p_is_infinite()) return c_p_from_norm(lam, mp.p(), n0, 0.0, density_pnorm(mp, Shift::Raw));
    return c_p_from_norm(lam, mp.p(), n0, density_pnorm(mp, Shift::MinusOne), 0.0);
}

/// MCMC average after n0 burn-in steps from nu. eps is on the scale of the average; the
/// report evaluates the tail at the sum-scale deviation n eps.
inline BoundReport bound_t62(double lam, double lam_r, const MeasurePair& mp, long n0, const Range& range, long n,
                             double t, double eps) {
    detail::check_eps(eps);
    const double prefactor = c_p_prefactor(lam, mp, n0);
    auto r = detail::t22_like(Theorem::T6_2, mp.q(), lam_r, range, n, prefactor, t, static_cast<double>(n) * eps);
    r.inputs_echo = {{"lam", lam},
                     {"lam_r", lam_r},
                     {"p", mp.p_is_infinite() ? nlohmann::json("inf") : nlohmann::json(mp.p())},
                     {"nu", to_std(mp.nu())},
                     {"n0", n0},
                     {"range", range},
                     {"n", n},
                     {"t", t},
                     {"eps_mean", eps}};
    return r;
}

struct McmcPlan {
    long n0 = 0;
    double p = 0.0;
    double q = 1.0;
    double c_p = 1.0;
    double alpha = 1.0;
    /// ceil(2 q alpha (b-a)^2/4 log(2 C_p / delta) / eps^2), before the neighbourhood check.
    long n_closed_form = 0;
    long n_required = 0;
    double tail_at_n = 0.0;
    double tail_at_n_minus_1 = 0.0;  // NaN when n_required = 1
};

/// Smallest n whose burn-in tail bound at eps is at most delta.
inline McmcPlan mcmc_plan(double lam, double lam_r, const MeasurePair& mp, long n0, const Range& range, double eps,
                          double delta) {
    if (!(eps > 0.0)) fail(ErrorKind::InvalidInput, "eps must be positive");
    if (!(delta > 0.0 && delta < 1.0)) fail(ErrorKind::InvalidInput, "delta must lie in (0,1)");
    McmcPlan plan;
    plan.n0 = n0;
    plan.p = mp.p();
    plan.q = mp.q();
    plan.c_p = c_p_prefactor(lam, mp, n0);
    plan.alpha = alpha_right(lam_r);

    const double w = range.width();
    const double raw = 2.0 * plan.q * plan.alpha * (w * w / 4.0) * std::log(2.0 * plan.c_p / delta) / (eps * eps);
    constexpr double kMaxN = 9.0e15;
    if (!(raw < kMaxN)) fail(ErrorKind::InvalidInput, "required sample size overflows");
    plan.n_closed_form = std::max<long>(1, static_cast<long>(std::ceil(raw)));

    auto tail = [&](long n) { return bound_t62(lam, lam_r, mp, n0, range, n, 0.0, eps).tail_bound; };
    long n = plan.n_closed_form;
    while (tail(n) > delta) ++n;
    while (n > 1 && tail(n - 1) <= delta) --n;
    plan.n_required = n;
    plan.tail_at_n = tail(n);
    plan.tail_at_n_minus_1 = n > 1 ? tail(n - 1) : std::numeric_limits<double>::quiet_NaN();
    return plan;
}

struct InhomogeneousProxy {
    double fine = 0.0;
    /// alpha(max lam) sum (b_i - a_i)^2 / 4; always >= fine.
    double coarse = 0.0;
};

/// Proxy for kernels that change between steps; lams[i] is the gap of the kernel taking
/// step i+1 to step i+2, so n ranges pair with n - 1 lams.
inline InhomogeneousProxy inhomogeneous_proxy(std::span<const double> lams, std::span<const Range> ranges) {
    detail::check_ranges(ranges);
    const std::size_t n = ranges.size();
    if (lams.size() + 1 != n) {
        fail(ErrorKind::InvalidInput, "need n - 1 = " + std::to_string(n - 1) + " gap values for " + std::to_string(n) +
                                          " ranges, got " + std::to_string(lams.size()));
    }
    auto sq = [&](std::size_t i) { return ranges[i].width() * ranges[i].width(); };
    InhomogeneousProxy out;
    double fine = sq(0) / 8.0;
    double lam_max = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        fine += alpha(lams[i - 1]) * (sq(i - 1) + sq(i)) / 8.0;
        lam_max = std::max(lam_max, lams[i - 1]);
    }
    fine += sq(n - 1) / 8.0;
    out.fine = fine;
    out.coarse = alpha(lam_max) * detail::range_mass(ranges);
    return out;
}

inline BoundReport bound_inhomogeneous(std::span<const double> lams, std::span<const Range> ranges, double t,
                                       double eps) {
    const auto proxy = inhomogeneous_proxy(lams, ranges);
    auto r = detail::make_report(Theorem::Inhomog, proxy.fine, 1.0, t, eps);
    r.inputs_echo = {{"lams", std::vector<double>(lams.begin(), lams.end())},
                     {"ranges", std::vector<Range>(ranges.begin(), ranges.end())},
                     {"coarse_proxy", proxy.coarse},
                     {"t", t},
                     {"eps", eps}};
    return r;
}

/// lambda_k = |||P^k - Pi|||_pi^{1/k}.
inline double grouped_lambda(const FiniteChain& chain, int k) {
    if (k < 1) fail(ErrorKind::InvalidInput, "k must be at least 1");
    return spectral_radius_lambda(chain, k).sequence.back();
}

/// Grouped bound: proxy k alpha(lam_k^k) k max_j sum_{i in I_j} (b_i - a_i)^2 / 4 over the
/// stride classes I_j = {i : i = j mod k}.
inline BoundReport bound_ta1(double lam_k, int k, std::span<const Range> ranges, double t, double eps) {
    detail::check_ranges(ranges);
    if (k < 1) fail(ErrorKind::InvalidInput, "k must be at least 1");
    if (!(lam_k >= 0.0)) fail(ErrorKind::InvalidInput, "lambda_k must be non-negative");
    double max_class = 0.0;
    for (int j = 0; j < k; ++j) {
        std::vector<Range> cls;
        for (std::size_t i = static_cast<std::size_t>(j); i < ranges.size(); i += static_cast<std::size_t>(k)) {
            cls.push_back(ranges[i]);
        }
        if (!cls.empty()) max_class = std::max(max_class, detail::range_mass(cls));
    }
    const double kd = static_cast<double>(k);
    const double proxy = (kd * alpha(std::pow(lam_k, kd))) * (kd * max_class);
    auto r = detail::make_report(Theorem::TA_1, proxy, 1.0, t, eps);
    r.inputs_echo = {{"lam_k", lam_k},
                     {"k", k},
                     {"ranges", std::vector<Range>(ranges.begin(), ranges.end())},
                     {"t", t},
                     {"eps", eps}};
    return r;
}

}  // namespace hoeffmc
