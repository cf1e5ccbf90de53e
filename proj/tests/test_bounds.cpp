#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hoeffmc;

namespace {

std::vector<Range> unit_ranges(int n) { return std::vector<Range>(static_cast<std::size_t>(n), Range{0.0, 1.0}); }

template <class F>
void expect_error(ErrorKind kind, F&& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << error_name(kind);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

std::vector<Range> ranges_of(std::span<const StepFunction> fs) {
    std::vector<Range> r;
    for (const auto& f : fs) r.push_back({f.a(), f.b()});
    return r;
}

std::vector<StepFunction> random_steps(std::mt19937_64& gen, int d, int n, bool identical) {
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    std::vector<StepFunction> fs;
    Vector v(d);
    for (int i = 0; i < n; ++i) {
        if (i == 0 || !identical) {
            for (int s = 0; s < d; ++s) v(s) = u(gen);
        }
        fs.push_back(StepFunction::tight(v));
    }
    return fs;
}

// Kernel with absolute gap at most 0.5: half a random kernel, half its stationary projection.
FiniteChain half_mixed(std::mt19937_64& gen, int d) {
    const auto base = build_chain(oracle::random_kernel(d, gen));
    return build_chain(0.5 * base.P() + 0.5 * projection_kernel(base.pi()));
}

const std::vector<double> kTs = {-2.0, -1.0, -0.3, 0.5, 1.0, 2.0};

}  // namespace

TEST(Alpha, Examples) {
    EXPECT_DOUBLE_EQ(alpha(0.0), 1.0);
    EXPECT_NEAR(alpha(1.0 / 3.0), 2.0, 1e-15);
    EXPECT_NEAR(alpha(0.9), 19.0, 1e-12);
    expect_error(ErrorKind::GapExhausted, [] { alpha(1.0); });
    expect_error(ErrorKind::GapExhausted, [] { alpha(1.0 - 1e-13); });
    EXPECT_DOUBLE_EQ(alpha_right(-0.5), 1.0);
}

TEST(Classical, Examples) {
    const auto one = unit_ranges(1);
    EXPECT_NEAR(classical_hoeffding(one, 1.0, 0.0).mgf_bound, std::exp(1.0 / 8.0), 1e-15);
    EXPECT_NEAR(classical_hoeffding(unit_ranges(4), 0.0, 2.0).tail_bound, 2.0 * std::exp(-2.0), 1e-15);
    const std::vector<Range> sym(2, Range{-1.0, 1.0});
    EXPECT_DOUBLE_EQ(classical_hoeffding(sym, 0.0, 0.0).mgf_bound, 1.0);
}

TEST(Classical, ZeroProxyReportsZeroTail) {
    const std::vector<Range> flat(3, Range{0.5, 0.5});
    const auto r = classical_hoeffding(flat, 1.0, 0.1);
    EXPECT_EQ(r.variance_proxy, 0.0);
    EXPECT_EQ(r.tail_bound, 0.0);
    EXPECT_FALSE(r.vacuous);
    EXPECT_DOUBLE_EQ(classical_hoeffding(flat, 1.0, 0.0).tail_bound, 2.0);
}

TEST(Classical, Validation) {
    const std::vector<Range> bad{{1.0, 0.0}};
    expect_error(ErrorKind::InvalidInput, [&] { classical_hoeffding(bad, 1.0, 0.1); });
    expect_error(ErrorKind::InvalidInput, [] { classical_hoeffding({}, 1.0, 0.1); });
    expect_error(ErrorKind::InvalidInput, [] { classical_hoeffding(unit_ranges(1), 1.0, -0.1); });
}

TEST(Classical, VacuousFlag) {
    const auto r = classical_hoeffding(unit_ranges(10), 0.0, 0.1);
    EXPECT_GT(r.tail_bound, 1.0);
    EXPECT_TRUE(r.vacuous);
}

TEST(T21, Examples) {
    const auto ranges = unit_ranges(7);
    const auto c = classical_hoeffding(ranges, 0.8, 1.5);
    const auto z = bound_t21(0.0, ranges, 0.8, 1.5);
    EXPECT_EQ(z.variance_proxy, c.variance_proxy);
    EXPECT_EQ(z.mgf_bound, c.mgf_bound);
    EXPECT_EQ(z.tail_bound, c.tail_bound);
    EXPECT_NEAR(bound_t21(1.0 / 3.0, unit_ranges(1), 1.0, 0.0).mgf_bound, std::exp(0.25), 1e-15);
    expect_error(ErrorKind::GapExhausted, [&] { bound_t21(1.0, ranges, 1.0, 0.0); });
}

TEST(T21, DominatesExactMgfOnHalfMixedChains) {
    std::mt19937_64 gen(41);
    for (int rep = 0; rep < 40; ++rep) {
        const auto chain = half_mixed(gen, 5);
        const double lam = absolute_lambda(chain);
        ASSERT_LE(lam, 0.5 + 1e-12);
        const auto fs = random_steps(gen, 5, 1 + rep % 9, false);
        for (double t : {-2.0, -1.0, 0.5, 1.0, 2.0}) {
            const double exact = centered_exact_log_mgf(chain, chain.pi(), fs, t);
            EXPECT_LE(exact, bound_t21(0.5, ranges_of(fs), t, 0.0).log_mgf_bound + 1e-9);
        }
    }
}

TEST(T22, Examples) {
    const Range r{0.0, 1.0};
    const auto neg = bound_t22(-0.5, r, 10, 0.7, 2.0);
    const auto cls = classical_hoeffding(unit_ranges(10), 0.7, 2.0);
    EXPECT_EQ(neg.variance_proxy, cls.variance_proxy);
    EXPECT_EQ(neg.tail_bound, cls.tail_bound);
    EXPECT_NEAR(bound_t22(0.5, r, 10, 0.0, 3.0).tail_bound, 2.0 * std::exp(-0.6), 1e-14);
    expect_error(ErrorKind::GapExhausted, [&] { bound_t22(1.0, r, 10, 0.0, 1.0); });
    expect_error(ErrorKind::InvalidInput, [&] { bound_t22(0.2, r, 0, 0.0, 1.0); });
}

TEST(T22, NoLargerThanT21OnReversibleChains) {
    std::mt19937_64 gen(42);
    for (int rep = 0; rep < 100; ++rep) {
        const auto chain = build_chain(oracle::random_reversible_kernel(2 + rep % 7, gen));
        const long n = 1 + rep % 13;
        const Range r{-1.0, 2.0};
        const double p22 = bound_t22(right_lambda(chain), r, n, 1.0, 0.0).variance_proxy;
        const double p21 = t21_proxy(absolute_lambda(chain), std::vector<Range>(static_cast<std::size_t>(n), r));
        EXPECT_LE(p22, p21 * (1 + 1e-12));
    }
}

TEST(T22, DominatesExactMgfForIdenticalSteps) {
    std::mt19937_64 gen(43);
    for (int rep = 0; rep < 60; ++rep) {
        const int d = 2 + rep % 5;
        const auto chain = build_chain(rep % 2 ? oracle::random_kernel(d, gen) : oracle::random_sparse_kernel(d, gen));
        const double lam_r = right_lambda(chain);
        if (std::max(lam_r, 0.0) > 0.99) continue;
        const auto fs = random_steps(gen, d, 1 + rep % 12, true);
        for (double t : kTs) {
            const double exact = centered_exact_log_mgf(chain, chain.pi(), fs, t);
            const auto rep22 = bound_t22(lam_r, {fs[0].a(), fs[0].b()}, static_cast<long>(fs.size()), t, 0.0);
            EXPECT_LE(exact, rep22.log_mgf_bound + 1e-9) << "rep " << rep << " t " << t;
        }
    }
}

TEST(DensityNorm, Examples) {
    Vector pi(3);
    pi << 0.2, 0.3, 0.5;
    for (double p : {1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
        const auto mp = MeasurePair::stationary(pi, p);
        EXPECT_NEAR(density_pnorm(mp, Shift::Raw), 1.0, 1e-15);
        EXPECT_NEAR(density_pnorm(mp, Shift::MinusOne), 0.0, 1e-15);
    }
    Vector nu = Vector::Zero(4);
    nu(0) = 1.0;
    const MeasurePair point(nu, Vector::Constant(4, 0.25), std::numeric_limits<double>::infinity());
    EXPECT_DOUBLE_EQ(density_pnorm(point, Shift::Raw), 4.0);
    expect_error(ErrorKind::InvalidP, [&] { MeasurePair(nu, Vector::Constant(4, 0.25), 1.0); });
}

TEST(T23, ReducesToT21AtStationaryStart) {
    Vector pi(3);
    pi << 0.2, 0.3, 0.5;
    const auto mp = MeasurePair::stationary(pi, std::numeric_limits<double>::infinity());
    const std::vector<Range> ranges{{0, 1}, {-1, 2}, {0.5, 0.75}};
    for (double lam : {0.0, 0.3, 0.8}) {
        const auto a = bound_t23(lam, mp, ranges, 1.3, 0.9);
        const auto b = bound_t21(lam, ranges, 1.3, 0.9);
        EXPECT_EQ(a.variance_proxy, b.variance_proxy);
        EXPECT_EQ(a.mgf_bound, b.mgf_bound);
        EXPECT_EQ(a.tail_bound, b.tail_bound);
    }
}

TEST(T23, ConjugateExponentScalesProxy) {
    Vector pi(2);
    pi << 0.5, 0.5;
    const auto two = bound_t23(0.4, MeasurePair::stationary(pi, 2.0), unit_ranges(5), 1.0, 0.0);
    EXPECT_NEAR(two.variance_proxy, 2.0 * t21_proxy(0.4, unit_ranges(5)), 1e-14);
}

TEST(T23, DominatesExactMgfFromPointMass) {
    Vector nu = Vector::Zero(4);
    nu(0) = 1.0;
    std::mt19937_64 gen(44);
    for (int rep = 0; rep < 30; ++rep) {
        // doubly stochastic, so pi is uniform
        const Matrix K = oracle::random_reversible_kernel(4, gen);
        Matrix S = 0.5 * (K + K.transpose());
        for (int it = 0; it < 200; ++it) {
            S = (S.array().colwise() / S.rowwise().sum().array()).matrix();
            S = (S.array().rowwise() / S.colwise().sum().array()).matrix();
        }
        const auto chain = build_chain(S);
        ASSERT_LT((chain.pi() - Vector::Constant(4, 0.25)).cwiseAbs().maxCoeff(), 1e-9);
        const double lam = absolute_lambda(chain);
        const MeasurePair mp(nu, chain.pi(), std::numeric_limits<double>::infinity());
        const auto fs = random_steps(gen, 4, 1 + rep % 8, false);
        for (double t : kTs) {
            const double exact = centered_exact_log_mgf(chain, nu, fs, t);
            EXPECT_LE(exact, bound_t23(lam, mp, ranges_of(fs), t, 0.0).log_mgf_bound + 1e-9);
        }
    }
}

TEST(CpPrefactor, Examples) {
    EXPECT_NEAR(c_p_from_norm(0.5, 2.0, 3, 2.0, 0.0), 1.25, 1e-15);
    Vector pi(2), nu(2);
    pi << 0.2, 0.8;
    nu << 1.0, 0.0;
    const MeasurePair mp(nu, pi, 2.0);
    EXPECT_NEAR(density_pnorm(mp, Shift::MinusOne), 2.0, 1e-15);
    EXPECT_NEAR(c_p_prefactor(0.5, mp, 3), 1.25, 1e-15);
    EXPECT_DOUBLE_EQ(c_p_prefactor(0.7, MeasurePair::stationary(pi, 2.0), 4), 1.0);
    const MeasurePair inf(nu, pi, std::numeric_limits<double>::infinity());
    EXPECT_DOUBLE_EQ(c_p_prefactor(0.5, inf, 0), 5.0);
    EXPECT_DOUBLE_EQ(c_p_prefactor(0.5, inf, 50), 5.0);
    expect_error(ErrorKind::InvalidP, [] { c_p_from_norm(0.5, 1.0, 0, 1.0, 1.0); });
}

TEST(CpPrefactor, BranchesAndBurnInDecay) {
    const double lam = 0.5, dev = 0.7;
    EXPECT_NEAR(c_p_from_norm(lam, 1.5, 2, dev, 0), 1 + std::pow(2.0, 2 / 1.5) * std::pow(lam, 2 * 2 / 3.0) * dev, 1e-14);
    EXPECT_NEAR(c_p_from_norm(lam, 4.0, 2, dev, 0), 1 + std::pow(2.0, 2 / (4.0 / 3.0)) * std::pow(lam, 1.0) * dev, 1e-14);
    Vector pi(3), nu(3);
    pi << 0.2, 0.3, 0.5;
    nu << 0.6, 0.4, 0.0;
    const MeasurePair mp(nu, pi, 2.0);
    double prev = c_p_prefactor(lam, mp, 0);
    for (long n0 = 1; n0 <= 60; ++n0) {
        const double cur = c_p_prefactor(lam, mp, n0);
        EXPECT_LE(cur, prev);
        if (n0 <= 30) {
            EXPECT_LT(cur, prev);
        }
        EXPECT_GE(cur, 1.0);
        prev = cur;
    }
    EXPECT_NEAR(prev, 1.0, 1e-15);
}

TEST(T62, ReducesToT22) {
    Vector pi(3);
    pi << 0.2, 0.3, 0.5;
    const auto mp = MeasurePair::stationary(pi, std::numeric_limits<double>::infinity());
    const Range r{-1.0, 1.0};
    for (double lam_r : {-0.3, 0.0, 0.6}) {
        const long n = 25;
        const double eps = 0.2;
        const auto a = bound_t62(0.9, lam_r, mp, 0, r, n, 0.4, eps);
        const auto b = bound_t22(lam_r, r, n, 0.4, eps * static_cast<double>(n));
        EXPECT_EQ(a.variance_proxy, b.variance_proxy);
        EXPECT_EQ(a.mgf_bound, b.mgf_bound);
        EXPECT_EQ(a.tail_bound, b.tail_bound);
        EXPECT_EQ(a.prefactor, 1.0);
    }
}

TEST(T62, WorkedTail) {
    Vector pi(2), nu(2);
    pi << 0.5, 0.5;
    nu << 1.0, 0.0;
    const MeasurePair mp(nu, pi, std::numeric_limits<double>::infinity());
    const auto r = bound_t62(0.5, 0.5, mp, 7, {0.0, 1.0}, 1000, 0.0, 0.1);
    EXPECT_DOUBLE_EQ(r.prefactor, 2.0);
    EXPECT_NEAR(r.tail_bound, 4.0 * std::exp(-20.0 / 3.0), 1e-15);
    EXPECT_DOUBLE_EQ(r.eps, 100.0);
    EXPECT_DOUBLE_EQ(r.inputs_echo.at("eps_mean").get<double>(), 0.1);
}

TEST(T62, DominatesExactMgfAfterBurnIn) {
    std::mt19937_64 gen(45);
    for (int rep = 0; rep < 40; ++rep) {
        const int d = 3 + rep % 3;
        const auto chain = build_chain(oracle::random_kernel(d, gen));
        const double lam = absolute_lambda(chain), lam_r = right_lambda(chain);
        const Vector nu = oracle::random_probability(d, gen, 0.0);
        const double p = rep % 3 == 0 ? 1.5 : (rep % 3 == 1 ? 2.0 : 3.0);
        const MeasurePair mp(nu, chain.pi(), p);
        const long n0 = rep % 4;
        const Vector start = propagate(chain, nu, static_cast<int>(n0));
        const auto fs = random_steps(gen, d, 1 + rep % 10, true);
        const Range r{fs[0].a(), fs[0].b()};
        for (double t : kTs) {
            const double exact = centered_exact_log_mgf(chain, start, fs, t);
            const auto rep62 = bound_t62(lam, lam_r, mp, n0, r, static_cast<long>(fs.size()), t, 0.0);
            EXPECT_LE(exact, rep62.log_mgf_bound + 1e-9) << "rep " << rep << " t " << t;
        }
    }
}

TEST(McmcPlanTest, WorkedExample) {
    Vector pi(3);
    pi << 0.2, 0.3, 0.5;
    const auto mp = MeasurePair::stationary(pi, std::numeric_limits<double>::infinity());
    const auto plan = mcmc_plan(0.0, 0.0, mp, 0, {0.0, 1.0}, 0.1, 0.05);
    EXPECT_EQ(plan.n_closed_form, 185);
    EXPECT_EQ(plan.n_required, 185);
    EXPECT_LE(plan.tail_at_n, 0.05);
    EXPECT_GT(plan.tail_at_n_minus_1, 0.05);
}

TEST(McmcPlanTest, DoublingAlphaDoublesN) {
    Vector pi(2);
    pi << 0.5, 0.5;
    const auto mp = MeasurePair::stationary(pi, std::numeric_limits<double>::infinity());
    const auto one = mcmc_plan(0.0, 0.0, mp, 0, {0.0, 1.0}, 0.05, 0.01);
    const auto two = mcmc_plan(0.0, 1.0 / 3.0, mp, 0, {0.0, 1.0}, 0.05, 0.01);
    EXPECT_NEAR(two.alpha, 2.0, 1e-15);
    EXPECT_LE(std::abs(two.n_required - 2 * one.n_required), 1);
}

TEST(McmcPlanTest, RoundTripIsMinimal) {
    std::mt19937_64 gen(46);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const Vector pi = oracle::random_probability(4, gen);
        const Vector nu = oracle::random_probability(4, gen, 0.0);
        const double p = 1.2 + 5.0 * u(gen);
        const MeasurePair mp(nu, pi, p);
        const double lam = 0.9 * u(gen), lam_r = -0.5 + 1.3 * u(gen);
        const long n0 = rep % 20;
        const Range r{-u(gen), u(gen) + 0.1};
        const double eps = 0.02 + 0.2 * u(gen), delta = 0.001 + 0.2 * u(gen);
        const auto plan = mcmc_plan(lam, lam_r, mp, n0, r, eps, delta);
        EXPECT_LE(bound_t62(lam, lam_r, mp, n0, r, plan.n_required, 0.0, eps).tail_bound, delta);
        if (plan.n_required > 1) {
            EXPECT_GT(bound_t62(lam, lam_r, mp, n0, r, plan.n_required - 1, 0.0, eps).tail_bound, delta);
        }
    }
}

TEST(McmcPlanTest, Validation) {
    Vector pi(2);
    pi << 0.5, 0.5;
    const auto mp = MeasurePair::stationary(pi, 2.0);
    expect_error(ErrorKind::InvalidInput, [&] { mcmc_plan(0.1, 0.1, mp, 0, {0, 1}, 0.0, 0.05); });
    expect_error(ErrorKind::InvalidInput, [&] { mcmc_plan(0.1, 0.1, mp, 0, {0, 1}, 0.1, 1.0); });
}

TEST(Inhomogeneous, Examples) {
    const std::vector<Range> ranges{{0, 1}, {0, 2}, {-1, 1}, {0, 0.5}};
    const std::vector<double> zeros(3, 0.0);
    EXPECT_DOUBLE_EQ(inhomogeneous_proxy(zeros, ranges).fine, (1.0 + 4.0 + 4.0 + 0.25) / 4.0);
    const std::vector<Range> one{{-1.0, 2.0}};
    EXPECT_DOUBLE_EQ(inhomogeneous_proxy({}, one).fine, 9.0 / 4.0);
    const std::vector<double> same(9, 0.6);
    const auto eq = inhomogeneous_proxy(same, unit_ranges(10));
    EXPECT_LE(eq.fine, alpha(0.6) * 10 * 0.25);
    expect_error(ErrorKind::InvalidInput, [&] { inhomogeneous_proxy(same, unit_ranges(9)); });
    expect_error(ErrorKind::GapExhausted, [&] { inhomogeneous_proxy(std::vector<double>{1.0}, unit_ranges(2)); });
}

TEST(Inhomogeneous, FineBelowCoarse) {
    std::mt19937_64 gen(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + rep % 15;
        std::vector<Range> ranges;
        std::vector<double> lams;
        for (int i = 0; i < n; ++i) ranges.push_back({-u(gen), u(gen)});
        for (int i = 0; i + 1 < n; ++i) lams.push_back(0.95 * u(gen));
        const auto p = inhomogeneous_proxy(lams, ranges);
        EXPECT_LE(p.fine, p.coarse * (1 + 1e-12));
    }
}

TEST(Inhomogeneous, DominatesExactMgfAcrossLeonPerronKernels) {
    std::mt19937_64 gen(48);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        const int d = 2 + rep % 4;
        const int n = 2 + rep % 8;
        const Vector pi = oracle::random_probability(d, gen);
        std::vector<Matrix> kernels;
        std::vector<double> lams;
        for (int i = 0; i + 1 < n; ++i) {
            const double c = 0.9 * u(gen);
            kernels.push_back(leon_perron_kernel(pi, c).P());
            lams.push_back(c);
        }
        const auto fs = random_steps(gen, d, n, false);
        for (double t : kTs) {
            // backward recursion with step-dependent kernels
            Vector v = (t * fs.back().values()).array().exp();
            for (int i = n - 2; i >= 0; --i) {
                v = (t * fs[static_cast<std::size_t>(i)].values()).array().exp().matrix().cwiseProduct(
                    kernels[static_cast<std::size_t>(i)] * v);
            }
            double centre = 0.0;
            for (const auto& f : fs) centre += f.mean(pi);
            const double exact = std::log(pi.dot(v)) - t * centre;
            EXPECT_LE(exact, bound_inhomogeneous(lams, ranges_of(fs), t, 0.0).log_mgf_bound + 1e-9);
        }
    }
}

TEST(TA1, Examples) {
    const auto ranges = unit_ranges(4);
    const double expected = 2.0 * (1.0625 / 0.9375) * 2.0 * (2.0 * 0.25);
    EXPECT_NEAR(bound_ta1(0.25, 2, ranges, 1.0, 0.0).variance_proxy, expected, 1e-14);
    EXPECT_NEAR(expected, 2.2667, 1e-4);
    for (double lam : {0.0, 0.4}) {
        EXPECT_NEAR(bound_ta1(lam, 1, unit_ranges(6), 1.0, 0.0).variance_proxy, t21_proxy(lam, unit_ranges(6)), 1e-15);
    }
    for (int k : {2, 3, 4}) {
        const double lk = 0.7;
        EXPECT_NEAR(bound_ta1(lk, k, unit_ranges(12), 0.0, 0.0).variance_proxy,
                    k * alpha(std::pow(lk, k)) * 12 * 0.25, 1e-12);
    }
}

TEST(TA1, PeriodicChainHasFiniteGroupedBound) {
    Matrix P(3, 3);
    P << 0, 1, 0, 0, 0, 1, 0.5, 0, 0.5;
    const auto chain = build_chain(P);
    int k = 1;
    while (grouped_lambda(chain, k) >= 1.0 - 1e-9) ++k;
    ASSERT_LE(k, 10);
    const double lk = grouped_lambda(chain, k);
    std::mt19937_64 gen(49);
    const auto fs = random_steps(gen, 3, 12, false);
    for (double t : kTs) {
        const double exact = centered_exact_log_mgf(chain, chain.pi(), fs, t);
        EXPECT_LE(exact, bound_ta1(lk, k, ranges_of(fs), t, 0.0).log_mgf_bound + 1e-9);
    }
}

TEST(Monotonicity, ProxyAndTail) {
    const auto ranges = unit_ranges(5);
    double prev = -1.0;
    for (double lam = 0.0; lam < 0.99; lam += 0.01) {
        const double p = t21_proxy(lam, ranges);
        EXPECT_GT(p, prev);
        prev = p;
    }
    double prev_tail = std::numeric_limits<double>::infinity();
    for (double eps = 0.1; eps < 5.0; eps += 0.1) {
        const double tail = bound_t21(0.3, ranges, 0.0, eps).tail_bound;
        EXPECT_LT(tail, prev_tail);
        prev_tail = tail;
    }
    EXPECT_LT(bound_t21(0.2, ranges, 0.0, 1.0).tail_bound, bound_t21(0.5, ranges, 0.0, 1.0).tail_bound);
}

TEST(LogSpace, LargeTDoesNotOverflow) {
    const auto r = bound_t21(0.5, unit_ranges(1000), 200.0, 1e4);
    EXPECT_TRUE(std::isfinite(r.log_mgf_bound));
    EXPECT_TRUE(std::isinf(r.mgf_bound));
    EXPECT_TRUE(std::isfinite(r.log_tail_bound));
}

TEST(TheoremNames, RoundTrip) {
    for (Theorem th : {Theorem::Classical, Theorem::T2_1, Theorem::T2_2, Theorem::T2_3, Theorem::T6_2, Theorem::TA_1,
                       Theorem::Inhomog}) {
        EXPECT_EQ(parse_theorem(theorem_name(th)), th);
    }
    expect_error(ErrorKind::InvalidInput, [] { parse_theorem("t99"); });
}
