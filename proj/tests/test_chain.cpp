#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hoeffmc;

namespace {

Matrix birth_death() {
    Matrix P(3, 3);
    P << 0.5, 0.5, 0.0, 0.25, 0.5, 0.25, 0.0, 0.5, 0.5;
    return P;
}

Matrix rotation3() {
    Matrix P(3, 3);
    P << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    return P;
}

Vector uniform(int d) { return Vector::Constant(d, 1.0 / d); }

template <class F>
void expect_error(ErrorKind kind, F&& f) {
    try {
        f();
        ADD_FAILURE() << "expected " << error_name(kind);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), kind) << e.what();
    }
}

}  // namespace

TEST(BuildChain, SingleState) {
    const auto c = build_chain(Matrix::Identity(1, 1));
    EXPECT_EQ(c.d(), 1);
    EXPECT_DOUBLE_EQ(c.pi()(0), 1.0);
}

TEST(BuildChain, SymmetricTwoState) {
    Matrix P = Matrix::Constant(2, 2, 0.5);
    const auto c = build_chain(P);
    EXPECT_NEAR(c.pi()(0), 0.5, 1e-15);
    EXPECT_NEAR(c.pi()(1), 0.5, 1e-15);
}

TEST(BuildChain, BirthDeathMatchesPowerIteration) {
    const auto c = build_chain(birth_death());
    const Vector ref = oracle::power_stationary(birth_death());
    EXPECT_LT((c.pi() - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(c.pi()(0), 0.25, 1e-14);
    EXPECT_NEAR(c.pi()(1), 0.5, 1e-14);
    // detailed balance
    const Matrix flow = c.pi().asDiagonal() * c.P();
    EXPECT_LT((flow - flow.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BuildChain, RandomChainsSatisfyInvariants) {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = 2 + rep % 7;
        const Matrix P = rep % 2 ? oracle::random_kernel(d, gen) : oracle::random_sparse_kernel(d, gen);
        const auto c = build_chain(P);
        EXPECT_NEAR(c.pi().sum(), 1.0, 1e-12);
        EXPECT_GT(c.pi().minCoeff(), 0.0);
        EXPECT_LT((c.pi().transpose() * c.P() - c.pi().transpose()).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((c.P().rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_LT((c.pi() - oracle::power_stationary(P)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(BuildChain, RejectsBadRowSum) {
    Matrix P = Matrix::Constant(2, 2, 0.5);
    P(0, 0) += 1e-8;
    expect_error(ErrorKind::NotStochastic, [&] { build_chain(P); });
    P(0, 0) = 0.5 + 1e-11;
    EXPECT_NO_THROW(build_chain(P));
}

TEST(BuildChain, RejectsNegativeAndNonSquare) {
    Matrix P(2, 2);
    P << 1.1, -0.1, 0.5, 0.5;
    expect_error(ErrorKind::NotStochastic, [&] { build_chain(P); });
    expect_error(ErrorKind::NotStochastic, [&] { build_chain(Matrix::Constant(2, 3, 1.0 / 3)); });
}

TEST(BuildChain, RejectsNonUniqueOrTransient) {
    expect_error(ErrorKind::DegenerateStationary, [&] { build_chain(Matrix::Identity(2, 2)); });
    Matrix P(2, 2);
    P << 1.0, 0.0, 0.5, 0.5;
    expect_error(ErrorKind::DegenerateStationary, [&] { build_chain(P); });
}

TEST(BuildChain, SuppliedStationaryIsChecked) {
    Vector wrong(3);
    wrong << 0.2, 0.5, 0.3;
    expect_error(ErrorKind::DegenerateStationary, [&] { FiniteChain::with_stationary(birth_death(), wrong); });
    const auto id = FiniteChain::with_stationary(Matrix::Identity(3, 3), uniform(3));
    EXPECT_EQ(id.d(), 3);
}

TEST(TimeReversal, SymmetricIsItself) {
    const auto c = build_chain(Matrix::Constant(3, 3, 1.0 / 3));
    EXPECT_LT((time_reversal(c) - c.P()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TimeReversal, RotationReverses) {
    const auto c = build_chain(rotation3());
    EXPECT_LT((time_reversal(c) - rotation3().transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TimeReversal, BalanceIdentityOnRandomChains) {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 30; ++rep) {
        const auto c = build_chain(oracle::random_kernel(3 + rep % 4, gen));
        const Matrix Ps = time_reversal(c);
        const Matrix lhs = c.pi().asDiagonal() * c.P();
        const Matrix rhs = (c.pi().asDiagonal() * Ps).transpose();
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LT((Ps.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_LT((c.pi().transpose() * Ps - c.pi().transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Reversiblization, ReversibleIsItself) {
    const auto c = build_chain(birth_death());
    EXPECT_LT((additive_reversiblization(c) - c.P()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Reversiblization, RotationGivesSymmetricCirculant) {
    const auto c = build_chain(rotation3());
    const Matrix R = additive_reversiblization(c);
    const Matrix expected = 0.5 * (rotation3() + rotation3().transpose());
    EXPECT_LT((R - expected).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((R - R.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Reversiblization, SelfAdjointOnRandomChains) {
    std::mt19937_64 gen(6);
    for (int rep = 0; rep < 30; ++rep) {
        const auto c = build_chain(oracle::random_sparse_kernel(3 + rep % 5, gen));
        const Matrix R = additive_reversiblization(c);
        const Matrix flow = c.pi().asDiagonal() * R;
        EXPECT_LT((flow - flow.transpose()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((R.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_LT((c.pi().transpose() * R - c.pi().transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(LeonPerron, Endpoints) {
    Vector pi(3);
    pi << 0.25, 0.5, 0.25;
    const auto iid = leon_perron_kernel(pi, 0.0);
    for (int i = 0; i < 3; ++i) EXPECT_LT((iid.P().row(i).transpose() - pi).cwiseAbs().maxCoeff(), 1e-15);
    const auto id = leon_perron_kernel(pi, 1.0);
    EXPECT_LT((id.P() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_DOUBLE_EQ(absolute_lambda(id), 1.0);
}

TEST(LeonPerron, LambdaEqualsCoefficient) {
    Vector pi(3);
    pi << 0.25, 0.5, 0.25;
    EXPECT_NEAR(absolute_lambda(leon_perron_kernel(pi, 0.3)), 0.3, 1e-12);
    std::mt19937_64 gen(3);
    for (int i = 0; i <= 9; ++i) {
        const double c = 0.1 * i;
        const Vector p = oracle::random_probability(5, gen);
        const auto chain = leon_perron_kernel(p, c);
        EXPECT_NEAR(absolute_lambda(chain), c, 1e-12);
        EXPECT_NEAR(right_lambda(chain), c, 1e-12);
        EXPECT_LT((chain.pi() - p).cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(AbsoluteLambda, BirthDeath) { EXPECT_NEAR(absolute_lambda(build_chain(birth_death())), 0.5, 1e-12); }

TEST(AbsoluteLambda, RotationHasNoGap) { EXPECT_NEAR(absolute_lambda(build_chain(rotation3())), 1.0, 1e-12); }

TEST(AbsoluteLambda, MatchesGramOracle) {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 60; ++rep) {
        const auto c = build_chain(rep % 2 ? oracle::random_kernel(2 + rep % 7, gen)
                                           : oracle::random_sparse_kernel(2 + rep % 7, gen));
        EXPECT_NEAR(absolute_lambda(c), oracle::lambda_via_gram(c.P(), c.pi()), 1e-10);
    }
}

TEST(RightLambda, Examples) {
    EXPECT_NEAR(right_lambda(build_chain(birth_death())), 0.5, 1e-12);
    Matrix flip(2, 2);
    flip << 0, 1, 1, 0;
    EXPECT_NEAR(right_lambda(build_chain(flip)), -1.0, 1e-12);
    EXPECT_EQ(right_lambda(build_chain(Matrix::Identity(1, 1))), 0.0);
}

TEST(RightLambda, MatchesFullSpectrumOracle) {
    std::mt19937_64 gen(9);
    for (int rep = 0; rep < 60; ++rep) {
        const auto c = build_chain(rep % 2 ? oracle::random_kernel(2 + rep % 7, gen)
                                           : oracle::random_sparse_kernel(2 + rep % 7, gen));
        EXPECT_NEAR(right_lambda(c), oracle::lambda_right_via_full_spectrum(c.P(), c.pi()), 1e-10);
    }
}

TEST(SpectralRadius, ReversibleConvergesToLambda) {
    std::mt19937_64 gen(10);
    for (int rep = 0; rep < 10; ++rep) {
        const auto c = build_chain(oracle::random_reversible_kernel(3 + rep % 5, gen));
        const auto est = spectral_radius_lambda(c, 30);
        EXPECT_NEAR(est.estimate, absolute_lambda(c), 1e-6);
        EXPECT_EQ(est.k_used, 30);
        EXPECT_EQ(est.sequence.size(), 30u);
    }
}

TEST(SpectralRadius, LeonPerronIsConstant) {
    Vector pi(4);
    pi << 0.1, 0.2, 0.3, 0.4;
    const auto est = spectral_radius_lambda(leon_perron_kernel(pi, 0.6), 12);
    for (double v : est.sequence) EXPECT_NEAR(v, 0.6, 1e-12);
    EXPECT_TRUE(est.envelope_nonincreasing);
}

TEST(SpectralRadius, NilpotentMeanZeroPartDecays) {
    Matrix P(3, 3);
    P << 0.5, 0.5, 0.0, 1.0 / 6, 1.0 / 6, 2.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3;
    const auto c = build_chain(P);
    EXPECT_LT((c.pi() - uniform(3)).cwiseAbs().maxCoeff(), 1e-14);
    const double lam = absolute_lambda(c);
    EXPECT_NEAR(lam, std::sqrt(12.0) / 6.0, 1e-12);
    EXPECT_LT(oracle::second_eigen_modulus(P), 1e-6);
    const auto est = spectral_radius_lambda(c, 5);
    EXPECT_NEAR(est.sequence[0], lam, 1e-12);
    EXPECT_LT(est.sequence[1], 1e-6);
    EXPECT_LT(est.estimate, lam);
    expect_error(ErrorKind::InvalidInput, [&] { spectral_radius_lambda(c, 0); });
}

TEST(Properties, LambdaOfReversalAndReversiblization) {
    std::mt19937_64 gen(12);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + rep % 7;
        const auto c = build_chain(rep % 3 ? oracle::random_kernel(d, gen) : oracle::random_sparse_kernel(d, gen));
        const double lam = absolute_lambda(c);
        const auto rev = FiniteChain::with_stationary(time_reversal(c), c.pi());
        const auto sym = FiniteChain::with_stationary(additive_reversiblization(c), c.pi());
        EXPECT_NEAR(absolute_lambda(rev), lam, 1e-10);
        EXPECT_LE(absolute_lambda(sym), lam + 1e-10);
        EXPECT_LE(right_lambda(c), lam + 1e-10);
        const auto s = summarize(c, 20);
        EXPECT_LE(s.lambda_inf_estimate, s.lambda_abs + 1e-8);
        EXPECT_LE(s.lambda_right, s.lambda_abs + 1e-10);
        if (s.alpha_abs) {
            EXPECT_NEAR(*s.alpha_abs, (1 + lam) / (1 - lam), 1e-12);
        }
        const double x = std::max(s.lambda_right, 0.0);
        ASSERT_TRUE(s.alpha_right.has_value());
        EXPECT_NEAR(*s.alpha_right, (1 + x) / (1 - x), 1e-12);
    }
}

TEST(Properties, LeonPerronDominatesBilinearForm) {
    std::mt19937_64 gen(13);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + rep % 6;
        const auto c = build_chain(oracle::random_sparse_kernel(d, gen));
        const double lam = absolute_lambda(c);
        const auto hat = leon_perron_kernel(c.pi(), lam);
        Vector h1(d), h2(d);
        for (int i = 0; i < d; ++i) {
            h1(i) = z(gen);
            h2(i) = z(gen);
        }
        const double lhs = std::abs(pi_inner(c.pi(), c.P() * h1, h2));
        const double rhs = std::sqrt(pi_inner(c.pi(), hat.P() * h1, h1)) * std::sqrt(pi_inner(c.pi(), hat.P() * h2, h2));
        EXPECT_LE(lhs, rhs + 1e-10);
    }
}

TEST(Properties, MultiplicationOperatorNormBound) {
    std::mt19937_64 gen(14);
    std::uniform_real_distribution<double> u(-2.0, 2.0), cu(0.0, 0.999);
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + rep % 6;
        const Vector pi = oracle::random_probability(d, gen);
        const auto hat = leon_perron_kernel(pi, cu(gen));
        Vector g(d);
        for (int i = 0; i < d; ++i) g(i) = u(gen);
        const Matrix op = g.asDiagonal() * hat.P() * g.asDiagonal();
        EXPECT_LE(pi_norm(pi, g), std::sqrt(pi_operator_norm(pi, op)) + 1e-10);
    }
}

TEST(MeasurePairTest, Validation) {
    const Vector pi = uniform(4);
    expect_error(ErrorKind::InvalidP, [&] { MeasurePair(pi, pi, 1.0); });
    expect_error(ErrorKind::InvalidP, [&] { MeasurePair(pi, pi, std::nan("")); });
    Vector nu(4);
    nu << 0.5, 0.5, 0.1, 0.0;
    expect_error(ErrorKind::InvalidInput, [&] { MeasurePair(nu, pi, 2.0); });
    nu << 1.0, 0.0, 0.0, 0.0;
    const MeasurePair mp(nu, pi, std::numeric_limits<double>::infinity());
    EXPECT_EQ(mp.q(), 1.0);
    EXPECT_TRUE(mp.p_is_infinite());
    for (int i = 0; i < 4; ++i) EXPECT_EQ(mp.density()(i) * pi(i), nu(i));
    EXPECT_DOUBLE_EQ(MeasurePair(nu, pi, 4.0).q(), 4.0 / 3.0);
}
