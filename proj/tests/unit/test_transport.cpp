#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "elmap/assignment.hpp"
#include "elmap/transport.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace elmap;
using testing_support::random_bistochastic;
using testing_support::random_probability;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::argument;
}

}  // namespace

TEST(Wasserstein, EqualVectorsAreAtZero) {
    const std::vector<double> a{0.2, 0.3, 0.5};
    EXPECT_EQ(wasserstein_1d(a, a), 0.0);
}

TEST(Wasserstein, UniformVersusFirstUnitVectorInTwoDimensions) {
    EXPECT_NEAR(wasserstein_1d(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}), 0.25, 1e-15);
}

TEST(Wasserstein, TightnessFamilyAtOne) {
    EXPECT_NEAR(wasserstein_1d(std::vector<double>{0.5, 0, 0.5}, std::vector<double>{0, 1, 0}), 0.25, 1e-15);
}

TEST(Wasserstein, DifferentDimensionsWithSameDistribution) {
    EXPECT_NEAR(wasserstein_1d(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}), 0.0, 1e-15);
}

TEST(Wasserstein, UnnormalizedInputIsScaled) {
    EXPECT_NEAR(wasserstein_1d(std::vector<double>{1, 1}, std::vector<double>{2, 0}), 0.25, 1e-15);
}

TEST(Wasserstein, ZeroVectorIsDegenerate) {
    EXPECT_EQ(kind_of([] { (void)wasserstein_1d(std::vector<double>{0, 0}, std::vector<double>{1, 0}); }), ErrorKind::degenerate);
}

// Per-column closed form obtained by integrating the two CDFs piece by piece.
TEST(Wasserstein, UniformVersusUnitVectorExactIntegral) {
    for (int m = 2; m <= 9; ++m) {
        const std::vector<double> u(static_cast<std::size_t>(m), 1.0 / m);
        for (int i = 1; i <= m; ++i) {
            std::vector<double> e(static_cast<std::size_t>(m), 0.0);
            e[static_cast<std::size_t>(i - 1)] = 1.0;
            const double sq = (i - 1.0) * (i - 1.0) + (m - i) * (m - i);
            const double expected = sq * (1.0 + 1.0 / (m - 1)) / (2.0 * m * m);
            ASSERT_NEAR(wasserstein_1d(u, e), expected, 1e-14) << "m=" << m << " i=" << i;
        }
    }
}

TEST(WassersteinProperty, MatchesQuadratureOracle) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 300; ++t) {
        const int ma = std::uniform_int_distribution<int>(1, 9)(rng);
        const int mb = std::uniform_int_distribution<int>(1, 9)(rng);
        const auto a = random_probability(rng, ma);
        const auto b = random_probability(rng, mb);
        ASSERT_NEAR(wasserstein_1d(a, b), oracle::wasserstein_quadrature(a, b), 1e-12);
        ASSERT_NEAR(wasserstein_1d(a, b), wasserstein_1d(b, a), 1e-15);
    }
}

TEST(Emd, Examples) {
    EXPECT_DOUBLE_EQ(emd_1d(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(emd_1d(std::vector<double>{0.5, 0, 0.5}, std::vector<double>{0, 1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(emd_1d(std::vector<double>{0.3, 0.7}, std::vector<double>{0.3, 0.7}), 0.0);
}

TEST(Emd, UnequalDimensionsAreADimensionError) {
    EXPECT_EQ(kind_of([] { (void)emd_1d(std::vector<double>{1}, std::vector<double>{0.5, 0.5}); }), ErrorKind::dimension);
}

TEST(EmdProperty, BoundsAgainstWasserstein) {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 2000; ++t) {
        const int m = std::uniform_int_distribution<int>(2, 20)(rng);
        const auto a = random_probability(rng, m);
        const auto b = random_probability(rng, m);
        const double e = emd_1d(a, b);
        ASSERT_NEAR(e, oracle::emd(a, b), 1e-12);
        const double mw = m * wasserstein_1d(a, b);
        ASSERT_LE(mw, e + 1e-12);
        ASSERT_GE(mw, std::max(0.5 * e, e - 1.0) - 1e-12);
        ASSERT_LE(e, m - 1 + 1e-12);
    }
}

TEST(Stretch, DuplicatesColumnsInBlocks) {
    FrequencyMatrix x(2);
    x.at(0, 0) = 0.25;
    x.at(1, 0) = 0.75;
    x.at(0, 1) = 0.75;
    x.at(1, 1) = 0.25;
    const auto s = stretch(x, 4);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(s[0], x.column(0));
    EXPECT_EQ(s[1], x.column(0));
    EXPECT_EQ(s[2], x.column(1));
    EXPECT_EQ(s[3], x.column(1));
    EXPECT_EQ(stretch(x, 2), x.columns());
}

TEST(Stretch, NonMultipleIsAnArgumentError) {
    FrequencyMatrix x(3);
    EXPECT_EQ(kind_of([&] { (void)stretch(x, 4); }), ErrorKind::argument);
}

TEST(Assignment, MatchesPermutationOracle) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
        const int n = std::uniform_int_distribution<int>(1, 7)(rng);
        std::vector<std::vector<std::int64_t>> cost(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
        std::vector<std::int64_t> flat;
        for (auto& row : cost) {
            for (auto& c : row) {
                c = std::uniform_int_distribution<std::int64_t>(0, 20)(rng);
                flat.push_back(c);
            }
        }
        const auto r = solve_assignment(flat, static_cast<std::size_t>(n));
        ASSERT_EQ(r.cost, oracle::assignment_bruteforce(cost));
        std::int64_t realized = 0;
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (std::size_t i = 0; i < r.row_to_col.size(); ++i) {
            ASSERT_FALSE(used[r.row_to_col[i]]);
            used[r.row_to_col[i]] = true;
            realized += cost[i][r.row_to_col[i]];
        }
        ASSERT_EQ(realized, r.cost);
    }
}

TEST(Assignment, TiesPreferLowestColumns) {
    const auto r = solve_assignment(std::vector<double>(9, 1.0), 3);
    EXPECT_EQ(r.row_to_col, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(MatrixWasserstein, SelfDistanceIsZeroWithIdentityPlan) {
    std::mt19937_64 rng(24);
    const auto x = random_bistochastic(rng, 5).columns();
    const auto r = matrix_wasserstein(x, x);
    EXPECT_NEAR(r.value, 0.0, 1e-15);
}

TEST(MatrixWasserstein, UniformVersusIdentityAtTwo) {
    const auto un = frequency_matrix(testing_support::un_election(2)).columns();
    const auto id = frequency_matrix(testing_support::id_election(2, 3)).columns();
    EXPECT_NEAR(matrix_wasserstein(un, id).value, 0.25, 1e-15);
}

TEST(MatrixWasserstein, ColumnCountMismatchIsADimensionError) {
    std::vector<Column> a{{1.0}};
    std::vector<Column> b{{1.0, 0.0}, {0.0, 1.0}};
    EXPECT_EQ(kind_of([&] { (void)matrix_wasserstein(a, b); }), ErrorKind::dimension);
}

TEST(MatrixWasserstein, MatchesBruteForceColumnMatching) {
    std::mt19937_64 rng(25);
    for (int t = 0; t < 40; ++t) {
        const int m = std::uniform_int_distribution<int>(1, 6)(rng);
        const auto x = random_bistochastic(rng, m).columns();
        const auto y = random_bistochastic(rng, m).columns();
        ASSERT_NEAR(matrix_wasserstein(x, y).value, oracle::positionwise_bruteforce(x, y), 1e-9);
    }
}

TEST(MatrixWassersteinProperty, SymmetryAndTriangle) {
    std::mt19937_64 rng(26);
    for (int t = 0; t < 200; ++t) {
        const int m = std::uniform_int_distribution<int>(1, 7)(rng);
        const auto x = random_bistochastic(rng, m).columns();
        const auto y = random_bistochastic(rng, m).columns();
        const auto z = random_bistochastic(rng, m).columns();
        const double xy = matrix_wasserstein(x, y).value;
        ASSERT_NEAR(xy, matrix_wasserstein(y, x).value, 1e-12);
        ASSERT_LE(matrix_wasserstein(x, z).value, xy + matrix_wasserstein(y, z).value + 1e-9);
    }
}

TEST(Transportation, StretchedTwoByThreeAgreesWithAllBijectionsAtSix) {
    std::mt19937_64 rng(27);
    for (int t = 0; t < 10; ++t) {
        const auto x = random_bistochastic(rng, 2);
        const auto y = random_bistochastic(rng, 3);
        const auto sx = stretch(x, 6);
        const auto sy = stretch(y, 6);
        std::vector<std::vector<double>> cost(6, std::vector<double>(6));
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = 0; j < 6; ++j) cost[i][j] = wasserstein_1d(sx[i], sy[j]);
        }
        ASSERT_NEAR(transport_wasserstein(x, y).value, oracle::assignment_bruteforce(cost) / 6.0, 1e-9);
    }
}

TEST(Transportation, PlanConservesSuppliesAndDemands) {
    std::mt19937_64 rng(28);
    for (int t = 0; t < 50; ++t) {
        const int m1 = std::uniform_int_distribution<int>(1, 9)(rng);
        const int m2 = std::uniform_int_distribution<int>(1, 9)(rng);
        const auto x = random_bistochastic(rng, m1);
        const auto y = random_bistochastic(rng, m2);
        const auto r = transport_wasserstein(x, y);
        std::vector<double> out(static_cast<std::size_t>(m1), 0.0);
        std::vector<double> in(static_cast<std::size_t>(m2), 0.0);
        double cost = 0.0;
        for (const auto& f : r.plan.flow) {
            ASSERT_GE(f.mass, 0.0);
            out[f.from] += f.mass;
            in[f.to] += f.mass;
            cost += f.mass * wasserstein_1d(x.column(static_cast<int>(f.from)), y.column(static_cast<int>(f.to)));
        }
        for (double s : out) ASSERT_NEAR(s, 1.0 / m1, 1e-12);
        for (double d : in) ASSERT_NEAR(d, 1.0 / m2, 1e-12);
        ASSERT_NEAR(cost, r.value, 1e-12);
    }
}

TEST(TransportationProperty, StretchInvariance) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 60; ++t) {
        const int m = std::uniform_int_distribution<int>(1, 5)(rng);
        const auto x = random_bistochastic(rng, m);
        const auto y = random_bistochastic(rng, m);
        const double base = matrix_wasserstein(x.columns(), y.columns()).value;
        for (int k : {2, 3}) ASSERT_NEAR(matrix_wasserstein(stretch(x, m * k), stretch(y, m * k)).value, base, 1e-9);
    }
}
