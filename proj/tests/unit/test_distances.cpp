#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <sstream>

#include "elmap/distances.hpp"
#include "elmap/pairwise.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace elmap;
using testing_support::an_election;
using testing_support::id_election;
using testing_support::random_election;
using testing_support::un_election;

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

Election relabel(const Election& e, std::mt19937_64& rng) {
    auto sigma = testing_support::iota_vec(e.m);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    Election out = e;
    for (auto& v : out.votes) v = oracle::rename(v, sigma);
    std::shuffle(out.votes.begin(), out.votes.end(), rng);
    return out;
}

Election cyclic_three() { return make_election(3, {{0, 1, 2}, {0, 1, 2}, {1, 2, 0}, {1, 2, 0}, {2, 0, 1}, {2, 0, 1}}, "cyclic"); }

}  // namespace

TEST(IsoSwap, SelfDistanceIsZero) {
    std::mt19937_64 rng(31);
    const auto e = random_election(rng, 5, 6, true);
    EXPECT_EQ(*iso_swap_distance(e, e).exact, Fraction(0, 1));
}

TEST(IsoSwap, ReversedIdentityIsIsomorphic) {
    auto rev = make_election(3, {{2, 1, 0}, {2, 1, 0}});
    EXPECT_EQ(*iso_swap_distance(id_election(3, 2), rev).exact, Fraction(0, 1));
}

TEST(IsoSwap, AntagonismVersusUniformGoldenValues) {
    EXPECT_EQ(*iso_swap_distance(an_election(3, 6), un_election(3)).exact, Fraction(4, 9));
    EXPECT_EQ(*iso_swap_distance(an_election(4, 24), un_election(4)).exact, Fraction(11, 18));
}

TEST(IsoSwap, SizeMismatchIsASizeError) {
    EXPECT_EQ(kind_of([] { (void)iso_swap_distance(id_election(3, 2), id_election(4, 2)); }), ErrorKind::size);
    EXPECT_EQ(kind_of([] { (void)iso_swap_distance(id_election(3, 2), id_election(3, 3)); }), ErrorKind::size);
}

TEST(IsoSwap, AboveTheExactCapIsACapabilityError) {
    EXPECT_EQ(kind_of([] { (void)iso_swap_distance(id_election(9, 2), id_election(9, 2)); }), ErrorKind::capability);
    SearchBudget b;
    b.max_exact_m = 3;
    EXPECT_EQ(kind_of([&] { (void)iso_swap_distance(id_election(4, 2), id_election(4, 2), b); }), ErrorKind::capability);
}

TEST(IsoSwapProperty, MatchesBruteForceOnSmallElections) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 60; ++t) {
        const int m = std::uniform_int_distribution<int>(1, 5)(rng);
        const int n = std::uniform_int_distribution<int>(1, 6)(rng);
        const bool truncated = t % 3 == 0;
        const auto e = random_election(rng, m, n, truncated);
        const auto f = random_election(rng, m, n, truncated);
        const auto r = iso_swap_search(e, f);
        ASSERT_EQ(r.half_swaps, oracle::iso_swap_bruteforce(e, f)) << "m=" << m << " n=" << n;
        // The reported maps realize the reported cost.
        std::int64_t realized = 0;
        for (std::size_t i = 0; i < e.votes.size(); ++i) {
            realized += oracle::half_swaps(oracle::rename(e.votes[i], r.candidate_map), f.votes[r.voter_map[i]]);
        }
        ASSERT_EQ(realized, r.half_swaps);
    }
}

TEST(IsoSwapProperty, InvariantUnderRelabelingAndVoterOrder) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 40; ++t) {
        const int m = std::uniform_int_distribution<int>(2, 7)(rng);
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        const auto e = random_election(rng, m, n, t % 2 == 0);
        const auto f = random_election(rng, m, n, t % 2 == 0);
        const auto d = *iso_swap_distance(e, f).exact;
        ASSERT_EQ(*iso_swap_distance(relabel(e, rng), relabel(f, rng)).exact, d);
        ASSERT_EQ(*iso_swap_distance(f, e).exact, d);
    }
}

TEST(IsoSwapProperty, NormalizedValueAtMostOne) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 40; ++t) {
        const int m = std::uniform_int_distribution<int>(2, 6)(rng);
        const auto e = random_election(rng, m, 5, true);
        const auto f = random_election(rng, m, 5, true);
        ASSERT_LE(iso_swap_distance(e, f).value, 1.0);
    }
}

TEST(Positionwise, SelfDistanceIsZero) {
    std::mt19937_64 rng(35);
    const auto e = random_election(rng, 6, 10, true);
    EXPECT_NEAR(positionwise_distance(e, e).value, 0.0, 1e-15);
}

// Exact integral of the per-column Wasserstein distances summed over the m columns.
TEST(Positionwise, UniformVersusIdentityExactIntegral) {
    for (int m : {2, 3, 4, 5, 6, 7, 8}) {
        EXPECT_NEAR(positionwise_distance(un_election(m), id_election(m, 3)).value, (2.0 * m - 1) / (6.0 * m), 1e-12) << "m=" << m;
    }
}

TEST(Positionwise, UniformVersusAntagonismForEvenM) {
    for (int m : {4, 6, 8}) EXPECT_NEAR(positionwise_distance(un_election(m), an_election(m, 2)).value, 1.0 / 6 - 1.0 / (6 * m), 1e-12);
    // At m = 2, AN and UN have the same frequency matrix.
    EXPECT_NEAR(positionwise_distance(un_election(2), an_election(2, 2)).value, 0.0, 1e-15);
}

TEST(Positionwise, CandidateCountMismatchIsASizeError) {
    EXPECT_EQ(kind_of([] { (void)positionwise_distance(id_election(3, 2), id_election(4, 2)); }), ErrorKind::size);
}

TEST(Positionwise, ValuesStayBelowAThird) {
    std::mt19937_64 rng(36);
    for (int t = 0; t < 100; ++t) {
        const int m = std::uniform_int_distribution<int>(2, 8)(rng);
        ASSERT_LE(positionwise_distance(random_election(rng, m, 5, true), random_election(rng, m, 5, true)).value, 0.34);
    }
}

TEST(PositionwiseHat, UniformElectionsOfDifferentSizesCoincide) {
    EXPECT_NEAR(positionwise_hat(un_election(3), un_election(4)).value, 0.0, 1e-15);
}

TEST(PositionwiseHat, IdentityElectionsOfDifferentSizesDiffer) {
    const double d = positionwise_hat(id_election(3, 2), id_election(4, 2)).value;
    EXPECT_GT(d, 0.0);
    // Explicit stretched assignment over 12 columns.
    const auto sx = stretch(frequency_matrix(id_election(3, 2)), 12);
    const auto sy = stretch(frequency_matrix(id_election(4, 2)), 12);
    EXPECT_NEAR(d, matrix_wasserstein(sx, sy).value, 1e-12);
    EXPECT_NEAR(d, 7.0 / 72.0, 1e-12);
}

TEST(PositionwiseHat, AboveTheCandidateCapIsACapabilityError) {
    SearchBudget b;
    b.max_pos_hat_m = 5;
    EXPECT_EQ(kind_of([&] { (void)positionwise_hat(id_election(6, 1), id_election(3, 1), b); }), ErrorKind::capability);
}

TEST(PositionwiseHatProperty, ExtendsPositionwiseOnEqualSizes) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 100; ++t) {
        const int m = std::uniform_int_distribution<int>(1, 8)(rng);
        const auto e = random_election(rng, m, std::uniform_int_distribution<int>(1, 12)(rng), false);
        const auto f = random_election(rng, m, std::uniform_int_distribution<int>(1, 12)(rng), false);
        ASSERT_NEAR(positionwise_hat(e, f).value, positionwise_distance(e, f).value, 1e-12);
    }
}

TEST(PositionwiseHatProperty, PseudodistanceOnMixedSizes) {
    std::mt19937_64 rng(38);
    for (int t = 0; t < 150; ++t) {
        std::vector<Election> es;
        for (int k = 0; k < 3; ++k) {
            const int m = std::uniform_int_distribution<int>(1, 7)(rng);
            es.push_back(random_election(rng, m, std::uniform_int_distribution<int>(1, 8)(rng), rng() % 2 == 0));
        }
        const double ab = positionwise_hat(es[0], es[1]).value;
        const double bc = positionwise_hat(es[1], es[2]).value;
        const double ac = positionwise_hat(es[0], es[2]).value;
        ASSERT_NEAR(positionwise_hat(es[1], es[0]).value, ab, 1e-12);
        ASSERT_NEAR(positionwise_hat(es[0], es[0]).value, 0.0, 1e-12);
        ASSERT_LE(ac, ab + bc + 1e-9);
    }
}

TEST(SwapTr, EqualSizesReduceToIsoSwap) {
    std::mt19937_64 rng(39);
    const auto e = random_election(rng, 4, 5, false);
    const auto f = random_election(rng, 4, 5, false);
    EXPECT_EQ(*swap_tr_hat(e, f).exact, *iso_swap_distance(e, f).exact);
}

TEST(SwapTr, PaddingAddsTiesOnlyInTheAppendedBlock) {
    const auto padded = pad_candidates(make_election(3, {{0, 1, 2}}), 5);
    // Against the same vote extended by a strict order of the two new candidates, only the new pair
    // (tie vs strict) disagrees.
    EXPECT_EQ(oracle::half_swaps(padded.votes[0], Vote({0, 1, 2, 3, 4}, 5)), 1);
    EXPECT_EQ(half_swaps(padded.votes[0], Vote({0, 1, 2, 3, 4}, 5)), 1);
    // Three ranked candidates above two tied ones; a vote ranking a new candidate first breaks
    // 3 mixed pairs strictly (2 half swaps each) and the new pair once.
    EXPECT_EQ(half_swaps(padded.votes[0], Vote({3, 0, 1, 2, 4}, 5)), oracle::half_swaps(padded.votes[0], Vote({3, 0, 1, 2, 4}, 5)));
}

TEST(SwapTr, IdentityElectionsOfSizesThreeAndFive) {
    EXPECT_EQ(*swap_tr_hat(id_election(3, 4), id_election(5, 4)).exact, Fraction(1, 10));
}

TEST(SwapTr, VoterCountMismatchIsASizeError) {
    EXPECT_EQ(kind_of([] { (void)swap_tr_hat(id_election(3, 2), id_election(4, 3)); }), ErrorKind::size);
}

TEST(SwapDel, TriangleViolationCounterexample) {
    const auto e = cyclic_three();
    EXPECT_EQ(*swap_del_hat(e, id_election(3, 6)).exact, Fraction(8, 9));
    for (int c = 0; c < 3; ++c) {
        const auto reduced = delete_candidates(e, {c});
        EXPECT_EQ(*swap_del_hat(reduced, id_election(2, 6)).exact, Fraction(2, 3));
    }
    EXPECT_EQ(*swap_del_hat(id_election(2, 6), id_election(3, 6)).exact, Fraction(0, 1));
}

TEST(SwapDel, EqualSizesReduceToIsoSwap) {
    std::mt19937_64 rng(40);
    const auto e = random_election(rng, 4, 4, false);
    const auto f = random_election(rng, 4, 4, false);
    EXPECT_EQ(*swap_del_hat(e, f).exact, *iso_swap_distance(e, f).exact);
}

TEST(SwapDel, MonteCarloWithEverySubsetReproducesExactMode) {
    std::mt19937_64 rng(41);
    const auto e = random_election(rng, 3, 4, false);
    const auto f = random_election(rng, 6, 4, false);
    DeletionMode exact;
    DeletionMode mc;
    mc.kind = DeletionMode::Kind::monte_carlo;
    mc.samples = 20;  // C(6, 3)
    mc.seed = 9;
    const auto a = swap_del_hat(e, f, exact);
    const auto b = swap_del_hat(e, f, mc);
    EXPECT_EQ(*a.exact, *b.exact);
    // Exhaustive oracle: average over all deletions of brute-force isomorphic swap.
    std::int64_t total = 0;
    int count = 0;
    for (int a1 = 0; a1 < 6; ++a1) {
        for (int a2 = a1 + 1; a2 < 6; ++a2) {
            for (int a3 = a2 + 1; a3 < 6; ++a3) {
                total += oracle::iso_swap_bruteforce(e, delete_candidates(f, {a1, a2, a3}));
                ++count;
            }
        }
    }
    EXPECT_EQ(*a.exact, Fraction(2 * total, static_cast<std::int64_t>(count) * 4 * 3 * 2));
}

TEST(SwapDel, MonteCarloIsSeedDeterministic) {
    std::mt19937_64 rng(42);
    const auto e = random_election(rng, 3, 4, false);
    const auto f = random_election(rng, 7, 4, false);
    DeletionMode mc;
    mc.kind = DeletionMode::Kind::monte_carlo;
    mc.samples = 5;
    mc.seed = 3;
    EXPECT_EQ(*swap_del_hat(e, f, mc).exact, *swap_del_hat(e, f, mc).exact);
}

TEST(Feature, Examples) {
    EXPECT_EQ(feature_distance(std::vector<double>{1, 2}, std::vector<double>{1, 2}).value, 0.0);
    EXPECT_DOUBLE_EQ(feature_distance(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}).value, std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(feature_distance(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}, Norm::l1).value, 2.0);
    EXPECT_EQ(kind_of([] { (void)feature_distance(std::vector<double>{1}, std::vector<double>{1, 2}); }), ErrorKind::dimension);
}

TEST(Pairwise, SingletonIsAZeroMatrix) {
    MetricSpec spec;
    const auto d = pairwise_matrix({id_election(3, 2)}, spec);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d(0, 0), 0.0);
}

TEST(Pairwise, IdentityElectionsUnderSwapAreAllZero) {
    MetricSpec spec;
    spec.metric = Metric::swap;
    const auto d = pairwise_matrix({id_election(4, 3), id_election(4, 3), id_election(4, 3)}, spec);
    EXPECT_EQ(d.max_entry(), 0.0);
}

TEST(Pairwise, FailingCellsAbortWithAReport) {
    MetricSpec spec;
    spec.metric = Metric::swap;
    auto a = id_election(3, 2);
    a.label = "small";
    auto b = id_election(4, 2);
    b.label = "large";
    try {
        (void)pairwise_matrix({a, b}, spec);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::size);
        EXPECT_NE(std::string(e.what()).find("(small, large)"), std::string::npos);
    }
}

TEST(Pairwise, PositionwiseHatMatrixIsAPseudometric) {
    std::mt19937_64 rng(43);
    std::vector<Election> es;
    for (int k = 0; k < 12; ++k) es.push_back(random_election(rng, std::uniform_int_distribution<int>(2, 8)(rng), 6, k % 2 == 0, "e" + std::to_string(k)));
    MetricSpec spec;
    const auto d = pairwise_matrix(es, spec, 3);
    EXPECT_TRUE(d.symmetric(0.0));
    EXPECT_EQ(d.triangle_violations(1e-9), 0u);
}

TEST(Pairwise, WorkerCountDoesNotChangeTheOutput) {
    std::mt19937_64 rng(44);
    std::vector<Election> es;
    for (int k = 0; k < 10; ++k) es.push_back(random_election(rng, 3 + k % 3, 6, false, "e" + std::to_string(k)));
    for (Metric metric : {Metric::pos_hat, Metric::swap_del, Metric::dap}) {
        MetricSpec spec;
        spec.metric = metric;
        spec.deletion.kind = DeletionMode::Kind::monte_carlo;
        spec.deletion.samples = 3;
        std::ostringstream one;
        std::ostringstream four;
        pairwise_matrix(es, spec, 1).write_csv(one);
        pairwise_matrix(es, spec, 4).write_csv(four);
        EXPECT_EQ(one.str(), four.str()) << to_string(metric);
    }
}

TEST(DistanceMatrixCsv, RoundTripsLabelsAndValues) {
    DistanceMatrix d({"a", "b", "c"}, Metric::pos_hat);
    d.set(0, 1, 0.125);
    d.set(0, 2, 1.0 / 3.0);
    d.set(1, 2, 0.5);
    std::ostringstream os;
    d.write_csv(os);
    std::istringstream is(os.str());
    const auto back = DistanceMatrix::read_csv(is);
    EXPECT_EQ(back.labels(), d.labels());
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(back(i, j), d(i, j), 1e-12);
    }
    EXPECT_EQ(os.str().substr(0, 8), "label,a,");
}

TEST(DistanceMatrixCsv, MalformedInputIsAParseError) {
    std::istringstream bad("label,a,b\na,0,x\nb,1,0\n");
    EXPECT_EQ(kind_of([&] { (void)DistanceMatrix::read_csv(bad); }), ErrorKind::parse);
}
