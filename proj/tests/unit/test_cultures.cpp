#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "elmap/cultures.hpp"
#include "elmap/dap.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace elmap;

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

CultureSpec spec_of(CultureKind k, int m, int n, std::uint64_t seed) {
    CultureSpec s;
    s.kind = k;
    s.m = m;
    s.n = n;
    s.seed = seed;
    return s;
}

std::vector<std::vector<int>> tops(const Election& e) {
    std::vector<std::vector<int>> out;
    for (const auto& v : e.votes) out.push_back(v.top);
    return out;
}

std::map<std::vector<int>, std::int64_t> histogram(const Election& e) {
    std::map<std::vector<int>, std::int64_t> h;
    for (const auto& v : e.votes) ++h[v.top];
    return h;
}

std::vector<std::int64_t> counts_of(const std::map<std::vector<int>, std::int64_t>& h) {
    std::vector<std::int64_t> c;
    for (const auto& [k, v] : h) c.push_back(v);
    return c;
}

}  // namespace

TEST(Cultures, EveryKindProducesValidCompleteElections) {
    for (auto k : {CultureKind::ic, CultureKind::mallows, CultureKind::urn, CultureKind::euclidean, CultureKind::sp_conitzer,
                   CultureKind::sp_walsh, CultureKind::spoc, CultureKind::gs, CultureKind::id, CultureKind::an,
                   CultureKind::un_approx, CultureKind::st}) {
        const auto e = sample_election(spec_of(k, 7, 20, 3));
        EXPECT_TRUE(validate_election(e).empty()) << to_string(k);
        EXPECT_TRUE(e.complete());
        EXPECT_EQ(e.votes.size(), 20u);
        EXPECT_EQ(e.m, 7);
    }
}

TEST(Cultures, SameSpecSameElection) {
    for (auto k : {CultureKind::ic, CultureKind::mallows, CultureKind::urn, CultureKind::euclidean, CultureKind::spoc}) {
        auto s = spec_of(k, 8, 50, 99);
        s.alpha = 0.3;
        EXPECT_EQ(tops(sample_election(s)), tops(sample_election(s)));
    }
}

TEST(Cultures, VoterStreamsAreIndependentOfTheVoterCount) {
    const auto small = sample_election(spec_of(CultureKind::ic, 6, 10, 5));
    const auto large = sample_election(spec_of(CultureKind::ic, 6, 40, 5));
    for (std::size_t v = 0; v < small.votes.size(); ++v) EXPECT_EQ(small.votes[v], large.votes[v]);
}

TEST(Cultures, InvalidSpecsAreArgumentErrors) {
    auto an = spec_of(CultureKind::an, 4, 5, 1);
    EXPECT_EQ(kind_of([&] { (void)sample_election(an); }), ErrorKind::argument);
    auto un = spec_of(CultureKind::un_exact, 3, 7, 1);
    EXPECT_EQ(kind_of([&] { (void)sample_election(un); }), ErrorKind::argument);
    auto mal = spec_of(CultureKind::mallows, 4, 5, 1);
    mal.norm_phi = 1.5;
    EXPECT_EQ(kind_of([&] { (void)sample_election(mal); }), ErrorKind::argument);
    auto urn = spec_of(CultureKind::urn, 4, 5, 1);
    urn.alpha = -1;
    EXPECT_EQ(kind_of([&] { (void)sample_election(urn); }), ErrorKind::argument);
}

TEST(Mallows, ZeroDispersionRepeatsTheCenter) {
    auto s = spec_of(CultureKind::mallows, 6, 30, 8);
    s.norm_phi = 0.0;
    const auto e = sample_election(s);
    EXPECT_EQ(histogram(e).size(), 1u);
    EXPECT_EQ(e.votes[0].top, (std::vector<int>{0, 1, 2, 3, 4, 5}));
}

TEST(Mallows, DispersionEndpoints) {
    EXPECT_EQ(norm_phi_to_phi(0.0, 8), 0.0);
    EXPECT_EQ(norm_phi_to_phi(1.0, 8), 1.0);
}

TEST(Mallows, DispersionMatchesIndependentBisection) {
    for (int m : {3, 5, 8, 12}) {
        for (double np : {0.1, 0.25, 0.5, 0.75, 0.9}) EXPECT_NEAR(norm_phi_to_phi(np, m), oracle::mallows_phi(np, m), 1e-8);
    }
}

TEST(Mallows, ExpectedSwapsFormula) {
    for (double phi : {0.2, 0.5, 0.8}) EXPECT_NEAR(mallows_expected_swaps(phi, 8), oracle::mallows_moments(phi, 8).first, 1e-10);
}

TEST(MallowsProperty, MeanSwapDistanceWithinThreeSigma) {
    for (int m : {5, 8}) {
        for (double np : {0.25, 0.5, 0.75}) {
            auto s = spec_of(CultureKind::mallows, m, 10000, 1234);
            s.norm_phi = np;
            const auto e = sample_election(s);
            const Vote center(testing_support::iota_vec(m), m);
            double sum = 0.0;
            for (const auto& v : e.votes) sum += oracle::bubble_inversions(v.top, center.top);
            const double mean = sum / 10000.0;
            const auto [mu, var] = oracle::mallows_moments(oracle::mallows_phi(np, m), m);
            EXPECT_NEAR(mu, np * m * (m - 1) / 4.0, 1e-8);
            EXPECT_LE(std::abs(mean - mu), 3 * std::sqrt(var / 10000.0)) << "m=" << m << " norm_phi=" << np;
        }
    }
}

TEST(Urn, ZeroAlphaIsUniform) {
    auto s = spec_of(CultureKind::urn, 3, 10000, 77);
    s.alpha = 0.0;
    const auto h = histogram(sample_election(s));
    ASSERT_EQ(h.size(), 6u);
    EXPECT_LT(oracle::chi_square_uniform(counts_of(h)), oracle::chi_square_critical_001(5));
}

TEST(Urn, LargeAlphaCopiesEarlierVotes) {
    auto s = spec_of(CultureKind::urn, 8, 200, 78);
    s.alpha = 5.0;
    EXPECT_LT(histogram(sample_election(s)).size(), 20u);
}

TEST(Ic, UniformOverAllOrders) {
    const auto h = histogram(sample_election(spec_of(CultureKind::ic, 4, 24000, 79)));
    ASSERT_EQ(h.size(), 24u);
    EXPECT_LT(oracle::chi_square_uniform(counts_of(h)), oracle::chi_square_critical_001(23));
}

TEST(Euclidean, OneDimensionalCubeIsSinglePeaked) {
    auto s = spec_of(CultureKind::euclidean, 6, 300, 80);
    s.dim = 1;
    EXPECT_TRUE(oracle::single_peaked_profile(tops(sample_election(s)), 6));
}

TEST(Euclidean, TwoDimensionalElectionsAreUsuallyNotSinglePeaked) {
    auto s = spec_of(CultureKind::euclidean, 6, 300, 81);
    s.dim = 2;
    EXPECT_FALSE(oracle::single_peaked_profile(tops(sample_election(s)), 6));
}

TEST(Euclidean, SphereElectionsAreValid) {
    auto s = spec_of(CultureKind::euclidean, 6, 50, 82);
    s.shape = Shape::sphere;
    s.dim = 3;
    EXPECT_TRUE(validate_election(sample_election(s)).empty());
}

TEST(SinglePeaked, ConitzerAndWalshAreSinglePeaked) {
    for (auto k : {CultureKind::sp_conitzer, CultureKind::sp_walsh}) {
        EXPECT_TRUE(oracle::single_peaked_profile(tops(sample_election(spec_of(k, 7, 1000, 83))), 7)) << to_string(k);
    }
}

TEST(SinglePeaked, WalshIsUniformOverSinglePeakedOrders) {
    const auto h = histogram(sample_election(spec_of(CultureKind::sp_walsh, 4, 10000, 84)));
    ASSERT_EQ(h.size(), 8u);
    EXPECT_LT(oracle::chi_square_uniform(counts_of(h)), oracle::chi_square_critical_001(7));
}

TEST(SinglePeaked, ConitzerPeakIsUniform) {
    const auto e = sample_election(spec_of(CultureKind::sp_conitzer, 5, 10000, 85));
    std::vector<std::int64_t> peaks(5, 0);
    for (const auto& v : e.votes) ++peaks[static_cast<std::size_t>(v.top[0])];
    EXPECT_LT(oracle::chi_square_uniform(peaks), oracle::chi_square_critical_001(4));
}

TEST(Spoc, PrefixesAreArcs) {
    const auto e = sample_election(spec_of(CultureKind::spoc, 7, 1000, 86));
    EXPECT_TRUE(oracle::spoc_profile(tops(e), 7));
    EXPECT_FALSE(oracle::single_peaked_profile(tops(e), 7));
}

TEST(GroupSeparable, VotesRespectTheTree) {
    for (int m : {5, 8}) {
        auto s = spec_of(CultureKind::gs, m, 1000, 87);
        s.tree = Tree::balanced;
        const auto bal = sample_election(s);
        const auto cb = oracle::balanced_clusters(0, m);
        for (const auto& v : bal.votes) ASSERT_TRUE(oracle::clusters_contiguous(v.top, cb));
        EXPECT_EQ(histogram(bal).size(), std::size_t{1} << (m - 1));
        s.tree = Tree::caterpillar;
        const auto cat = sample_election(s);
        const auto cc = oracle::caterpillar_clusters(m);
        for (const auto& v : cat.votes) ASSERT_TRUE(oracle::clusters_contiguous(v.top, cc));
    }
}

TEST(Special, AntagonismHasTwoReversedHalves) {
    const auto e = sample_election(spec_of(CultureKind::an, 3, 6, 1));
    const auto h = histogram(e);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h.begin()->second, 3);
    EXPECT_EQ(indicator_features(e).as_array(), (std::array<double, 3>{1, 0, 1}));
}

TEST(Special, ExactUniformHasEveryOrderEqually) {
    const auto e = sample_election(spec_of(CultureKind::un_exact, 3, 12, 1));
    EXPECT_EQ(indicator_features(e).as_array(), (std::array<double, 3>{1, 1, 0}));
}

TEST(Special, StratificationKeepsTheTopHalfOnTop) {
    const auto e = sample_election(spec_of(CultureKind::st, 7, 200, 88));
    for (const auto& v : e.votes) {
        for (int k = 0; k < 4; ++k) ASSERT_LT(v.top[static_cast<std::size_t>(k)], 4);
    }
    EXPECT_GT(histogram(e).size(), 50u);
}

TEST(Truncate, TopKKeepsThePrefix) {
    const auto e = sample_election(spec_of(CultureKind::ic, 6, 30, 89));
    TruncationSpec t;
    t.k = 2;
    const auto r = truncate(e, t);
    for (std::size_t v = 0; v < e.votes.size(); ++v) {
        EXPECT_EQ(r.votes[v].top, std::vector<int>(e.votes[v].top.begin(), e.votes[v].top.begin() + 2));
    }
    t.k = 6;
    EXPECT_EQ(tops(truncate(e, t)), tops(e));
}

TEST(Truncate, RandomDropWithZeroKeepsEverything) {
    const auto e = sample_election(spec_of(CultureKind::ic, 6, 30, 90));
    TruncationSpec t;
    t.method = TruncationSpec::Method::random_drop;
    t.p = 0.0;
    EXPECT_EQ(tops(truncate(e, t)), tops(e));
}

TEST(Truncate, RandomCutWithZeroKeepsOnlyTheTop) {
    const auto e = sample_election(spec_of(CultureKind::ic, 6, 200, 91));
    TruncationSpec t;
    t.method = TruncationSpec::Method::random_cut;
    t.p = 0.0;
    const auto r = truncate(e, t);
    for (std::size_t v = 0; v < e.votes.size(); ++v) EXPECT_EQ(r.votes[v].top, std::vector<int>{e.votes[v].top[0]});
}

TEST(Truncate, RandomCutLengthMatchesTheSolvedParameter) {
    const int m = 16;
    const double p = random_cut_p_for_length(m, m / 2.0);
    EXPECT_NEAR((1 - std::pow(p, m)) / (1 - p), m / 2.0, 1e-9);
    const auto e = sample_election(spec_of(CultureKind::ic, m, 20000, 92));
    TruncationSpec t;
    t.method = TruncationSpec::Method::random_cut;
    t.p = p;
    t.seed = 5;
    double total = 0.0;
    for (const auto& v : truncate(e, t).votes) total += static_cast<double>(v.top.size());
    EXPECT_NEAR(total / 20000.0, 8.0, 0.15);
}

TEST(Truncate, RandomDropRemovesAboutAFraction) {
    const auto e = sample_election(spec_of(CultureKind::ic, 10, 5000, 93));
    TruncationSpec t;
    t.method = TruncationSpec::Method::random_drop;
    t.p = 0.3;
    double kept = 0.0;
    const auto r = truncate(e, t);
    for (std::size_t v = 0; v < r.votes.size(); ++v) {
        kept += static_cast<double>(r.votes[v].top.size());
        // The survivors keep their relative order.
        const auto& full = e.votes[v].top;
        std::size_t at = 0;
        for (int c : r.votes[v].top) {
            while (at < full.size() && full[at] != c) ++at;
            ASSERT_LT(at, full.size());
        }
    }
    EXPECT_NEAR(kept / 50000.0, 0.7, 0.02);
}

TEST(Truncate, AlreadyTruncatedInputIsACapabilityError) {
    const auto e = make_election(3, {{0}});
    EXPECT_EQ(kind_of([&] { (void)truncate(e, TruncationSpec{}); }), ErrorKind::capability);
}

TEST(Truncate, SeedDeterminismAndVoterOrder) {
    const auto e = sample_election(spec_of(CultureKind::ic, 8, 100, 94));
    TruncationSpec t;
    t.method = TruncationSpec::Method::random_cut;
    t.p = 0.7;
    t.seed = 11;
    EXPECT_EQ(tops(truncate(e, t)), tops(truncate(e, t)));
}

TEST(Dataset, BasicRecipeComposition) {
    const auto d = build_dataset(Recipe::basic, 42);
    EXPECT_EQ(d.size(), 292u);
    std::map<std::string, int> fam;
    for (const auto& x : d) {
        ++fam[x.family];
        EXPECT_EQ(x.election.m, 8);
        EXPECT_EQ(x.election.votes.size(), 96u);
        EXPECT_TRUE(x.election.complete());
    }
    EXPECT_EQ(fam["Mallows"], 48);
    EXPECT_EQ(fam["Urn"], 48);
    EXPECT_EQ(fam["IC"], 16);
    EXPECT_EQ(fam["ID"], 1);
    EXPECT_EQ(fam["AN"], 1);
    EXPECT_EQ(fam["UN"], 1);
    EXPECT_EQ(fam["ST"], 1);
    std::set<std::string> labels;
    for (const auto& x : d) EXPECT_TRUE(labels.insert(x.election.label).second) << x.election.label;
}

TEST(Dataset, SizeOrientedSizes) {
    for (const auto& x : build_dataset(Recipe::size_oriented, 1)) {
        EXPECT_TRUE(x.election.m == 8 || x.election.m == 16);
        EXPECT_TRUE(x.election.votes.size() == 96 || x.election.votes.size() == 192);
    }
}

TEST(Dataset, ComprehensiveFiveDimensionalCubeSplit) {
    std::map<std::string, int> split;
    for (const auto& x : build_dataset(Recipe::comprehensive, 1)) {
        if (x.family == "5D-Cube") ++split[x.truncation];
    }
    EXPECT_EQ(split["none"], 4);
    EXPECT_EQ(split["top_k"], 2);
    EXPECT_EQ(split["random_cut"], 2);
}

TEST(Dataset, TruncationOrientedHalvesAndQuarters) {
    std::map<std::string, int> split;
    const auto d = build_dataset(Recipe::truncation_oriented, 2);
    for (const auto& x : d) {
        ++split[x.truncation];
        if (x.truncation == "top_k") {
            for (const auto& v : x.election.votes) ASSERT_EQ(v.top.size(), 4u);
        }
    }
    EXPECT_EQ(split["none"], 288 / 2 + 4);
    EXPECT_EQ(split["top_k"], 288 / 4);
    EXPECT_EQ(split["random_cut"], 288 / 4);
}

TEST(Dataset, RandomDropTruncatesHalf) {
    int dropped = 0;
    for (const auto& x : build_dataset(Recipe::random_drop, 3)) dropped += x.truncation == "random_drop";
    EXPECT_EQ(dropped, 144);
}

TEST(Dataset, Deterministic) {
    const auto a = build_dataset(Recipe::comprehensive, 9);
    const auto b = build_dataset(Recipe::comprehensive, 9);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].election.label, b[i].election.label);
        ASSERT_EQ(tops(a[i].election), tops(b[i].election));
    }
}
