#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "elmap/election.hpp"
#include "elmap/transport.hpp"

namespace testing_support {

using elmap::Election;
using elmap::Vote;

inline std::vector<int> iota_vec(int m) {
    std::vector<int> v(static_cast<std::size_t>(m));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

inline Election id_election(int m, int n) {
    std::vector<std::vector<int>> tops(static_cast<std::size_t>(n), iota_vec(m));
    return elmap::make_election(m, tops, "ID");
}

inline Election an_election(int m, int n) {
    auto up = iota_vec(m);
    auto down = std::vector<int>(up.rbegin(), up.rend());
    std::vector<std::vector<int>> tops;
    for (int i = 0; i < n; ++i) tops.push_back(i < n / 2 ? up : down);
    return elmap::make_election(m, tops, "AN");
}

// Every permutation of m candidates, `copies` times each.
inline Election un_election(int m, int copies = 1) {
    std::vector<std::vector<int>> tops;
    auto p = iota_vec(m);
    do {
        for (int c = 0; c < copies; ++c) tops.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return elmap::make_election(m, tops, "UN");
}

// Random votes; with `truncated`, each vote keeps a uniformly random prefix length in [0, m].
inline Election random_election(std::mt19937_64& rng, int m, int n, bool truncated, std::string label = "R") {
    std::vector<std::vector<int>> tops;
    for (int i = 0; i < n; ++i) {
        auto p = iota_vec(m);
        std::shuffle(p.begin(), p.end(), rng);
        if (truncated) p.resize(std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(m))(rng));
        tops.push_back(p);
    }
    return elmap::make_election(m, tops, std::move(label));
}

inline std::vector<double> random_probability(std::mt19937_64& rng, int m, double zero_chance = 0.2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(m));
    double s = 0.0;
    for (auto& x : v) {
        x = u(rng) < zero_chance ? 0.0 : u(rng);
        s += x;
    }
    if (s == 0.0) {
        v[0] = 1.0;
        s = 1.0;
    }
    for (auto& x : v) x /= s;
    return v;
}

// Random bistochastic matrix as the frequency matrix of a random election.
inline elmap::FrequencyMatrix random_bistochastic(std::mt19937_64& rng, int m) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    return elmap::frequency_matrix(random_election(rng, m, n, true));
}

}  // namespace testing_support
