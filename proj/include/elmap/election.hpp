#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "elmap/error.hpp"
#include "elmap/fraction.hpp"

namespace elmap {

// A top-truncated vote: `top` is the strictly ranked prefix, every other candidate of [0, m) sits in
// the truncated part, below the prefix and tied with the rest of the truncated part.
struct Vote {
    std::vector<int> top;
    int m = 0;

    Vote() = default;
    Vote(std::vector<int> ranked, int candidates) : top(std::move(ranked)), m(candidates) {}

    std::size_t ranked() const { return top.size(); }
    std::size_t truncated() const { return static_cast<std::size_t>(m) - top.size(); }
    bool complete() const { return top.size() == static_cast<std::size_t>(m); }

    friend bool operator==(const Vote&, const Vote&) = default;
    friend auto operator<=>(const Vote&, const Vote&) = default;
};

struct Election {
    int m = 0;
    std::vector<Vote> votes;
    std::string label;
    std::vector<std::string> candidate_names;

    std::size_t n() const { return votes.size(); }

    bool complete() const {
        return std::all_of(votes.begin(), votes.end(), [](const Vote& v) { return v.complete(); });
    }
};

inline Election make_election(int m, std::vector<std::vector<int>> tops, std::string label = {}) {
    Election e;
    e.m = m;
    e.label = std::move(label);
    e.votes.reserve(tops.size());
    for (auto& t : tops) e.votes.emplace_back(std::move(t), m);
    return e;
}

struct Violation {
    static constexpr std::size_t kElectionLevel = std::numeric_limits<std::size_t>::max();

    std::size_t vote_index = kElectionLevel;
    std::string rule;
    std::string detail;
};

inline std::vector<Violation> validate_election(const Election& e) {
    std::vector<Violation> out;
    if (e.m < 1) out.push_back({Violation::kElectionLevel, "candidate count", "m must be at least 1"});
    if (e.votes.empty()) out.push_back({Violation::kElectionLevel, "no votes", "election has no votes"});
    if (!e.candidate_names.empty() && e.candidate_names.size() != static_cast<std::size_t>(e.m)) {
        out.push_back({Violation::kElectionLevel, "candidate names", "name count differs from m"});
    }
    std::vector<char> seen;
    for (std::size_t i = 0; i < e.votes.size(); ++i) {
        const Vote& v = e.votes[i];
        if (v.m != e.m) {
            out.push_back({i, "dimension mismatch",
                           "vote has m=" + std::to_string(v.m) + ", election has m=" + std::to_string(e.m)});
            continue;
        }
        if (v.top.size() > static_cast<std::size_t>(std::max(v.m, 0))) {
            out.push_back({i, "too many ranked candidates", "ranked prefix longer than m"});
            continue;
        }
        seen.assign(static_cast<std::size_t>(std::max(v.m, 0)), 0);
        for (int c : v.top) {
            if (c < 0 || c >= v.m) {
                out.push_back({i, "index out of range", "candidate " + std::to_string(c)});
                break;
            }
            if (seen[static_cast<std::size_t>(c)]) {
                out.push_back({i, "duplicate index", "candidate " + std::to_string(c)});
                break;
            }
            seen[static_cast<std::size_t>(c)] = 1;
        }
    }
    return out;
}

inline void require_valid(const Election& e) {
    auto violations = validate_election(e);
    if (violations.empty()) return;
    const Violation& v = violations.front();
    if (v.rule == "no votes") fail(ErrorKind::empty_input, "election '" + e.label + "' has no votes");
    std::string where = v.vote_index == Violation::kElectionLevel ? "election" : "vote " + std::to_string(v.vote_index);
    fail(ErrorKind::argument, "invalid election '" + e.label + "' (" + where + "): " + v.rule + ", " + v.detail);
}

// pos[c] = rank of c in the ranked prefix, or |top| for every truncated candidate.
inline std::vector<int> vote_positions(const Vote& v) {
    std::vector<int> pos(static_cast<std::size_t>(v.m), static_cast<int>(v.top.size()));
    for (std::size_t r = 0; r < v.top.size(); ++r) pos[static_cast<std::size_t>(v.top[r])] = static_cast<int>(r);
    return pos;
}

// -1: a before b, +1: b before a, 0: tied (both truncated).
inline int relation(std::span<const int> pos, int a, int b) {
    const int pa = pos[static_cast<std::size_t>(a)];
    const int pb = pos[static_cast<std::size_t>(b)];
    return pa < pb ? -1 : (pa > pb ? 1 : 0);
}

// Half-swap contribution of one candidate pair given its relation in both votes.
inline int pair_half_swaps(int rel_u, int rel_v) {
    if (rel_u == 0 && rel_v == 0) return 0;
    if (rel_u == 0 || rel_v == 0) return 1;
    return rel_u == rel_v ? 0 : 2;
}

namespace detail {

inline std::int64_t choose2(std::int64_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

struct SwapScratch {
    std::vector<int> rv;
    std::vector<int> fenwick;
};

inline SwapScratch& swap_scratch() {
    thread_local SwapScratch scratch;
    return scratch;
}

}  // namespace detail

// Swap distance in half-swap units between two votes with precomputed positions.
// Runs in O(|U| log |U|) where U is the union of the two ranked prefixes.
inline std::int64_t half_swaps(const Vote& u, std::span<const int> pos_u, const Vote& v, std::span<const int> pos_v) {
    const int m = u.m;
    const int ku = static_cast<int>(u.top.size());
    const int kv = static_cast<int>(v.top.size());

    auto& scratch = detail::swap_scratch();
    auto& rv = scratch.rv;
    rv.clear();
    // Elements ordered by position in u; the candidates ranked only by v are tied in u and are
    // appended in v's order so no inversion is counted among them.
    for (int c : u.top) rv.push_back(pos_v[static_cast<std::size_t>(c)]);
    for (int c : v.top) {
        if (pos_u[static_cast<std::size_t>(c)] == ku) rv.push_back(pos_v[static_cast<std::size_t>(c)]);
    }
    const auto union_size = static_cast<std::int64_t>(rv.size());

    // Strict inversions: i < j with rv[i] > rv[j]. Values lie in [0, kv].
    auto& fw = scratch.fenwick;
    fw.assign(static_cast<std::size_t>(kv) + 2, 0);
    std::int64_t discordant = 0;
    std::int64_t inserted = 0;
    for (int value : rv) {
        // count of inserted values <= value
        std::int64_t le = 0;
        for (int i = value + 1; i > 0; i -= i & -i) le += fw[static_cast<std::size_t>(i)];
        discordant += inserted - le;
        for (int i = value + 1; i <= kv + 1; i += i & -i) ++fw[static_cast<std::size_t>(i)];
        ++inserted;
    }

    const std::int64_t tie_u = detail::choose2(m - ku);
    const std::int64_t tie_v = detail::choose2(m - kv);
    const std::int64_t tie_both = detail::choose2(m - union_size);
    return 2 * discordant + (tie_u + tie_v - 2 * tie_both);
}

inline std::int64_t half_swaps(const Vote& u, const Vote& v) {
    if (u.m != v.m) {
        fail(ErrorKind::dimension, "votes over " + std::to_string(u.m) + " and " + std::to_string(v.m) + " candidates");
    }
    const auto pu = vote_positions(u);
    const auto pv = vote_positions(v);
    return half_swaps(u, pu, v, pv);
}

inline Fraction swap_distance_votes(const Vote& u, const Vote& v) { return Fraction(half_swaps(u, v), 2); }

// Position vectors for a list of votes, shared by the pairwise distance routines.
class RankedVotes {
  public:
    RankedVotes() = default;
    explicit RankedVotes(std::span<const Vote> votes) : votes_(votes.begin(), votes.end()) {
        positions_.reserve(votes_.size());
        for (const Vote& v : votes_) positions_.push_back(vote_positions(v));
    }

    std::size_t size() const { return votes_.size(); }
    const Vote& vote(std::size_t i) const { return votes_[i]; }
    std::span<const int> positions(std::size_t i) const { return positions_[i]; }

    std::int64_t half_swaps(std::size_t i, std::size_t j) const {
        return elmap::half_swaps(votes_[i], positions_[i], votes_[j], positions_[j]);
    }

  private:
    std::vector<Vote> votes_;
    std::vector<std::vector<int>> positions_;
};

// Rows are positions, columns are candidates.
class FrequencyMatrix {
  public:
    FrequencyMatrix() = default;
    explicit FrequencyMatrix(int m) : m_(m), entries_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0.0) {}

    int m() const { return m_; }
    double& at(int position, int candidate) {
        return entries_[static_cast<std::size_t>(position) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(candidate)];
    }
    double at(int position, int candidate) const {
        return entries_[static_cast<std::size_t>(position) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(candidate)];
    }
    std::span<const double> entries() const { return entries_; }

    std::vector<double> column(int candidate) const {
        std::vector<double> col(static_cast<std::size_t>(m_));
        for (int i = 0; i < m_; ++i) col[static_cast<std::size_t>(i)] = at(i, candidate);
        return col;
    }

    std::vector<std::vector<double>> columns() const {
        std::vector<std::vector<double>> cols;
        cols.reserve(static_cast<std::size_t>(m_));
        for (int j = 0; j < m_; ++j) cols.push_back(column(j));
        return cols;
    }

    bool bistochastic(double tol = 1e-9) const {
        for (int i = 0; i < m_; ++i) {
            double row = 0.0;
            double col = 0.0;
            for (int j = 0; j < m_; ++j) {
                if (at(i, j) < -tol || at(i, j) > 1.0 + tol) return false;
                row += at(i, j);
                col += at(j, i);
            }
            if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol) return false;
        }
        return true;
    }

  private:
    int m_ = 0;
    std::vector<double> entries_;
};

inline FrequencyMatrix frequency_matrix(const Election& e) {
    if (e.votes.empty()) fail(ErrorKind::empty_input, "frequency matrix of an empty election");
    require_valid(e);
    const int m = e.m;
    const auto mm = static_cast<std::size_t>(m);
    // Ranked entries are counted directly; the truncated mass of each vote is a range-add over the
    // trailing rows, accumulated as a per-candidate difference array over rows.
    std::vector<double> counts(mm * mm, 0.0);
    std::vector<double> spread(mm * (mm + 1), 0.0);
    std::vector<char> ranked(mm);
    for (const Vote& v : e.votes) {
        const auto k = v.top.size();
        for (std::size_t r = 0; r < k; ++r) counts[r * mm + static_cast<std::size_t>(v.top[r])] += 1.0;
        if (k == mm) continue;
        const double share = 1.0 / static_cast<double>(mm - k);
        std::fill(ranked.begin(), ranked.end(), 0);
        for (int c : v.top) ranked[static_cast<std::size_t>(c)] = 1;
        for (std::size_t c = 0; c < mm; ++c) {
            if (!ranked[c]) spread[c * (mm + 1) + k] += share;
        }
    }
    FrequencyMatrix f(m);
    const double n = static_cast<double>(e.votes.size());
    for (std::size_t c = 0; c < mm; ++c) {
        double running = 0.0;
        for (std::size_t r = 0; r < mm; ++r) {
            running += spread[c * (mm + 1) + r];
            f.at(static_cast<int>(r), static_cast<int>(c)) = (counts[r * mm + c] + running) / n;
        }
    }
    return f;
}

}  // namespace elmap
