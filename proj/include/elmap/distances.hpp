#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "elmap/assignment.hpp"
#include "elmap/election.hpp"
#include "elmap/error.hpp"
#include "elmap/fraction.hpp"
#include "elmap/random.hpp"
#include "elmap/transport.hpp"

namespace elmap {

enum class Metric { swap, pos, pos_hat, swap_tr, swap_del, dap, feature };

inline std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::swap: return "swap";
        case Metric::pos: return "pos";
        case Metric::pos_hat: return "pos-hat";
        case Metric::swap_tr: return "swap-tr";
        case Metric::swap_del: return "swap-del";
        case Metric::dap: return "dap";
        case Metric::feature: return "feature";
    }
    return "unknown";
}

inline Metric parse_metric(std::string_view name) {
    for (Metric m : {Metric::swap, Metric::pos, Metric::pos_hat, Metric::swap_tr, Metric::swap_del, Metric::dap,
                     Metric::feature}) {
        if (name == to_string(m)) return m;
    }
    fail(ErrorKind::argument, "unknown metric '" + std::string(name) + "'");
}

struct DistanceValue {
    double value = 0.0;
    Metric metric = Metric::swap;
    std::optional<Fraction> exact;
};

struct SearchBudget {
    int max_exact_m = 8;
    std::int64_t max_subsets = 2000;
    int max_pos_hat_m = 200;
};

// ---------------------------------------------------------------------------
// Isomorphic swap distance
// ---------------------------------------------------------------------------

struct IsoSwapResult {
    // Total over matched voters, in half-swaps.
    std::int64_t half_swaps = 0;
    // candidate_map[a] = candidate of the second election matched to candidate a of the first.
    std::vector<int> candidate_map;
    // voter_map[i] = vote of the second election matched to vote i of the first.
    std::vector<std::size_t> voter_map;
    std::int64_t nodes = 0;
};

namespace detail {

// Relation tables rel[v][a*m+b] in {-1,0,1}.
inline std::vector<std::vector<signed char>> relation_tables(const Election& e) {
    const auto m = static_cast<std::size_t>(e.m);
    std::vector<std::vector<signed char>> out;
    out.reserve(e.votes.size());
    for (const Vote& v : e.votes) {
        const auto pos = vote_positions(v);
        std::vector<signed char> rel(m * m, 0);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                rel[a * m + b] = static_cast<signed char>(relation(pos, static_cast<int>(a), static_cast<int>(b)));
            }
        }
        out.push_back(std::move(rel));
    }
    return out;
}

// Higher score = ranked higher more often; truncated candidates share the leftover points.
inline std::vector<int> prominence_order(const Election& e) {
    const auto m = static_cast<std::size_t>(e.m);
    std::vector<double> score(m, 0.0);
    for (const Vote& v : e.votes) {
        for (std::size_t r = 0; r < v.top.size(); ++r) score[static_cast<std::size_t>(v.top[r])] += static_cast<double>(m - r);
        if (v.truncated() > 0) {
            double rest = 0.0;
            for (std::size_t r = v.top.size(); r < m; ++r) rest += static_cast<double>(m - r);
            const auto pos = vote_positions(v);
            for (std::size_t c = 0; c < m; ++c) {
                if (static_cast<std::size_t>(pos[c]) == v.top.size()) score[c] += rest / static_cast<double>(v.truncated());
            }
        }
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    });
    return order;
}

class IsoSwapSearch {
  public:
    IsoSwapSearch(const Election& e, const Election& f)
      : m_(static_cast<std::size_t>(e.m))
      , n_(e.votes.size())
      , rel_e_(relation_tables(e))
      , rel_f_(relation_tables(f))
      , order_e_(prominence_order(e))
      , order_f_(prominence_order(f)) {}

    IsoSwapResult run() {
        sigma_.assign(m_, -1);
        used_.assign(m_, 0);
        partial_.assign(m_ + 1, std::vector<std::int64_t>(n_ * n_, 0));

        // Upper bound from matching candidates by prominence rank.
        std::vector<int> guess(m_);
        for (std::size_t d = 0; d < m_; ++d) guess[static_cast<std::size_t>(order_e_[d])] = order_f_[d];
        const auto full = full_cost(guess);
        auto lap = lap_.solve(full, n_);
        best_.half_swaps = lap.cost;
        best_.candidate_map = guess;
        best_.voter_map = lap.row_to_col;
        if (best_.half_swaps > 0 && m_ > 1) descend(0);
        best_.nodes = nodes_;
        return best_;
    }

  private:
    std::vector<std::int64_t> full_cost(const std::vector<int>& sigma) const {
        std::vector<std::int64_t> cost(n_ * n_, 0);
        for (std::size_t v = 0; v < n_; ++v) {
            for (std::size_t u = 0; u < n_; ++u) {
                std::int64_t h = 0;
                for (std::size_t a = 0; a < m_; ++a) {
                    for (std::size_t b = a + 1; b < m_; ++b) {
                        const auto sa = static_cast<std::size_t>(sigma[a]);
                        const auto sb = static_cast<std::size_t>(sigma[b]);
                        h += pair_half_swaps(rel_e_[v][a * m_ + b], rel_f_[u][sa * m_ + sb]);
                    }
                }
                cost[v * n_ + u] = h;
            }
        }
        return cost;
    }

    std::int64_t cheap_bound(const std::vector<std::int64_t>& cost) const {
        std::int64_t rows = 0;
        std::int64_t cols = 0;
        for (std::size_t v = 0; v < n_; ++v) {
            std::int64_t rmin = std::numeric_limits<std::int64_t>::max();
            for (std::size_t u = 0; u < n_; ++u) rmin = std::min(rmin, cost[v * n_ + u]);
            rows += rmin;
        }
        for (std::size_t u = 0; u < n_; ++u) {
            std::int64_t cmin = std::numeric_limits<std::int64_t>::max();
            for (std::size_t v = 0; v < n_; ++v) cmin = std::min(cmin, cost[v * n_ + u]);
            cols += cmin;
        }
        return std::max(rows, cols);
    }

    void descend(std::size_t depth) {
        const auto a = static_cast<std::size_t>(order_e_[depth]);
        const auto& base = partial_[depth];
        auto& next = partial_[depth + 1];
        for (int c_int : order_f_) {
            const auto c = static_cast<std::size_t>(c_int);
            if (used_[c]) continue;
            ++nodes_;
            for (std::size_t v = 0; v < n_; ++v) {
                const auto& re = rel_e_[v];
                for (std::size_t u = 0; u < n_; ++u) {
                    const auto& rf = rel_f_[u];
                    std::int64_t add = 0;
                    for (std::size_t k = 0; k < depth; ++k) {
                        const auto ak = static_cast<std::size_t>(order_e_[k]);
                        const auto sk = static_cast<std::size_t>(sigma_[ak]);
                        add += pair_half_swaps(re[ak * m_ + a], rf[sk * m_ + c]);
                    }
                    next[v * n_ + u] = base[v * n_ + u] + add;
                }
            }
            sigma_[a] = c_int;
            used_[c] = 1;
            if (depth + 1 == m_) {
                auto lap = lap_.solve(next, n_);
                if (lap.cost < best_.half_swaps) {
                    best_.half_swaps = lap.cost;
                    best_.candidate_map = sigma_;
                    best_.voter_map = lap.row_to_col;
                }
            } else if (cheap_bound(next) < best_.half_swaps && lap_.solve(next, n_).cost < best_.half_swaps) {
                descend(depth + 1);
            }
            sigma_[a] = -1;
            used_[c] = 0;
            if (best_.half_swaps == 0) return;
        }
    }

    std::size_t m_;
    std::size_t n_;
    std::vector<std::vector<signed char>> rel_e_, rel_f_;
    std::vector<int> order_e_, order_f_;
    std::vector<int> sigma_;
    std::vector<char> used_;
    std::vector<std::vector<std::int64_t>> partial_;
    AssignmentSolver<std::int64_t> lap_;
    IsoSwapResult best_;
    std::int64_t nodes_ = 0;
};

inline void require_same_shape(const Election& e, const Election& f, std::string_view what) {
    if (e.m != f.m || e.votes.size() != f.votes.size()) {
        fail(ErrorKind::size, std::string(what) + " needs equal sizes, got (m=" + std::to_string(e.m) +
                                  ", n=" + std::to_string(e.votes.size()) + ") and (m=" + std::to_string(f.m) +
                                  ", n=" + std::to_string(f.votes.size()) + ")");
    }
}

inline Fraction normalized_swap(std::int64_t half_swaps, std::int64_t n, std::int64_t m) {
    if (m < 2 || n == 0) return Fraction(0, 1);
    // (half_swaps / 2) / (n (m^2 - m) / 4)
    return Fraction(2 * half_swaps, n * m * (m - 1));
}

}  // namespace detail

// Unnormalized exact search result; both elections need equal m and n.
inline IsoSwapResult iso_swap_search(const Election& e, const Election& f, const SearchBudget& budget = {}) {
    require_valid(e);
    require_valid(f);
    detail::require_same_shape(e, f, "isomorphic swap distance");
    if (e.m > budget.max_exact_m) {
        fail(ErrorKind::capability, "isomorphic swap distance is exact only up to m=" + std::to_string(budget.max_exact_m) +
                                        ", got m=" + std::to_string(e.m));
    }
    return detail::IsoSwapSearch(e, f).run();
}

inline DistanceValue iso_swap_distance(const Election& e, const Election& f, const SearchBudget& budget = {}) {
    const auto r = iso_swap_search(e, f, budget);
    const auto exact = detail::normalized_swap(r.half_swaps, static_cast<std::int64_t>(e.votes.size()), e.m);
    return {exact.to_double(), Metric::swap, exact};
}

// ---------------------------------------------------------------------------
// Positionwise distances
// ---------------------------------------------------------------------------

inline DistanceValue positionwise_distance(const Election& e, const Election& f) {
    if (e.m != f.m) {
        fail(ErrorKind::size, "positionwise distance needs equal candidate counts, got " + std::to_string(e.m) + " and " +
                                  std::to_string(f.m));
    }
    const auto x = frequency_matrix(e).columns();
    const auto y = frequency_matrix(f).columns();
    return {matrix_wasserstein(x, y).value, Metric::pos, std::nullopt};
}

inline DistanceValue positionwise_hat(const Election& e, const Election& f, const SearchBudget& budget = {}) {
    const int big = std::max(e.m, f.m);
    if (big > budget.max_pos_hat_m) {
        fail(ErrorKind::capability, "positionwise extension is limited to m<=" + std::to_string(budget.max_pos_hat_m) +
                                        ", got m=" + std::to_string(big));
    }
    return {transport_wasserstein(frequency_matrix(e), frequency_matrix(f)).value, Metric::pos_hat, std::nullopt};
}

// ---------------------------------------------------------------------------
// Swap extensions for different candidate counts
// ---------------------------------------------------------------------------

// Adds candidates [e.m, m) to the truncated part of every vote.
inline Election pad_candidates(const Election& e, int m) {
    if (m < e.m) fail(ErrorKind::argument, "cannot pad to fewer candidates");
    Election out = e;
    out.m = m;
    for (Vote& v : out.votes) v.m = m;
    if (!out.candidate_names.empty()) {
        for (int c = e.m; c < m; ++c) out.candidate_names.push_back("pad" + std::to_string(c));
    }
    return out;
}

inline DistanceValue swap_tr_hat(const Election& e, const Election& f, const SearchBudget& budget = {}) {
    if (e.votes.size() != f.votes.size()) {
        fail(ErrorKind::size, "padded swap distance needs equal voter counts, got " + std::to_string(e.votes.size()) +
                                  " and " + std::to_string(f.votes.size()));
    }
    const int m = std::max(e.m, f.m);
    auto d = iso_swap_distance(pad_candidates(e, m), pad_candidates(f, m), budget);
    d.metric = Metric::swap_tr;
    return d;
}

// Removes the listed candidates (sorted ascending) and renumbers the rest in order.
inline Election delete_candidates(const Election& e, const std::vector<int>& removed) {
    std::vector<int> remap(static_cast<std::size_t>(e.m), -1);
    int next = 0;
    std::size_t r = 0;
    for (int c = 0; c < e.m; ++c) {
        if (r < removed.size() && removed[r] == c) {
            ++r;
            continue;
        }
        remap[static_cast<std::size_t>(c)] = next++;
    }
    Election out;
    out.m = next;
    out.label = e.label;
    for (const Vote& v : e.votes) {
        std::vector<int> top;
        top.reserve(v.top.size());
        for (int c : v.top) {
            if (remap[static_cast<std::size_t>(c)] >= 0) top.push_back(remap[static_cast<std::size_t>(c)]);
        }
        out.votes.emplace_back(std::move(top), next);
    }
    if (!e.candidate_names.empty()) {
        for (int c = 0; c < e.m; ++c) {
            if (remap[static_cast<std::size_t>(c)] >= 0) out.candidate_names.push_back(e.candidate_names[static_cast<std::size_t>(c)]);
        }
    }
    return out;
}

struct DeletionMode {
    enum class Kind { exact, monte_carlo } kind = Kind::exact;
    std::int64_t samples = 200;
    std::uint64_t seed = 0;
};

namespace detail {

// C(n, k) saturated at limit + 1.
inline std::int64_t choose_capped(std::int64_t n, std::int64_t k, std::int64_t limit) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long double acc = 1.0L;
    for (std::int64_t i = 1; i <= k; ++i) {
        acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (acc > static_cast<long double>(limit)) return limit + 1;
    }
    return static_cast<std::int64_t>(std::llround(acc));
}

}  // namespace detail

// Expected isomorphic swap distance after deleting a uniformly random set of candidates from the
// larger election. Monte Carlo draws distinct subsets, so asking for at least as many samples as
// there are subsets reproduces the exhaustive average.
inline DistanceValue swap_del_hat(const Election& e_in, const Election& f_in, const DeletionMode& mode = {},
                                  const SearchBudget& budget = {}) {
    if (e_in.votes.size() != f_in.votes.size()) {
        fail(ErrorKind::size, "deletion swap distance needs equal voter counts, got " + std::to_string(e_in.votes.size()) +
                                  " and " + std::to_string(f_in.votes.size()));
    }
    const bool flip = e_in.m > f_in.m;
    const Election& small = flip ? f_in : e_in;
    const Election& large = flip ? e_in : f_in;
    require_valid(small);
    require_valid(large);
    const int drop = large.m - small.m;
    if (small.m > budget.max_exact_m) {
        fail(ErrorKind::capability, "isomorphic swap distance is exact only up to m=" + std::to_string(budget.max_exact_m) +
                                        ", got m=" + std::to_string(small.m));
    }
    const auto n = static_cast<std::int64_t>(small.votes.size());
    if (drop == 0) {
        auto d = iso_swap_distance(small, large, budget);
        d.metric = Metric::swap_del;
        return d;
    }

    const std::int64_t count = detail::choose_capped(large.m, drop, std::max(budget.max_subsets, mode.samples));
    std::int64_t total_half = 0;
    std::int64_t evaluated = 0;
    auto evaluate = [&](const std::vector<int>& removed) {
        total_half += iso_swap_search(small, delete_candidates(large, removed), budget).half_swaps;
        ++evaluated;
    };

    if (mode.kind == DeletionMode::Kind::exact && count <= budget.max_subsets) {
        std::vector<int> removed(static_cast<std::size_t>(drop));
        std::iota(removed.begin(), removed.end(), 0);
        for (;;) {
            evaluate(removed);
            int pos = drop - 1;
            while (pos >= 0 && removed[static_cast<std::size_t>(pos)] == large.m - drop + pos) --pos;
            if (pos < 0) break;
            ++removed[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < drop; ++q) removed[static_cast<std::size_t>(q)] = removed[static_cast<std::size_t>(q - 1)] + 1;
        }
    } else {
        if (mode.samples < 1) fail(ErrorKind::argument, "monte carlo deletion needs at least one sample");
        const std::int64_t target = std::min(mode.samples, count);
        Rng rng = Rng::stream(mode.seed, "swap-del");
        std::set<std::vector<int>> seen;
        while (static_cast<std::int64_t>(seen.size()) < target) {
            auto perm = rng.permutation(large.m);
            std::vector<int> removed(perm.begin(), perm.begin() + drop);
            std::sort(removed.begin(), removed.end());
            if (seen.insert(removed).second) evaluate(removed);
        }
    }
    const Fraction exact(2 * total_half, evaluated * n * small.m * (small.m - 1));
    return {exact.to_double(), Metric::swap_del, small.m < 2 ? Fraction(0, 1) : exact};
}

// ---------------------------------------------------------------------------
// Feature distance
// ---------------------------------------------------------------------------

enum class Norm { l1, l2 };

inline DistanceValue feature_distance(std::span<const double> a, std::span<const double> b, Norm norm = Norm::l2) {
    if (a.size() != b.size()) {
        fail(ErrorKind::dimension, "feature vectors of length " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += norm == Norm::l1 ? std::abs(d) : d * d;
    }
    return {norm == Norm::l1 ? acc : std::sqrt(acc), Metric::feature, std::nullopt};
}

// ---------------------------------------------------------------------------
// Distance matrices
// ---------------------------------------------------------------------------

class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    DistanceMatrix(std::vector<std::string> labels, Metric metric)
      : labels_(std::move(labels)), metric_(metric), entries_(labels_.size() * labels_.size(), 0.0) {}

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    Metric metric() const { return metric_; }
    void set_metric(Metric m) { metric_ = m; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        entries_[i * size() + j] = v;
        entries_[j * size() + i] = v;
    }
    std::span<const double> entries() const { return entries_; }

    double max_entry() const { return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end()); }

    bool symmetric(double tol = 0.0) const {
        for (std::size_t i = 0; i < size(); ++i) {
            if (std::abs((*this)(i, i)) > tol) return false;
            for (std::size_t j = i + 1; j < size(); ++j) {
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
            }
        }
        return true;
    }

    // Number of ordered triples (i, j, k) with d(i,k) > d(i,j) + d(j,k) + slack.
    std::size_t triangle_violations(double slack = 1e-9) const {
        std::size_t bad = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = 0; j < size(); ++j) {
                for (std::size_t k = 0; k < size(); ++k) {
                    if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + slack) ++bad;
                }
            }
        }
        return bad;
    }

    void write_csv(std::ostream& os) const {
        os << "label";
        for (const auto& l : labels_) os << ',' << l;
        os << '\n';
        std::ostringstream cell;
        for (std::size_t i = 0; i < size(); ++i) {
            os << labels_[i];
            for (std::size_t j = 0; j < size(); ++j) {
                cell.str({});
                cell << std::setprecision(12) << (*this)(i, j);
                os << ',' << cell.str();
            }
            os << '\n';
        }
    }

    static DistanceMatrix read_csv(std::istream& is, Metric metric = Metric::feature) {
        std::string line;
        if (!std::getline(is, line)) fail(ErrorKind::parse, "distance matrix: missing header");
        auto split = [](const std::string& s) {
            std::vector<std::string> out;
            std::string cur;
            std::istringstream ss(s);
            while (std::getline(ss, cur, ',')) {
                while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
                out.push_back(cur);
            }
            return out;
        };
        auto header = split(line);
        if (header.empty() || header.front() != "label") fail(ErrorKind::parse, "distance matrix: header must start with 'label'");
        header.erase(header.begin());
        DistanceMatrix d(header, metric);
        std::size_t row = 0;
        std::size_t line_no = 1;
        while (std::getline(is, line)) {
            ++line_no;
            if (line.empty() || line == "\r") continue;
            const auto cells = split(line);
            if (row >= d.size()) fail(ErrorKind::parse, "distance matrix: too many rows at line " + std::to_string(line_no));
            if (cells.size() != d.size() + 1) {
                fail(ErrorKind::parse, "distance matrix: wrong cell count at line " + std::to_string(line_no));
            }
            if (cells[0] != d.labels_[row]) {
                fail(ErrorKind::parse, "distance matrix: row label '" + cells[0] + "' does not match column order");
            }
            for (std::size_t j = 0; j < d.size(); ++j) {
                double v = 0.0;
                try {
                    std::size_t used = 0;
                    v = std::stod(cells[j + 1], &used);
                    if (used != cells[j + 1].size()) throw std::invalid_argument("trailing");
                } catch (const std::exception&) {
                    fail(ErrorKind::parse, "distance matrix: bad number '" + cells[j + 1] + "' at line " + std::to_string(line_no));
                }
                if (std::isnan(v)) fail(ErrorKind::parse, "distance matrix: NaN at line " + std::to_string(line_no));
                d.entries_[row * d.size() + j] = v;
            }
            ++row;
        }
        if (row != d.size()) fail(ErrorKind::parse, "distance matrix: expected " + std::to_string(d.size()) + " rows");
        return d;
    }

  private:
    std::vector<std::string> labels_;
    Metric metric_ = Metric::feature;
    std::vector<double> entries_;
};

}  // namespace elmap
