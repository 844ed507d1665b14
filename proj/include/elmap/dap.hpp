#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "elmap/distances.hpp"
#include "elmap/election.hpp"
#include "elmap/error.hpp"
#include "elmap/random.hpp"

namespace elmap {

// ---------------------------------------------------------------------------
// Agreement
// ---------------------------------------------------------------------------

inline double agreement_index(const Election& e) {
    require_valid(e);
    if (e.m < 2) fail(ErrorKind::degenerate, "agreement index needs at least two candidates");
    const auto m = static_cast<std::size_t>(e.m);
    // before[a*m+b] = N(a > b)
    std::vector<std::int64_t> before(m * m, 0);
    std::vector<char> seen(m);
    for (const Vote& v : e.votes) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int a : v.top) {
            const auto ua = static_cast<std::size_t>(a);
            seen[ua] = 1;
            for (std::size_t b = 0; b < m; ++b) {
                if (!seen[b]) ++before[ua * m + b];
            }
        }
    }
    const auto n = static_cast<std::int64_t>(e.votes.size());
    double total = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            const std::int64_t ab = before[a * m + b];
            const std::int64_t ba = before[b * m + a];
            const std::int64_t tied = n - ab - ba;
            total += static_cast<double>(std::max(std::abs(ab - ba), tied)) / static_cast<double>(n);
        }
    }
    return total / static_cast<double>(m * (m - 1) / 2);
}

// ---------------------------------------------------------------------------
// Empirical i-Kemeny scores
// ---------------------------------------------------------------------------

struct EmkStrategy {
    enum class Kind { automatic, exact, local_search } kind = Kind::automatic;
    int restarts = 4;
    std::uint64_t seed = 0;
    std::int64_t max_exact_combinations = 1'000'000;
};

struct EmkResult {
    int i = 0;
    // Half-swap units.
    std::int64_t score = 0;
    // Indices into the election's votes (first occurrence of each chosen distinct vote).
    std::vector<std::size_t> centers;
    bool exact = false;
};

// Distinct votes with multiplicities and their pairwise half-swap distances.
class VoteClusters {
  public:
    explicit VoteClusters(const Election& e) {
        require_valid(e);
        std::map<std::vector<int>, std::size_t> index;
        for (std::size_t i = 0; i < e.votes.size(); ++i) {
            auto [it, inserted] = index.try_emplace(e.votes[i].top, distinct_.size());
            if (inserted) {
                distinct_.push_back(e.votes[i]);
                first_.push_back(i);
                weight_.push_back(0);
            }
            ++weight_[it->second];
        }
        const RankedVotes ranked(distinct_);
        const std::size_t u = distinct_.size();
        tri_.assign(u * (u - 1) / 2, 0);
        for (std::size_t i = 1; i < u; ++i) {
            for (std::size_t j = 0; j < i; ++j) tri_[i * (i - 1) / 2 + j] = static_cast<std::int32_t>(ranked.half_swaps(i, j));
        }
    }

    std::size_t size() const { return distinct_.size(); }
    std::int64_t weight(std::size_t i) const { return weight_[i]; }
    std::size_t first_occurrence(std::size_t i) const { return first_[i]; }
    const Vote& vote(std::size_t i) const { return distinct_[i]; }

    std::int64_t distance(std::size_t i, std::size_t j) const {
        if (i == j) return 0;
        if (i < j) std::swap(i, j);
        return tri_[i * (i - 1) / 2 + j];
    }

    std::int64_t cost(const std::vector<std::size_t>& centers) const {
        std::int64_t total = 0;
        for (std::size_t p = 0; p < size(); ++p) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (std::size_t c : centers) best = std::min(best, distance(p, c));
            total += best * weight_[p];
        }
        return total;
    }

  private:
    std::vector<Vote> distinct_;
    std::vector<std::size_t> first_;
    std::vector<std::int64_t> weight_;
    std::vector<std::int32_t> tri_;
};

namespace detail {

struct CenterSet {
    std::vector<std::size_t> centers;
    std::int64_t cost = 0;
};

inline CenterSet exhaustive_centers(const VoteClusters& vc, std::size_t i) {
    const std::size_t u = vc.size();
    std::vector<std::size_t> pick(i);
    std::iota(pick.begin(), pick.end(), 0);
    CenterSet best{pick, vc.cost(pick)};
    for (;;) {
        std::size_t pos = i;
        while (pos > 0 && pick[pos - 1] == u - i + pos - 1) --pos;
        if (pos == 0) break;
        ++pick[pos - 1];
        for (std::size_t q = pos; q < i; ++q) pick[q] = pick[q - 1] + 1;
        const auto c = vc.cost(pick);
        if (c < best.cost) best = {pick, c};
    }
    return best;
}

// k-medoids style swap search with nearest / second-nearest caches.
class MedoidSearch {
  public:
    explicit MedoidSearch(const VoteClusters& vc) : vc_(vc) {}

    // Extends centers by farthest-first up to i centers.
    void extend_farthest(std::vector<std::size_t>& centers, std::size_t i) const {
        std::vector<std::int64_t> nearest(vc_.size(), std::numeric_limits<std::int64_t>::max());
        std::vector<char> is_center(vc_.size(), 0);
        for (std::size_t c : centers) {
            is_center[c] = 1;
            for (std::size_t p = 0; p < vc_.size(); ++p) nearest[p] = std::min(nearest[p], vc_.distance(p, c));
        }
        while (centers.size() < i) {
            std::size_t pick = vc_.size();
            for (std::size_t p = 0; p < vc_.size(); ++p) {
                if (is_center[p]) continue;
                if (pick == vc_.size() || nearest[p] > nearest[pick]) pick = p;
            }
            centers.push_back(pick);
            is_center[pick] = 1;
            for (std::size_t p = 0; p < vc_.size(); ++p) nearest[p] = std::min(nearest[p], vc_.distance(p, pick));
        }
    }

    std::size_t medoid() const {
        std::size_t best = 0;
        std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
        for (std::size_t c = 0; c < vc_.size(); ++c) {
            std::int64_t total = 0;
            for (std::size_t p = 0; p < vc_.size(); ++p) total += vc_.distance(p, c) * vc_.weight(p);
            if (total < best_cost) {
                best_cost = total;
                best = c;
            }
        }
        return best;
    }

    CenterSet improve(std::vector<std::size_t> centers) {
        const std::size_t u = vc_.size();
        const std::size_t k = centers.size();
        std::vector<char> is_center(u, 0);
        for (std::size_t c : centers) is_center[c] = 1;
        refresh(centers);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t slot = 0; slot < k && !improved; ++slot) {
                for (std::size_t x = 0; x < u; ++x) {
                    if (is_center[x]) continue;
                    std::int64_t total = 0;
                    for (std::size_t p = 0; p < u; ++p) {
                        const std::int64_t keep = nearest_slot_[p] == slot ? second_[p] : nearest_[p];
                        total += std::min(keep, vc_.distance(p, x)) * vc_.weight(p);
                    }
                    if (total < cost_) {
                        is_center[centers[slot]] = 0;
                        is_center[x] = 1;
                        centers[slot] = x;
                        refresh(centers);
                        improved = true;
                        break;
                    }
                }
            }
        }
        return {centers, cost_};
    }

  private:
    void refresh(const std::vector<std::size_t>& centers) {
        const std::size_t u = vc_.size();
        nearest_.assign(u, std::numeric_limits<std::int64_t>::max());
        second_.assign(u, std::numeric_limits<std::int64_t>::max());
        nearest_slot_.assign(u, 0);
        cost_ = 0;
        for (std::size_t p = 0; p < u; ++p) {
            for (std::size_t s = 0; s < centers.size(); ++s) {
                const auto d = vc_.distance(p, centers[s]);
                if (d < nearest_[p]) {
                    second_[p] = nearest_[p];
                    nearest_[p] = d;
                    nearest_slot_[p] = s;
                } else if (d < second_[p]) {
                    second_[p] = d;
                }
            }
            cost_ += nearest_[p] * vc_.weight(p);
        }
    }

    const VoteClusters& vc_;
    std::vector<std::int64_t> nearest_, second_;
    std::vector<std::size_t> nearest_slot_;
    std::int64_t cost_ = 0;
};

inline EmkResult finish(const VoteClusters& vc, int i, const CenterSet& cs, bool exact) {
    EmkResult r;
    r.i = i;
    r.score = cs.cost;
    r.exact = exact;
    for (std::size_t c : cs.centers) r.centers.push_back(vc.first_occurrence(c));
    return r;
}

}  // namespace detail

// emk_1 .. emk_max_i of one election. Entries with i larger than the voter count are 0.
inline std::vector<EmkResult> emk_scores(const Election& e, int max_i, const EmkStrategy& strategy = {}) {
    if (max_i < 1) fail(ErrorKind::argument, "emk needs i >= 1");
    const VoteClusters vc(e);
    const std::size_t u = vc.size();
    const auto n = static_cast<int>(e.votes.size());
    std::vector<EmkResult> out;
    std::vector<std::size_t> previous;
    for (int i = 1; i <= max_i; ++i) {
        if (i > n || static_cast<std::size_t>(i) >= u) {
            // Every distinct vote can be its own center.
            EmkResult r;
            r.i = i;
            r.exact = true;
            for (std::size_t c = 0; c < std::min<std::size_t>(u, static_cast<std::size_t>(i)); ++c) {
                r.centers.push_back(vc.first_occurrence(c));
            }
            out.push_back(r);
            previous.clear();
            for (std::size_t c = 0; c < u; ++c) previous.push_back(c);
            continue;
        }
        const auto ui = static_cast<std::size_t>(i);
        const auto combos = detail::choose_capped(static_cast<std::int64_t>(u), i, strategy.max_exact_combinations);
        const bool feasible = combos <= strategy.max_exact_combinations;
        if (strategy.kind == EmkStrategy::Kind::exact && !feasible) {
            fail(ErrorKind::capability, "exhaustive emk_" + std::to_string(i) + " exceeds " +
                                            std::to_string(strategy.max_exact_combinations) + " center sets");
        }
        if (strategy.kind != EmkStrategy::Kind::local_search && feasible) {
            const auto best = detail::exhaustive_centers(vc, ui);
            out.push_back(detail::finish(vc, i, best, true));
            previous = best.centers;
            continue;
        }
        detail::MedoidSearch search(vc);
        std::vector<std::vector<std::size_t>> starts;
        {
            std::vector<std::size_t> c{search.medoid()};
            search.extend_farthest(c, ui);
            starts.push_back(std::move(c));
        }
        if (previous.size() + 1 == ui) {
            auto c = previous;
            search.extend_farthest(c, ui);
            starts.push_back(std::move(c));
        }
        Rng rng = Rng::stream(strategy.seed, derive_seed(hash_name("emk"), static_cast<std::uint64_t>(i)));
        for (int r = 1; r < strategy.restarts; ++r) {
            std::vector<std::size_t> c{static_cast<std::size_t>(rng.below(u))};
            search.extend_farthest(c, ui);
            starts.push_back(std::move(c));
        }
        detail::CenterSet best{{}, std::numeric_limits<std::int64_t>::max()};
        for (auto& s : starts) {
            auto cs = search.improve(std::move(s));
            if (cs.cost < best.cost) best = std::move(cs);
        }
        out.push_back(detail::finish(vc, i, best, false));
        previous = best.centers;
    }
    return out;
}

inline EmkResult emk_score(const Election& e, int i, const EmkStrategy& strategy = {}) {
    if (i < 1) fail(ErrorKind::argument, "emk needs i >= 1");
    if (static_cast<std::size_t>(i) > e.votes.size()) {
        fail(ErrorKind::argument, "emk_" + std::to_string(i) + " needs at least " + std::to_string(i) + " votes, got " +
                                      std::to_string(e.votes.size()));
    }
    return emk_scores(e, i, strategy).back();
}

// ---------------------------------------------------------------------------
// Diversity, agreement, polarization
// ---------------------------------------------------------------------------

struct DapVector {
    double diversity = 0.0;
    double agreement = 0.0;
    double polarization = 0.0;

    std::array<double, 3> as_array() const { return {diversity, agreement, polarization}; }
};

struct SubsampleSpec {
    bool enabled = false;
    int elections = 20;
    int votes = 500;
};

struct DapStrategy {
    EmkStrategy emk;
    int diversity_terms = 5;
    SubsampleSpec subsample;
};

namespace detail {

inline double pair_count(const Election& e) {
    return static_cast<double>(e.votes.size()) * static_cast<double>(e.m) * static_cast<double>(e.m - 1) / 2.0;
}

inline double diversity_from(const Election& e, const std::vector<EmkResult>& emk, int terms) {
    double sum = 0.0;
    for (int i = 0; i < terms && i < static_cast<int>(emk.size()); ++i) sum += static_cast<double>(emk[static_cast<std::size_t>(i)].score);
    // emk in swaps is score/2, so (2/terms) * sum(score/2) / (n C(m,2)).
    return sum / (static_cast<double>(terms) * pair_count(e));
}

inline double polarization_from(const Election& e, const std::vector<EmkResult>& emk) {
    return static_cast<double>(emk[0].score - emk[1].score) / pair_count(e);
}

inline void require_two_candidates(const Election& e, std::string_view what) {
    if (e.m < 2) fail(ErrorKind::degenerate, std::string(what) + " needs at least two candidates");
}

inline DapVector dap_single(const Election& e, const DapStrategy& s) {
    require_two_candidates(e, "dap vector");
    if (e.votes.size() < 2) fail(ErrorKind::degenerate, "polarization needs at least two votes");
    const auto emk = emk_scores(e, std::max(2, s.diversity_terms), s.emk);
    return {diversity_from(e, emk, s.diversity_terms), agreement_index(e), polarization_from(e, emk)};
}

}  // namespace detail

inline double diversity_index(const Election& e, const EmkStrategy& s = {}, int terms = 5) {
    require_valid(e);
    detail::require_two_candidates(e, "diversity index");
    return detail::diversity_from(e, emk_scores(e, terms, s), terms);
}

inline double polarization_index(const Election& e, const EmkStrategy& s = {}) {
    require_valid(e);
    detail::require_two_candidates(e, "polarization index");
    if (e.votes.size() < 2) fail(ErrorKind::degenerate, "polarization needs at least two votes");
    return detail::polarization_from(e, emk_scores(e, 2, s));
}

// Uniform subsample of `votes` votes without replacement.
inline Election subsample_votes(const Election& e, int votes, Rng& rng) {
    Election out;
    out.m = e.m;
    out.label = e.label;
    out.candidate_names = e.candidate_names;
    std::vector<std::size_t> idx(e.votes.size());
    std::iota(idx.begin(), idx.end(), 0);
    const auto take = std::min(idx.size(), static_cast<std::size_t>(votes));
    for (std::size_t k = 0; k < take; ++k) {
        const auto j = k + static_cast<std::size_t>(rng.below(idx.size() - k));
        std::swap(idx[k], idx[j]);
        out.votes.push_back(e.votes[idx[k]]);
    }
    return out;
}

inline DapVector dap_vector(const Election& e, const DapStrategy& s = {}) {
    require_valid(e);
    if (!s.subsample.enabled || e.votes.size() <= static_cast<std::size_t>(s.subsample.votes)) return detail::dap_single(e, s);
    Rng rng = Rng::stream(s.emk.seed, "dap-subsample");
    DapVector acc;
    for (int k = 0; k < s.subsample.elections; ++k) {
        const auto sub = subsample_votes(e, s.subsample.votes, rng);
        DapStrategy inner = s;
        inner.emk.seed = derive_seed(s.emk.seed, static_cast<std::uint64_t>(k));
        const auto d = detail::dap_single(sub, inner);
        acc.diversity += d.diversity;
        acc.agreement += d.agreement;
        acc.polarization += d.polarization;
    }
    const double c = static_cast<double>(s.subsample.elections);
    return {acc.diversity / c, acc.agreement / c, acc.polarization / c};
}

inline DistanceValue dap_distance(const DapVector& a, const DapVector& b) {
    const auto x = a.as_array();
    const auto y = b.as_array();
    auto d = feature_distance(x, y, Norm::l2);
    d.metric = Metric::dap;
    return d;
}

inline DistanceValue dap_distance(const Election& e, const Election& f, const DapStrategy& s = {}) {
    return dap_distance(dap_vector(e, s), dap_vector(f, s));
}

// ---------------------------------------------------------------------------
// Indicator features
// ---------------------------------------------------------------------------

struct Indicators {
    int id = 1;
    int an = 1;
    int un = 1;

    std::array<double, 3> as_array() const { return {double(id), double(an), double(un)}; }
};

inline Indicators indicator_features(const Election& e) {
    require_valid(e);
    if (!e.complete()) fail(ErrorKind::capability, "indicator features are defined for complete elections only");
    std::map<std::vector<int>, std::int64_t> counts;
    for (const Vote& v : e.votes) ++counts[v.top];
    const auto n = static_cast<std::int64_t>(e.votes.size());
    Indicators out;
    if (counts.size() == 1) out.id = 0;

    const auto& first = e.votes.front().top;
    std::vector<int> rev(first.rbegin(), first.rend());
    if (n % 2 == 0) {
        if (rev == first) {
            if (counts.size() == 1) out.an = 0;
        } else if (counts.size() == 2 && counts.count(rev) && counts[first] == n / 2 && counts[rev] == n / 2) {
            out.an = 0;
        }
    }

    std::int64_t fact = 1;
    bool small = true;
    for (int k = 2; k <= e.m; ++k) {
        fact *= k;
        if (fact > n) {
            small = false;
            break;
        }
    }
    if (small && n % fact == 0 && static_cast<std::int64_t>(counts.size()) == fact) {
        const auto each = n / fact;
        out.un = std::all_of(counts.begin(), counts.end(), [each](const auto& kv) { return kv.second == each; }) ? 0 : 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct DapReportRow {
    std::string label;
    int m = 0;
    std::size_t n = 0;
    std::size_t unique_votes = 0;
    DapVector dap;
};

inline DapReportRow dap_report_row(const Election& e, const DapStrategy& s = {}) {
    std::map<std::vector<int>, int> distinct;
    for (const Vote& v : e.votes) distinct[v.top] = 1;
    return {e.label, e.m, e.votes.size(), distinct.size(), dap_vector(e, s)};
}

inline void write_dap_report(std::ostream& os, const std::vector<DapReportRow>& rows) {
    os << "label,m,n,unique_votes,diversity,agreement,polarization\n";
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(12);
    for (const auto& r : rows) {
        os << r.label << ',' << r.m << ',' << r.n << ',' << r.unique_votes << ',' << r.dap.diversity << ','
           << r.dap.agreement << ',' << r.dap.polarization << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

}  // namespace elmap
