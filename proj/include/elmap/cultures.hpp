#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "elmap/election.hpp"
#include "elmap/error.hpp"
#include "elmap/random.hpp"

namespace elmap {

enum class CultureKind { ic, mallows, urn, euclidean, sp_conitzer, sp_walsh, spoc, gs, id, an, un_exact, un_approx, st };
enum class Shape { cube, sphere };
enum class Tree { balanced, caterpillar };

inline std::string_view to_string(CultureKind k) {
    switch (k) {
        case CultureKind::ic: return "ic";
        case CultureKind::mallows: return "mallows";
        case CultureKind::urn: return "urn";
        case CultureKind::euclidean: return "euclidean";
        case CultureKind::sp_conitzer: return "sp_conitzer";
        case CultureKind::sp_walsh: return "sp_walsh";
        case CultureKind::spoc: return "spoc";
        case CultureKind::gs: return "gs";
        case CultureKind::id: return "id";
        case CultureKind::an: return "an";
        case CultureKind::un_exact: return "un_exact";
        case CultureKind::un_approx: return "un_approx";
        case CultureKind::st: return "st";
    }
    return "unknown";
}

inline CultureKind parse_culture(std::string_view name) {
    for (CultureKind k : {CultureKind::ic, CultureKind::mallows, CultureKind::urn, CultureKind::euclidean,
                          CultureKind::sp_conitzer, CultureKind::sp_walsh, CultureKind::spoc, CultureKind::gs,
                          CultureKind::id, CultureKind::an, CultureKind::un_exact, CultureKind::un_approx, CultureKind::st}) {
        if (name == to_string(k)) return k;
    }
    fail(ErrorKind::argument, "unknown culture '" + std::string(name) + "'");
}

struct CultureSpec {
    CultureKind kind = CultureKind::ic;
    int m = 8;
    int n = 96;
    std::uint64_t seed = 0;
    double norm_phi = 0.5;
    double alpha = 0.0;
    int dim = 2;
    Shape shape = Shape::cube;
    Tree tree = Tree::balanced;

    std::string params() const {
        std::ostringstream os;
        switch (kind) {
            case CultureKind::mallows: os << "norm_phi=" << norm_phi; break;
            case CultureKind::urn: os << "alpha=" << alpha; break;
            case CultureKind::euclidean: os << "dim=" << dim << ";shape=" << (shape == Shape::cube ? "cube" : "sphere"); break;
            case CultureKind::gs: os << "tree=" << (tree == Tree::balanced ? "balanced" : "caterpillar"); break;
            default: break;
        }
        return os.str();
    }
};

inline std::vector<std::string> validate_spec(const CultureSpec& s) {
    std::vector<std::string> out;
    if (s.m < 1) out.push_back("m must be at least 1");
    if (s.n < 1) out.push_back("n must be at least 1");
    if (s.kind == CultureKind::mallows && !(s.norm_phi >= 0.0 && s.norm_phi <= 1.0)) out.push_back("norm_phi must lie in [0,1]");
    if (s.kind == CultureKind::urn && !(s.alpha >= 0.0)) out.push_back("alpha must be nonnegative");
    if (s.kind == CultureKind::euclidean && s.dim < 1) out.push_back("dim must be at least 1");
    if (s.kind == CultureKind::euclidean && s.shape == Shape::sphere && s.dim < 2) out.push_back("sphere needs dim >= 2");
    if (s.kind == CultureKind::an && s.n % 2 != 0) out.push_back("an requires even n");
    if (s.kind == CultureKind::un_exact) {
        std::int64_t fact = 1;
        bool fits = true;
        for (int k = 2; k <= s.m; ++k) {
            fact *= k;
            if (fact > s.n) {
                fits = false;
                break;
            }
        }
        if (!fits || s.n % fact != 0) out.push_back("un_exact requires n to be a multiple of m!");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mallows calibration
// ---------------------------------------------------------------------------

// Expected swap distance from the central vote under Mallows(phi) with m candidates, computed as
// the sum over insertion steps of the mean displacement.
inline double mallows_expected_swaps(double phi, int m) {
    double total = 0.0;
    for (int j = 1; j <= m; ++j) {
        double num = 0.0;
        double den = 0.0;
        double w = 1.0;
        for (int k = 0; k < j; ++k) {
            num += k * w;
            den += w;
            w *= phi;
        }
        total += num / den;
    }
    return total;
}

inline double norm_phi_to_phi(double norm_phi, int m) {
    if (m < 2) fail(ErrorKind::argument, "norm_phi_to_phi needs m >= 2");
    if (norm_phi <= 0.0) return 0.0;
    if (norm_phi >= 1.0) return 1.0;
    const double target = norm_phi * m * (m - 1) / 4.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (mallows_expected_swaps(mid, m) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

// Repeated insertion around the identity: inserting the j-th candidate at depth k from the bottom
// creates k inversions and has weight phi^k.
inline std::vector<int> mallows_vote(int m, double phi, Rng& rng) {
    std::vector<int> vote;
    vote.reserve(static_cast<std::size_t>(m));
    std::vector<double> w;
    for (int j = 0; j < m; ++j) {
        w.assign(static_cast<std::size_t>(j) + 1, 0.0);
        double acc = 0.0;
        double pw = 1.0;
        for (int k = 0; k <= j; ++k) {
            acc += pw;
            w[static_cast<std::size_t>(k)] = acc;
            pw *= phi;
        }
        const double r = rng.uniform() * acc;
        int k = 0;
        while (k < j && r >= w[static_cast<std::size_t>(k)]) ++k;
        vote.insert(vote.end() - k, j);
    }
    return vote;
}

inline std::vector<int> by_distance(const std::vector<double>& voter, const std::vector<std::vector<double>>& cands) {
    const std::size_t m = cands.size();
    std::vector<double> d(m, 0.0);
    for (std::size_t c = 0; c < m; ++c) {
        double s = 0.0;
        for (std::size_t k = 0; k < voter.size(); ++k) {
            const double t = voter[k] - cands[c][k];
            s += t * t;
        }
        d[c] = s;
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)]; });
    return order;
}

inline std::vector<double> euclidean_point(int dim, Shape shape, Rng& rng) {
    std::vector<double> p(static_cast<std::size_t>(dim));
    if (shape == Shape::cube) {
        for (auto& x : p) x = rng.uniform();
        return p;
    }
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& x : p) {
            x = rng.normal();
            norm += x * x;
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& x : p) x /= norm;
    return p;
}

// Leaves of the frontier in base order, with the leaf-range of every internal node.
struct GsTree {
    // children of internal node k: (left range, right range) over base frontier positions
    struct Node {
        int lo, mid, hi;
    };
    std::vector<Node> nodes;
};

inline void build_balanced(GsTree& t, int lo, int hi) {
    if (hi - lo < 2) return;
    const int mid = lo + (hi - lo + 1) / 2;
    t.nodes.push_back({lo, mid, hi});
    build_balanced(t, lo, mid);
    build_balanced(t, mid, hi);
}

inline GsTree gs_tree(int m, Tree kind) {
    GsTree t;
    if (kind == Tree::balanced) {
        build_balanced(t, 0, m);
    } else {
        for (int lo = 0; lo + 1 < m; ++lo) t.nodes.push_back({lo, lo + 1, m});
    }
    return t;
}

// Frontier after flipping each internal node with probability 1/2; nodes are visited top-down.
inline std::vector<int> gs_vote(const GsTree& tree, int m, Rng& rng) {
    std::vector<int> flips(tree.nodes.size());
    for (auto& f : flips) f = rng.coin() ? 1 : 0;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(m));
    // Recursive emit of base range [lo, hi) using the node whose range it is.
    auto emit = [&](auto&& self, int lo, int hi) -> void {
        if (hi - lo == 1) {
            out.push_back(lo);
            return;
        }
        for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
            const auto& nd = tree.nodes[k];
            if (nd.lo == lo && nd.hi == hi) {
                if (flips[k]) {
                    self(self, nd.mid, hi);
                    self(self, lo, nd.mid);
                } else {
                    self(self, lo, nd.mid);
                    self(self, nd.mid, hi);
                }
                return;
            }
        }
    };
    if (m > 0) emit(emit, 0, m);
    return out;
}

inline Rng voter_stream(std::uint64_t seed, std::size_t voter) { return Rng::stream(derive_seed(seed, "votes"), voter); }

}  // namespace detail

inline Election sample_election(const CultureSpec& spec) {
    const auto problems = validate_spec(spec);
    if (!problems.empty()) fail(ErrorKind::argument, "invalid culture spec for " + std::string(to_string(spec.kind)) + ": " + problems.front());
    const int m = spec.m;
    const auto n = static_cast<std::size_t>(spec.n);
    Election e;
    e.m = m;
    e.label = std::string(to_string(spec.kind));
    e.votes.reserve(n);
    Rng election_rng = Rng::stream(spec.seed, "election");
    std::vector<int> identity(static_cast<std::size_t>(m));
    std::iota(identity.begin(), identity.end(), 0);
    auto push = [&](std::vector<int> top) { e.votes.emplace_back(std::move(top), m); };

    switch (spec.kind) {
        case CultureKind::ic:
        case CultureKind::un_approx:
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                push(r.permutation(m));
            }
            break;
        case CultureKind::mallows: {
            const double phi = m >= 2 ? norm_phi_to_phi(spec.norm_phi, m) : 0.0;
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                push(detail::mallows_vote(m, phi, r));
            }
            break;
        }
        case CultureKind::urn:
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                const double fresh = 1.0 / (1.0 + static_cast<double>(v) * spec.alpha);
                if (v == 0 || r.uniform() < fresh) push(r.permutation(m));
                else push(e.votes[static_cast<std::size_t>(r.below(v))].top);
            }
            break;
        case CultureKind::euclidean: {
            std::vector<std::vector<double>> cands;
            for (int c = 0; c < m; ++c) cands.push_back(detail::euclidean_point(spec.dim, spec.shape, election_rng));
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                push(detail::by_distance(detail::euclidean_point(spec.dim, spec.shape, r), cands));
            }
            break;
        }
        case CultureKind::sp_conitzer: {
            const auto axis = election_rng.permutation(m);
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                int peak = static_cast<int>(r.below(static_cast<std::uint64_t>(m)));
                int left = peak - 1;
                int right = peak + 1;
                std::vector<int> top{axis[static_cast<std::size_t>(peak)]};
                while (static_cast<int>(top.size()) < m) {
                    const bool go_left = right >= m || (left >= 0 && r.coin());
                    if (go_left) top.push_back(axis[static_cast<std::size_t>(left--)]);
                    else top.push_back(axis[static_cast<std::size_t>(right++)]);
                }
                push(std::move(top));
            }
            break;
        }
        case CultureKind::sp_walsh: {
            const auto axis = election_rng.permutation(m);
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                std::vector<int> top(static_cast<std::size_t>(m));
                int lo = 0;
                int hi = m - 1;
                for (int slot = m - 1; slot > 0; --slot) {
                    top[static_cast<std::size_t>(slot)] = r.coin() ? axis[static_cast<std::size_t>(lo++)] : axis[static_cast<std::size_t>(hi--)];
                }
                top[0] = axis[static_cast<std::size_t>(lo)];
                push(std::move(top));
            }
            break;
        }
        case CultureKind::spoc: {
            const auto axis = election_rng.permutation(m);
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                const int t = static_cast<int>(r.below(static_cast<std::uint64_t>(m)));
                int left = t;
                int right = t;
                std::vector<int> top{axis[static_cast<std::size_t>(t)]};
                while (static_cast<int>(top.size()) < m) {
                    if (r.coin()) {
                        left = (left - 1 + m) % m;
                        top.push_back(axis[static_cast<std::size_t>(left)]);
                    } else {
                        right = (right + 1) % m;
                        top.push_back(axis[static_cast<std::size_t>(right)]);
                    }
                }
                push(std::move(top));
            }
            break;
        }
        case CultureKind::gs: {
            const auto tree = detail::gs_tree(m, spec.tree);
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                push(detail::gs_vote(tree, m, r));
            }
            break;
        }
        case CultureKind::id:
            for (std::size_t v = 0; v < n; ++v) push(identity);
            break;
        case CultureKind::an: {
            std::vector<int> rev(identity.rbegin(), identity.rend());
            for (std::size_t v = 0; v < n; ++v) push(v < n / 2 ? identity : rev);
            break;
        }
        case CultureKind::un_exact: {
            std::vector<int> p = identity;
            std::vector<std::vector<int>> all;
            do all.push_back(p);
            while (std::next_permutation(p.begin(), p.end()));
            for (std::size_t v = 0; v < n; ++v) push(all[v % all.size()]);
            break;
        }
        case CultureKind::st: {
            const int half = (m + 1) / 2;
            for (std::size_t v = 0; v < n; ++v) {
                Rng r = detail::voter_stream(spec.seed, v);
                std::vector<int> upper(identity.begin(), identity.begin() + half);
                std::vector<int> lower(identity.begin() + half, identity.end());
                r.shuffle(upper);
                r.shuffle(lower);
                upper.insert(upper.end(), lower.begin(), lower.end());
                push(std::move(upper));
            }
            break;
        }
    }
    return e;
}

// ---------------------------------------------------------------------------
// Truncation
// ---------------------------------------------------------------------------

struct TruncationSpec {
    enum class Method { top_k, random_cut, random_drop } method = Method::top_k;
    int k = 1;
    double p = 0.5;
    std::uint64_t seed = 0;
};

inline std::string_view to_string(TruncationSpec::Method m) {
    switch (m) {
        case TruncationSpec::Method::top_k: return "top_k";
        case TruncationSpec::Method::random_cut: return "random_cut";
        case TruncationSpec::Method::random_drop: return "random_drop";
    }
    return "unknown";
}

inline Election truncate(const Election& e, const TruncationSpec& spec) {
    require_valid(e);
    if (!e.complete()) fail(ErrorKind::capability, "election '" + e.label + "' is already truncated");
    using M = TruncationSpec::Method;
    if (spec.method == M::top_k && (spec.k < 1 || spec.k > e.m)) {
        fail(ErrorKind::argument, "top_k needs 1 <= k <= m, got k=" + std::to_string(spec.k));
    }
    if (spec.method != M::top_k && !(spec.p >= 0.0 && spec.p <= 1.0)) fail(ErrorKind::argument, "truncation p must lie in [0,1]");
    Election out = e;
    const auto base = derive_seed(spec.seed, "truncate");
    for (std::size_t v = 0; v < out.votes.size(); ++v) {
        auto& top = out.votes[v].top;
        switch (spec.method) {
            case M::top_k:
                top.resize(static_cast<std::size_t>(spec.k));
                break;
            case M::random_cut: {
                Rng r = Rng::stream(base, v);
                std::size_t keep = 1;
                while (keep < top.size() && r.bernoulli(spec.p)) ++keep;
                top.resize(keep);
                break;
            }
            case M::random_drop: {
                Rng r = Rng::stream(base, v);
                std::vector<int> kept;
                for (int c : top) {
                    if (!r.bernoulli(spec.p)) kept.push_back(c);
                }
                top = std::move(kept);
                break;
            }
        }
    }
    return out;
}

// p such that random_cut keeps `target` candidates in expectation: sum_{j<m} p^j = target.
inline double random_cut_p_for_length(int m, double target) {
    if (target <= 1.0) return 0.0;
    if (target >= m) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double len = 0.0;
        double pw = 1.0;
        for (int j = 0; j < m; ++j) {
            len += pw;
            pw *= mid;
        }
        if (len < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Dataset recipes
// ---------------------------------------------------------------------------

enum class Recipe { basic, size_oriented, truncation_oriented, comprehensive, random_drop };

inline std::string_view to_string(Recipe r) {
    switch (r) {
        case Recipe::basic: return "basic";
        case Recipe::size_oriented: return "size_oriented";
        case Recipe::truncation_oriented: return "truncation_oriented";
        case Recipe::comprehensive: return "comprehensive";
        case Recipe::random_drop: return "random_drop";
    }
    return "unknown";
}

inline Recipe parse_recipe(std::string_view name) {
    for (Recipe r : {Recipe::basic, Recipe::size_oriented, Recipe::truncation_oriented, Recipe::comprehensive, Recipe::random_drop}) {
        if (name == to_string(r)) return r;
    }
    fail(ErrorKind::argument, "unknown recipe '" + std::string(name) + "'");
}

struct DatasetEntry {
    Election election;
    // Display family, e.g. "Mallows" or "5D-Cube".
    std::string family;
    CultureSpec spec;
    // "none", "top_k", "random_cut" or "random_drop".
    std::string truncation = "none";
};

struct FamilyRecipe {
    std::string family;
    CultureSpec base;
    int count = 0;
    // Draw norm_phi ~ U[0,1] (Mallows) or alpha ~ Gamma(0.8, 1) (urn) per election.
    bool random_param = false;
};

inline std::vector<FamilyRecipe> basic_families() {
    auto make = [](std::string name, CultureKind k, int count) {
        FamilyRecipe f;
        f.family = std::move(name);
        f.base.kind = k;
        f.count = count;
        return f;
    };
    auto euclid = [&](std::string name, int dim, Shape shape, int count) {
        auto f = make(std::move(name), CultureKind::euclidean, count);
        f.base.dim = dim;
        f.base.shape = shape;
        return f;
    };
    std::vector<FamilyRecipe> out;
    out.push_back(make("IC", CultureKind::ic, 16));
    auto mallows = make("Mallows", CultureKind::mallows, 48);
    mallows.random_param = true;
    out.push_back(mallows);
    auto urn = make("Urn", CultureKind::urn, 48);
    urn.random_param = true;
    out.push_back(urn);
    out.push_back(euclid("Interval", 1, Shape::cube, 16));
    out.push_back(euclid("Square", 2, Shape::cube, 16));
    out.push_back(euclid("Cube", 3, Shape::cube, 16));
    out.push_back(euclid("5D-Cube", 5, Shape::cube, 8));
    out.push_back(euclid("10D-Cube", 10, Shape::cube, 8));
    out.push_back(euclid("Circle", 2, Shape::sphere, 16));
    out.push_back(euclid("Sphere", 3, Shape::sphere, 16));
    out.push_back(make("SP-Conitzer", CultureKind::sp_conitzer, 16));
    out.push_back(make("SP-Walsh", CultureKind::sp_walsh, 16));
    out.push_back(make("SPOC", CultureKind::spoc, 16));
    auto gsb = make("GS-Balanced", CultureKind::gs, 16);
    gsb.base.tree = Tree::balanced;
    out.push_back(gsb);
    auto gsc = make("GS-Caterpillar", CultureKind::gs, 16);
    gsc.base.tree = Tree::caterpillar;
    out.push_back(gsc);
    return out;
}

inline std::vector<FamilyRecipe> special_families() {
    std::vector<FamilyRecipe> out;
    for (auto [name, kind] : {std::pair<const char*, CultureKind>{"ID", CultureKind::id}, {"AN", CultureKind::an},
                              {"UN", CultureKind::un_approx}, {"ST", CultureKind::st}}) {
        FamilyRecipe f;
        f.family = name;
        f.base.kind = kind;
        f.count = 1;
        out.push_back(f);
    }
    return out;
}

namespace detail {

inline std::string two_digit(std::size_t i) {
    std::string s = std::to_string(i);
    return s.size() < 2 ? "0" + s : s;
}

struct SizedGroup {
    std::vector<std::size_t> members;
};

inline void sample_group(std::vector<DatasetEntry>& out, std::vector<SizedGroup>& groups, const FamilyRecipe& fam,
                         const std::vector<std::pair<int, int>>& sizes, std::uint64_t seed) {
    Rng param_rng = Rng::stream(seed, "params/" + fam.family);
    const int per = std::max(1, fam.count / static_cast<int>(sizes.size()));
    std::size_t serial = 0;
    for (auto [m, n] : sizes) {
        SizedGroup g;
        for (int k = 0; k < per; ++k) {
            CultureSpec spec = fam.base;
            spec.m = m;
            spec.n = n;
            spec.seed = derive_seed(seed, fam.family + "/" + std::to_string(serial));
            if (fam.random_param && spec.kind == CultureKind::mallows) spec.norm_phi = param_rng.uniform();
            if (fam.random_param && spec.kind == CultureKind::urn) spec.alpha = param_rng.gamma(0.8, 1.0);
            DatasetEntry entry;
            entry.election = sample_election(spec);
            entry.election.label = fam.family + "_" + two_digit(serial);
            entry.family = fam.family;
            entry.spec = spec;
            g.members.push_back(out.size());
            out.push_back(std::move(entry));
            ++serial;
        }
        groups.push_back(std::move(g));
    }
}

inline void truncate_entry(DatasetEntry& e, TruncationSpec::Method method, std::uint64_t seed) {
    TruncationSpec t;
    t.method = method;
    t.seed = derive_seed(seed, "truncate/" + e.election.label);
    const int m = e.election.m;
    t.k = std::max(1, m / 2);
    if (method == TruncationSpec::Method::random_cut) t.p = random_cut_p_for_length(m, m / 2.0);
    if (method == TruncationSpec::Method::random_drop) t.p = 0.5;
    const auto label = e.election.label;
    e.election = truncate(e.election, t);
    e.election.label = label + (method == TruncationSpec::Method::top_k ? "_topk" : method == TruncationSpec::Method::random_cut ? "_cut" : "_drop");
    e.truncation = std::string(to_string(method));
}

// Per group: first half intact, next quarter top-k, last quarter random cut. Groups of two cannot
// be split into quarters, so their second member alternates between the methods across groups.
inline void truncate_groups(std::vector<DatasetEntry>& entries, const std::vector<SizedGroup>& groups, std::uint64_t seed) {
    std::size_t small_groups = 0;
    for (const auto& g : groups) {
        const std::size_t size = g.members.size();
        if (size < 2) continue;
        if (size < 4) {
            const auto method = small_groups++ % 2 == 0 ? TruncationSpec::Method::top_k : TruncationSpec::Method::random_cut;
            for (std::size_t k = (size + 1) / 2; k < size; ++k) truncate_entry(entries[g.members[k]], method, seed);
            continue;
        }
        const std::size_t half = size / 2;
        const std::size_t quarter = size / 4;
        for (std::size_t k = half; k < size; ++k) {
            const auto method = k < half + quarter ? TruncationSpec::Method::top_k : TruncationSpec::Method::random_cut;
            truncate_entry(entries[g.members[k]], method, seed);
        }
    }
}

}  // namespace detail

inline std::vector<DatasetEntry> build_dataset(Recipe recipe, std::uint64_t seed) {
    const bool sized = recipe == Recipe::size_oriented || recipe == Recipe::comprehensive;
    const std::vector<std::pair<int, int>> basic_size{{8, 96}};
    const std::vector<std::pair<int, int>> grid{{8, 96}, {8, 192}, {16, 96}, {16, 192}};
    std::vector<DatasetEntry> out;
    std::vector<detail::SizedGroup> groups;
    for (const auto& fam : basic_families()) detail::sample_group(out, groups, fam, sized ? grid : basic_size, seed);
    for (const auto& fam : special_families()) {
        for (auto size : sized ? grid : basic_size) {
            FamilyRecipe one = fam;
            one.count = 1;
            std::vector<detail::SizedGroup> ignored;
            const auto before = out.size();
            detail::sample_group(out, ignored, one, {size}, derive_seed(seed, std::to_string(size.first) + "x" + std::to_string(size.second)));
            if (sized) out[before].election.label = fam.family + "_" + std::to_string(size.first) + "x" + std::to_string(size.second);
            else out[before].election.label = fam.family;
        }
    }
    if (recipe == Recipe::truncation_oriented || recipe == Recipe::comprehensive) detail::truncate_groups(out, groups, seed);
    if (recipe == Recipe::random_drop) {
        for (const auto& g : groups) {
            for (std::size_t k = g.members.size() / 2; k < g.members.size(); ++k) {
                detail::truncate_entry(out[g.members[k]], TruncationSpec::Method::random_drop, seed);
            }
        }
    }
    return out;
}

}  // namespace elmap
