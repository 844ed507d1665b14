#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "elmap/distances.hpp"
#include "elmap/error.hpp"
#include "elmap/random.hpp"

namespace elmap {

using Point2 = std::array<double, 2>;

enum class Embedder { mds, kk };

inline std::string_view to_string(Embedder a) { return a == Embedder::mds ? "mds" : "kk"; }

inline Embedder parse_embedder(std::string_view s) {
    if (s == "mds") return Embedder::mds;
    if (s == "kk") return Embedder::kk;
    fail(ErrorKind::argument, "unknown embedding algorithm '" + std::string(s) + "'");
}

struct EmbedConfig {
    int max_iter = 0;  // 0 = algorithm default (500 for mds, 1000 for kk)
    double tol = 1e-7;
    std::uint64_t seed = 0;
    int restarts = 3;
};

struct Embedding2D {
    std::vector<std::string> labels;
    std::vector<Point2> points;
    // Value of the minimized objective at `points`: raw stress for mds, Kamada-Kawai energy for kk.
    double final_stress = 0.0;
    Embedder algorithm = Embedder::mds;
    int iterations_used = 0;
    std::vector<double> history;
};

inline DistanceMatrix normalize_matrix(const DistanceMatrix& d) {
    if (d.size() == 0) fail(ErrorKind::empty_input, "cannot normalize an empty matrix");
    const double top = d.max_entry();
    if (!(top > 0.0)) fail(ErrorKind::degenerate, "cannot normalize an all-zero matrix");
    DistanceMatrix out(d.labels(), d.metric());
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) out.set(i, j, d(i, j) / top);
    }
    return out;
}

inline double point_distance(const Point2& a, const Point2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

inline double raw_stress(const DistanceMatrix& d, const std::vector<Point2>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const double r = point_distance(p[i], p[j]) - d(i, j);
            s += r * r;
        }
    }
    return s;
}

inline double kk_weight(double dij) {
    const double c = std::max(dij, 1e-9);
    return 1.0 / (c * c);
}

inline double kk_energy(const DistanceMatrix& d, const std::vector<Point2>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const double r = point_distance(p[i], p[j]) - d(i, j);
            s += kk_weight(d(i, j)) * r * r;
        }
    }
    return s;
}

// Kruskal stress-1: sqrt(sum (|pi-pj| - dij)^2 / sum dij^2).
inline double normalized_stress(const DistanceMatrix& d, const std::vector<Point2>& p) {
    double den = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) den += d(i, j) * d(i, j);
    }
    if (den == 0.0) return 0.0;
    return std::sqrt(raw_stress(d, p) / den);
}

namespace detail {

inline void check_embeddable(const DistanceMatrix& d) {
    if (d.size() == 0) fail(ErrorKind::empty_input, "cannot embed an empty matrix");
    for (double v : d.entries()) {
        if (std::isnan(v)) fail(ErrorKind::parse, "distance matrix contains NaN");
        if (v < 0.0) fail(ErrorKind::argument, "distance matrix contains a negative entry");
    }
    if (!d.symmetric(1e-12)) fail(ErrorKind::argument, "distance matrix must be symmetric with zero diagonal");
}

inline std::vector<Point2> random_init(std::size_t n, std::uint64_t seed, int restart) {
    Rng rng = Rng::stream(derive_seed(seed, "embed-init"), static_cast<std::uint64_t>(restart));
    std::vector<Point2> p(n);
    for (auto& x : p) x = {rng.uniform(), rng.uniform()};
    return p;
}

// Classical (Torgerson) scaling: top two eigenpairs of -J D^2 J / 2.
inline std::vector<Point2> classical_init(const DistanceMatrix& d) {
    const auto n = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXd sq(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = d(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            sq(i, j) = v * v;
        }
    }
    const Eigen::VectorXd row = sq.rowwise().mean();
    const double all = row.mean();
    const Eigen::MatrixXd b = (-0.5 * (((sq.colwise() - row).rowwise() - row.transpose()).array() + all)).matrix();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
    std::vector<Point2> out(d.size(), Point2{0.0, 0.0});
    if (eig.info() != Eigen::Success) return out;
    for (int axis = 0; axis < 2 && axis < n; ++axis) {
        const Eigen::Index k = n - 1 - axis;
        const double scale = std::sqrt(std::max(0.0, eig.eigenvalues()(k)));
        for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(axis)] = scale * eig.eigenvectors()(i, k);
    }
    return out;
}

struct RunResult {
    std::vector<Point2> points;
    double objective = 0.0;
    int iterations = 0;
    std::vector<double> history;
};

inline RunResult smacof_run(const DistanceMatrix& d, std::vector<Point2> x, int max_iter, double tol) {
    const std::size_t n = d.size();
    RunResult r;
    double stress = raw_stress(d, x);
    r.history.push_back(stress);
    std::vector<Point2> next(n);
    for (int it = 0; it < max_iter && stress > 0.0; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double bx = 0.0;
            double by = 0.0;
            double bii = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double dist = point_distance(x[i], x[j]);
                const double b = dist > 0.0 ? -d(i, j) / dist : 0.0;
                bx += b * x[j][0];
                by += b * x[j][1];
                bii -= b;
            }
            next[i] = {(bx + bii * x[i][0]) / static_cast<double>(n), (by + bii * x[i][1]) / static_cast<double>(n)};
        }
        x.swap(next);
        const double updated = raw_stress(d, x);
        r.history.push_back(updated);
        ++r.iterations;
        const double change = (stress - updated) / stress;
        stress = updated;
        if (change < tol) break;
    }
    r.points = std::move(x);
    r.objective = stress;
    return r;
}

class KamadaKawai {
  public:
    KamadaKawai(const DistanceMatrix& d, std::vector<Point2> p) : d_(d), p_(std::move(p)), grad_(p_.size(), {0.0, 0.0}) {
        for (std::size_t i = 0; i < p_.size(); ++i) grad_[i] = node_gradient(i, p_[i]);
    }

    RunResult run(int max_iter, double tol) {
        RunResult r;
        double energy = kk_energy(d_, p_);
        r.history.push_back(energy);
        const std::size_t n = p_.size();
        for (int sweep = 0; sweep < max_iter && energy > 0.0 && n > 1; ++sweep) {
            const double before = energy;
            stuck_.assign(n, 0);
            for (std::size_t step = 0; step < n; ++step) {
                std::size_t k = 0;
                double best = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (stuck_[i]) continue;
                    const double g = std::hypot(grad_[i][0], grad_[i][1]);
                    if (g > best) {
                        best = g;
                        k = i;
                    }
                }
                if (best <= 0.0) break;
                energy += move_node(k);
            }
            energy = kk_energy(d_, p_);
            r.history.push_back(energy);
            ++r.iterations;
            if (before <= 0.0 || (before - energy) / before < tol) break;
        }
        r.points = p_;
        r.objective = energy;
        return r;
    }

  private:
    Point2 pair_gradient(std::size_t i, const Point2& pi, std::size_t j) const {
        const double dx = pi[0] - p_[j][0];
        const double dy = pi[1] - p_[j][1];
        const double r = std::hypot(dx, dy);
        if (r == 0.0) return {0.0, 0.0};
        const double w = kk_weight(d_(i, j));
        const double f = 2.0 * w * (1.0 - d_(i, j) / r);
        return {f * dx, f * dy};
    }

    Point2 node_gradient(std::size_t i, const Point2& pi) const {
        Point2 g{0.0, 0.0};
        for (std::size_t j = 0; j < p_.size(); ++j) {
            if (j == i) continue;
            const auto t = pair_gradient(i, pi, j);
            g[0] += t[0];
            g[1] += t[1];
        }
        return g;
    }

    double node_energy(std::size_t i, const Point2& pi) const {
        double e = 0.0;
        for (std::size_t j = 0; j < p_.size(); ++j) {
            if (j == i) continue;
            const double r = point_distance(pi, p_[j]) - d_(i, j);
            e += kk_weight(d_(i, j)) * r * r;
        }
        return e;
    }

    // Newton step on node k with backtracking; returns the energy change (<= 0).
    double move_node(std::size_t k) {
        const Point2 pk = p_[k];
        const Point2 g = grad_[k];
        double hxx = 0.0, hxy = 0.0, hyy = 0.0, wsum = 0.0;
        for (std::size_t j = 0; j < p_.size(); ++j) {
            if (j == k) continue;
            const double dx = pk[0] - p_[j][0];
            const double dy = pk[1] - p_[j][1];
            const double r = std::hypot(dx, dy);
            const double w = kk_weight(d_(k, j));
            wsum += 2.0 * w;
            if (r == 0.0) continue;
            const double l = d_(k, j);
            const double r3 = r * r * r;
            hxx += 2.0 * w * (1.0 - l * dy * dy / r3);
            hyy += 2.0 * w * (1.0 - l * dx * dx / r3);
            hxy += 2.0 * w * (l * dx * dy / r3);
        }
        const double det = hxx * hyy - hxy * hxy;
        Point2 step;
        if (hxx > 0.0 && det > 0.0) {
            step = {-(hyy * g[0] - hxy * g[1]) / det, -(hxx * g[1] - hxy * g[0]) / det};
        } else {
            step = {-g[0] / wsum, -g[1] / wsum};
        }
        const double e0 = node_energy(k, pk);
        double scale = 1.0;
        for (int tries = 0; tries < 40; ++tries, scale *= 0.5) {
            const Point2 cand{pk[0] + scale * step[0], pk[1] + scale * step[1]};
            const double e1 = node_energy(k, cand);
            if (e1 < e0) {
                for (std::size_t j = 0; j < p_.size(); ++j) {
                    if (j == k) continue;
                    // gradient of j w.r.t. its pair with k: remove old, add new
                    const auto old_t = pair_gradient_at(j, p_[j], k, pk);
                    const auto new_t = pair_gradient_at(j, p_[j], k, cand);
                    grad_[j][0] += new_t[0] - old_t[0];
                    grad_[j][1] += new_t[1] - old_t[1];
                }
                p_[k] = cand;
                grad_[k] = node_gradient(k, cand);
                return e1 - e0;
            }
        }
        stuck_[k] = 1;
        return 0.0;
    }

    Point2 pair_gradient_at(std::size_t j, const Point2& pj, std::size_t k, const Point2& pk) const {
        const double dx = pj[0] - pk[0];
        const double dy = pj[1] - pk[1];
        const double r = std::hypot(dx, dy);
        if (r == 0.0) return {0.0, 0.0};
        const double w = kk_weight(d_(j, k));
        const double f = 2.0 * w * (1.0 - d_(j, k) / r);
        return {f * dx, f * dy};
    }

    const DistanceMatrix& d_;
    std::vector<Point2> p_;
    std::vector<Point2> grad_;
    std::vector<char> stuck_;
};

inline Embedding2D embed_with(const DistanceMatrix& d, const EmbedConfig& cfg, Embedder algo) {
    check_embeddable(d);
    const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : (algo == Embedder::mds ? 500 : 1000);
    Embedding2D best;
    best.labels = d.labels();
    best.algorithm = algo;
    best.final_stress = std::numeric_limits<double>::infinity();
    // Start -1 is classical scaling; the others are seeded random starts.
    for (int restart = -1; restart < std::max(1, cfg.restarts); ++restart) {
        auto init = restart < 0 ? classical_init(d) : random_init(d.size(), cfg.seed, restart);
        RunResult r = algo == Embedder::mds ? smacof_run(d, std::move(init), max_iter, cfg.tol)
                                            : KamadaKawai(d, std::move(init)).run(max_iter, cfg.tol);
        if (r.objective < best.final_stress) {
            best.points = std::move(r.points);
            best.final_stress = r.objective;
            best.iterations_used = r.iterations;
            best.history = std::move(r.history);
        }
    }
    // Report the objective recomputed from the returned points.
    best.final_stress = algo == Embedder::mds ? raw_stress(d, best.points) : kk_energy(d, best.points);
    if (!best.history.empty()) best.history.back() = best.final_stress;
    return best;
}

}  // namespace detail

inline Embedding2D mds_embed(const DistanceMatrix& d, const EmbedConfig& cfg = {}) { return detail::embed_with(d, cfg, Embedder::mds); }

inline Embedding2D kk_embed(const DistanceMatrix& d, const EmbedConfig& cfg = {}) { return detail::embed_with(d, cfg, Embedder::kk); }

inline Embedding2D embed(const DistanceMatrix& d, Embedder algo, const EmbedConfig& cfg = {}) { return detail::embed_with(d, cfg, algo); }

inline void write_coordinates_csv(std::ostream& os, const Embedding2D& e) {
    os << "label,x,y\n";
    const auto prec = os.precision();
    os << std::setprecision(12);
    for (std::size_t i = 0; i < e.points.size(); ++i) os << e.labels[i] << ',' << e.points[i][0] << ',' << e.points[i][1] << '\n';
    os.precision(prec);
}

}  // namespace elmap
