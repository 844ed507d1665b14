#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "elmap/assignment.hpp"
#include "elmap/election.hpp"
#include "elmap/error.hpp"

namespace elmap {

using Column = std::vector<double>;

namespace detail {

inline double checked_sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        if (!(x >= 0.0)) fail(ErrorKind::degenerate, "vector entry is negative or NaN");
        s += x;
    }
    if (!(s > 0.0)) fail(ErrorKind::degenerate, "vector has zero total mass");
    return s;
}

// Normalized CDF of a step density evaluated at x = num/den in [0, 1].
inline double step_cdf(std::span<const double> prefix, std::span<const double> mass, std::int64_t num, std::int64_t den) {
    const auto m = static_cast<std::int64_t>(mass.size());
    const std::int64_t scaled = num * m;
    const std::int64_t idx = scaled / den;
    if (idx >= m) return 1.0;
    const std::int64_t rem = scaled - idx * den;
    return prefix[static_cast<std::size_t>(idx)] +
           mass[static_cast<std::size_t>(idx)] * static_cast<double>(rem) / static_cast<double>(den);
}

}  // namespace detail

// Integral over [0,1] of |A - B| where A, B are the CDFs of the step densities of a and b.
// Dimensions may differ; both CDFs are piecewise linear on the merged breakpoints {i/|a|} u {j/|b|},
// so the integral is exact up to rounding.
inline double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) fail(ErrorKind::degenerate, "wasserstein of an empty vector");
    const double sa = detail::checked_sum(a);
    const double sb = detail::checked_sum(b);
    std::vector<double> ma(a.size()), mb(b.size()), pa(a.size() + 1, 0.0), pb(b.size() + 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma[i] = a[i] / sa;
        pa[i + 1] = pa[i] + ma[i];
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
        mb[j] = b[j] / sb;
        pb[j + 1] = pb[j] + mb[j];
    }
    const auto s = static_cast<std::int64_t>(a.size());
    const auto t = static_cast<std::int64_t>(b.size());

    double total = 0.0;
    double prev_x = 0.0;
    double prev_d = 0.0;
    std::int64_t i = 0;
    std::int64_t j = 0;
    while (i < s || j < t) {
        // next breakpoint: min(i+1)/s, (j+1)/t compared exactly
        std::int64_t num = 0;
        std::int64_t den = 1;
        const std::int64_t lhs = (i + 1) * t;
        const std::int64_t rhs = (j + 1) * s;
        if (lhs <= rhs) {
            num = i + 1;
            den = s;
        } else {
            num = j + 1;
            den = t;
        }
        if (lhs <= rhs) ++i;
        if (rhs <= lhs) ++j;
        const double x = static_cast<double>(num) / static_cast<double>(den);
        const double d = detail::step_cdf(pa, ma, num, den) - detail::step_cdf(pb, mb, num, den);
        const double dx = x - prev_x;
        if ((prev_d >= 0.0 && d >= 0.0) || (prev_d <= 0.0 && d <= 0.0)) {
            total += 0.5 * (std::abs(prev_d) + std::abs(d)) * dx;
        } else {
            const double p = std::abs(prev_d);
            const double q = std::abs(d);
            total += 0.5 * (p * p + q * q) / (p + q) * dx;
        }
        prev_x = x;
        prev_d = d;
    }
    return total;
}

// Earth mover's distance between equal-length probability vectors.
inline double emd_1d(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(ErrorKind::dimension, "emd needs equal dimensions, got " + std::to_string(a.size()) + " and " +
                                       std::to_string(b.size()));
    }
    double running = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        running += a[i] - b[i];
        total += std::abs(running);
    }
    return total;
}

// s columns, column i (1-based) is source column ceil(i*m/s).
inline std::vector<Column> stretch(const FrequencyMatrix& x, int s) {
    const int m = x.m();
    if (m <= 0 || s <= 0 || s % m != 0) {
        fail(ErrorKind::argument, "stretch target " + std::to_string(s) + " is not a multiple of " + std::to_string(m));
    }
    const int k = s / m;
    std::vector<Column> out;
    out.reserve(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) out.push_back(x.column(i / k));
    return out;
}

struct Flow {
    std::size_t from = 0;
    std::size_t to = 0;
    double mass = 0.0;
};

struct TransportPlan {
    // Filled by the assignment route.
    std::vector<std::size_t> assignment;
    // Filled by both routes; masses sum to 1.
    std::vector<Flow> flow;
};

struct TransportResult {
    double value = 0.0;
    TransportPlan plan;
};

inline std::vector<double> wasserstein_grid(std::span<const Column> x, std::span<const Column> y) {
    std::vector<double> cost(x.size() * y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) cost[i * y.size() + j] = wasserstein_1d(x[i], y[j]);
    }
    return cost;
}

// Minimum over column bijections of the average column Wasserstein distance.
inline TransportResult matrix_wasserstein(std::span<const Column> x, std::span<const Column> y) {
    if (x.size() != y.size()) {
        fail(ErrorKind::dimension, "column counts differ: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    }
    if (x.empty()) fail(ErrorKind::empty_input, "matrix wasserstein of zero columns");
    const std::size_t s = x.size();
    const auto cost = wasserstein_grid(x, y);
    auto lap = solve_assignment(cost, s);
    TransportResult result;
    double total = 0.0;
    for (std::size_t i = 0; i < s; ++i) total += cost[i * s + lap.row_to_col[i]];
    result.value = total / static_cast<double>(s);
    result.plan.assignment = lap.row_to_col;
    for (std::size_t i = 0; i < s; ++i) result.plan.flow.push_back({i, lap.row_to_col[i], 1.0 / static_cast<double>(s)});
    return result;
}

// Balanced transportation problem with integer supplies/demands solved by successive shortest paths
// (dense Dijkstra with potentials). cost is row-major rows x cols and must be nonnegative.
class TransportationSolver {
  public:
    struct Solution {
        double cost = 0.0;
        // row-major rows x cols integer flow
        std::vector<std::int64_t> flow;
    };

    Solution solve(const std::vector<double>& cost, std::size_t rows, std::size_t cols, std::int64_t supply_each,
                   std::int64_t demand_each) {
        if (cost.size() != rows * cols) fail(ErrorKind::dimension, "transportation cost grid has wrong size");
        if (static_cast<std::int64_t>(rows) * supply_each != static_cast<std::int64_t>(cols) * demand_each) {
            fail(ErrorKind::argument, "unbalanced transportation problem");
        }
        const double inf = std::numeric_limits<double>::infinity();
        // Node layout: 0 = source, 1..rows = rows, rows+1..rows+cols = cols, last = sink.
        const std::size_t nodes = rows + cols + 2;
        const std::size_t sink = nodes - 1;
        auto row_node = [](std::size_t i) { return 1 + i; };
        auto col_node = [rows](std::size_t j) { return 1 + rows + j; };

        Solution sol;
        sol.flow.assign(rows * cols, 0);
        supply_.assign(rows, supply_each);
        demand_.assign(cols, demand_each);
        potential_.assign(nodes, 0.0);
        std::int64_t remaining = static_cast<std::int64_t>(rows) * supply_each;

        while (remaining > 0) {
            dist_.assign(nodes, inf);
            parent_.assign(nodes, kNone);
            done_.assign(nodes, 0);
            dist_[0] = 0.0;
            for (;;) {
                std::size_t u = kNone;
                for (std::size_t v = 0; v < nodes; ++v) {
                    if (!done_[v] && dist_[v] < inf && (u == kNone || dist_[v] < dist_[u])) u = v;
                }
                if (u == kNone) break;
                done_[u] = 1;
                if (u == sink) continue;
                auto relax = [&](std::size_t v, double c) {
                    const double reduced = std::max(0.0, c + potential_[u] - potential_[v]);
                    if (dist_[u] + reduced < dist_[v]) {
                        dist_[v] = dist_[u] + reduced;
                        parent_[v] = u;
                    }
                };
                if (u == 0) {
                    for (std::size_t i = 0; i < rows; ++i) {
                        if (supply_[i] > 0) relax(row_node(i), 0.0);
                    }
                } else if (u <= rows) {
                    const std::size_t i = u - 1;
                    for (std::size_t j = 0; j < cols; ++j) relax(col_node(j), cost[i * cols + j]);
                } else {
                    const std::size_t j = u - 1 - rows;
                    for (std::size_t i = 0; i < rows; ++i) {
                        if (sol.flow[i * cols + j] > 0) relax(row_node(i), -cost[i * cols + j]);
                    }
                    if (demand_[j] > 0) relax(sink, 0.0);
                }
            }
            if (!(dist_[sink] < inf)) fail(ErrorKind::degenerate, "transportation problem has no augmenting path");
            const double cap = dist_[sink];
            for (std::size_t v = 0; v < nodes; ++v) potential_[v] += std::min(dist_[v], cap);

            // Bottleneck along the path sink <- col <- ... <- row <- source.
            std::int64_t push = remaining;
            for (std::size_t v = sink; v != 0; v = parent_[v]) {
                const std::size_t p = parent_[v];
                if (v == sink) {
                    push = std::min(push, demand_[p - 1 - rows]);
                } else if (p == 0) {
                    push = std::min(push, supply_[v - 1]);
                } else if (p > rows) {
                    push = std::min(push, sol.flow[(v - 1) * cols + (p - 1 - rows)]);
                }
            }
            for (std::size_t v = sink; v != 0; v = parent_[v]) {
                const std::size_t p = parent_[v];
                if (v == sink) {
                    demand_[p - 1 - rows] -= push;
                } else if (p == 0) {
                    supply_[v - 1] -= push;
                } else if (p <= rows) {
                    sol.flow[(p - 1) * cols + (v - 1 - rows)] += push;
                } else {
                    sol.flow[(v - 1) * cols + (p - 1 - rows)] -= push;
                }
            }
            remaining -= push;
        }
        double total = 0.0;
        for (std::size_t k = 0; k < rows * cols; ++k) total += static_cast<double>(sol.flow[k]) * cost[k];
        sol.cost = total;
        return sol;
    }

  private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::int64_t> supply_, demand_;
    std::vector<double> potential_, dist_;
    std::vector<std::size_t> parent_;
    std::vector<char> done_;
};

// d_W between the lcm-stretches of x and y, computed on the m1 x m2 block grid: a column of x
// appears s/m1 times and a column of y s/m2 times, so a stretched bijection is an integer flow.
inline TransportResult transport_wasserstein(const FrequencyMatrix& x, const FrequencyMatrix& y) {
    const auto m1 = static_cast<std::int64_t>(x.m());
    const auto m2 = static_cast<std::int64_t>(y.m());
    if (m1 <= 0 || m2 <= 0) fail(ErrorKind::empty_input, "transport between empty matrices");
    const std::int64_t s = std::lcm(m1, m2);
    const auto cx = x.columns();
    const auto cy = y.columns();
    const auto cost = wasserstein_grid(cx, cy);
    TransportationSolver solver;
    const auto sol = solver.solve(cost, static_cast<std::size_t>(m1), static_cast<std::size_t>(m2), s / m1, s / m2);
    TransportResult result;
    result.value = sol.cost / static_cast<double>(s);
    for (std::size_t i = 0; i < static_cast<std::size_t>(m1); ++i) {
        for (std::size_t j = 0; j < static_cast<std::size_t>(m2); ++j) {
            const auto f = sol.flow[i * static_cast<std::size_t>(m2) + j];
            if (f > 0) result.plan.flow.push_back({i, j, static_cast<double>(f) / static_cast<double>(s)});
        }
    }
    if (m1 == m2) {
        result.plan.assignment.assign(static_cast<std::size_t>(m1), 0);
        for (const auto& f : result.plan.flow) result.plan.assignment[f.from] = f.to;
    }
    return result;
}

}  // namespace elmap
