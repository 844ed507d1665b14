#pragma once

#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

#include "elmap/error.hpp"

namespace elmap {

template <typename Cost>
struct AssignmentResult {
    Cost cost{};
    // row_to_col[i] = column assigned to row i
    std::vector<std::size_t> row_to_col;
};

// Dense square assignment by shortest augmenting paths with dual potentials, O(n^3).
// Rows are inserted in index order and columns scanned in index order with strict comparisons,
// so among equal-cost optima the lowest-index columns win deterministically.
template <typename Cost>
class AssignmentSolver {
    static_assert(std::is_arithmetic_v<Cost>);

  public:
    // cost is row-major n x n.
    AssignmentResult<Cost> solve(const std::vector<Cost>& cost, std::size_t n) {
        if (cost.size() != n * n) fail(ErrorKind::dimension, "assignment cost matrix is not n x n");
        AssignmentResult<Cost> result;
        result.row_to_col.assign(n, 0);
        if (n == 0) return result;

        const Cost inf = std::numeric_limits<Cost>::has_infinity ? std::numeric_limits<Cost>::infinity()
                                                                 : std::numeric_limits<Cost>::max() / 4;
        // 1-based arrays with a virtual column 0, following the classical formulation.
        u_.assign(n + 1, Cost{});
        v_.assign(n + 1, Cost{});
        col_owner_.assign(n + 1, 0);
        way_.assign(n + 1, 0);
        for (std::size_t i = 1; i <= n; ++i) {
            col_owner_[0] = i;
            std::size_t j0 = 0;
            minv_.assign(n + 1, inf);
            used_.assign(n + 1, 0);
            do {
                used_[j0] = 1;
                const std::size_t i0 = col_owner_[j0];
                Cost delta = inf;
                std::size_t j1 = 0;
                for (std::size_t j = 1; j <= n; ++j) {
                    if (used_[j]) continue;
                    const Cost cur = cost[(i0 - 1) * n + (j - 1)] - u_[i0] - v_[j];
                    if (cur < minv_[j]) {
                        minv_[j] = cur;
                        way_[j] = j0;
                    }
                    if (minv_[j] < delta) {
                        delta = minv_[j];
                        j1 = j;
                    }
                }
                for (std::size_t j = 0; j <= n; ++j) {
                    if (used_[j]) {
                        u_[col_owner_[j]] += delta;
                        v_[j] -= delta;
                    } else {
                        minv_[j] -= delta;
                    }
                }
                j0 = j1;
            } while (col_owner_[j0] != 0);
            do {
                const std::size_t j1 = way_[j0];
                col_owner_[j0] = col_owner_[j1];
                j0 = j1;
            } while (j0 != 0);
        }
        Cost total{};
        for (std::size_t j = 1; j <= n; ++j) {
            result.row_to_col[col_owner_[j] - 1] = j - 1;
        }
        for (std::size_t i = 0; i < n; ++i) total += cost[i * n + result.row_to_col[i]];
        result.cost = total;
        return result;
    }

  private:
    std::vector<Cost> u_, v_, minv_;
    std::vector<std::size_t> col_owner_, way_;
    std::vector<char> used_;
};

template <typename Cost>
AssignmentResult<Cost> solve_assignment(const std::vector<Cost>& cost, std::size_t n) {
    AssignmentSolver<Cost> solver;
    return solver.solve(cost, n);
}

}  // namespace elmap
