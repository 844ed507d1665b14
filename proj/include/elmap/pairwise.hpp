#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "elmap/dap.hpp"
#include "elmap/distances.hpp"
#include "elmap/election.hpp"
#include "elmap/error.hpp"

namespace elmap {

struct MetricSpec {
    Metric metric = Metric::pos_hat;
    SearchBudget budget;
    DeletionMode deletion;
    DapStrategy dap;
    // Feature metric: indicator features (id, an, un) under this norm.
    Norm norm = Norm::l2;
};

struct CellError {
    std::size_t i = 0;
    std::size_t j = 0;
    ErrorKind kind = ErrorKind::argument;
    std::string message;
};

namespace detail {

inline void run_parallel(std::size_t tasks, int workers, const std::function<void(std::size_t)>& body) {
    const auto count = static_cast<std::size_t>(std::max(1, workers));
    if (count == 1 || tasks < 2) {
        for (std::size_t t = 0; t < tasks; ++t) body(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(count, tasks); ++w) {
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < tasks; t = next++) body(t);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Per-election feature vectors for the feature-based metrics; empty optional for pair metrics.
inline std::vector<std::optional<std::array<double, 3>>> election_features(const std::vector<Election>& es, const MetricSpec& spec,
                                                                           int workers, std::vector<CellError>& errors) {
    std::vector<std::optional<std::array<double, 3>>> out(es.size());
    if (spec.metric != Metric::dap && spec.metric != Metric::feature) return out;
    std::mutex mu;
    detail::run_parallel(es.size(), workers, [&](std::size_t k) {
        try {
            out[k] = spec.metric == Metric::dap ? dap_vector(es[k], spec.dap).as_array() : indicator_features(es[k]).as_array();
        } catch (const Error& err) {
            std::lock_guard lock(mu);
            errors.push_back({k, k, err.kind(), err.what()});
        }
    });
    return out;
}

inline DistanceValue pair_distance(const Election& e, const Election& f, const MetricSpec& spec, std::uint64_t pair_seed = 0) {
    switch (spec.metric) {
        case Metric::swap: return iso_swap_distance(e, f, spec.budget);
        case Metric::pos: return positionwise_distance(e, f);
        case Metric::pos_hat: return positionwise_hat(e, f, spec.budget);
        case Metric::swap_tr: return swap_tr_hat(e, f, spec.budget);
        case Metric::swap_del: {
            DeletionMode mode = spec.deletion;
            mode.seed = derive_seed(spec.deletion.seed, pair_seed);
            return swap_del_hat(e, f, mode, spec.budget);
        }
        case Metric::dap: return dap_distance(e, f, spec.dap);
        case Metric::feature: {
            const auto a = indicator_features(e).as_array();
            const auto b = indicator_features(f).as_array();
            return feature_distance(a, b, spec.norm);
        }
    }
    fail(ErrorKind::argument, "unknown metric");
}

// Symmetric matrix over all pairs. Cells are independent, so the result does not depend on the
// worker count. Any failing cell aborts the run with a report of every failure.
inline DistanceMatrix pairwise_matrix(const std::vector<Election>& es, const MetricSpec& spec, int workers = 1) {
    std::vector<std::string> labels;
    labels.reserve(es.size());
    for (const auto& e : es) labels.push_back(e.label);
    DistanceMatrix out(labels, spec.metric);
    std::vector<CellError> errors;
    const auto features = election_features(es, spec, workers, errors);

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < es.size(); ++i) {
        for (std::size_t j = i + 1; j < es.size(); ++j) cells.emplace_back(i, j);
    }
    std::vector<double> values(cells.size(), 0.0);
    std::mutex mu;
    if (errors.empty()) {
        detail::run_parallel(cells.size(), workers, [&](std::size_t t) {
            const auto [i, j] = cells[t];
            try {
                if (features[i] && features[j]) {
                    values[t] = feature_distance(*features[i], *features[j], spec.metric == Metric::dap ? Norm::l2 : spec.norm).value;
                } else {
                    values[t] = pair_distance(es[i], es[j], spec, static_cast<std::uint64_t>(i) * es.size() + j).value;
                }
            } catch (const Error& err) {
                std::lock_guard lock(mu);
                errors.push_back({i, j, err.kind(), err.what()});
            }
        });
    }
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end(), [](const CellError& a, const CellError& b) {
            return std::tie(a.i, a.j) < std::tie(b.i, b.j);
        });
        std::string report = std::to_string(errors.size()) + " cell(s) failed under metric " + std::string(to_string(spec.metric));
        for (std::size_t k = 0; k < std::min<std::size_t>(errors.size(), 10); ++k) {
            const auto& ce = errors[k];
            report += "\n  (" + labels[ce.i] + ", " + labels[ce.j] + "): " + ce.message;
        }
        fail(errors.front().kind, report);
    }
    for (std::size_t t = 0; t < cells.size(); ++t) out.set(cells[t].first, cells[t].second, values[t]);
    return out;
}

}  // namespace elmap
