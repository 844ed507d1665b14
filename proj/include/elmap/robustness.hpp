#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "elmap/cultures.hpp"
#include "elmap/pairwise.hpp"

namespace elmap {

struct NamedCulture {
    std::string name;
    CultureSpec base;
};

inline std::vector<NamedCulture> default_robustness_cultures() {
    auto make = [](std::string name, CultureKind k) {
        NamedCulture c;
        c.name = std::move(name);
        c.base.kind = k;
        return c;
    };
    std::vector<NamedCulture> out;
    out.push_back(make("IC", CultureKind::ic));
    for (double phi : {0.25, 0.5, 0.75}) {
        auto c = make("Mallows-" + std::to_string(phi).substr(0, 4), CultureKind::mallows);
        c.base.norm_phi = phi;
        out.push_back(c);
    }
    for (int dim : {1, 2, 5}) {
        auto c = make(std::to_string(dim) + "D-Cube", CultureKind::euclidean);
        c.base.dim = dim;
        out.push_back(c);
    }
    out.push_back(make("ID", CultureKind::id));
    out.push_back(make("AN", CultureKind::an));
    return out;
}

struct CurvePoint {
    std::string culture;
    double x = 0.0;
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int samples = 0;
};

inline CurvePoint summarize(const std::string& culture, double x, const std::vector<double>& v) {
    CurvePoint p;
    p.culture = culture;
    p.x = x;
    p.samples = static_cast<int>(v.size());
    if (v.empty()) return p;
    double sum = 0.0;
    for (double d : v) sum += d;
    p.mean = sum / static_cast<double>(v.size());
    double var = 0.0;
    for (double d : v) var += (d - p.mean) * (d - p.mean);
    const double sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    const double half = 1.96 * sd / std::sqrt(static_cast<double>(v.size()));
    p.ci_low = p.mean - half;
    p.ci_high = p.mean + half;
    return p;
}

// Largest distance among the elections of a recipe, used as the unit of the robustness curves.
inline double reference_diameter(Recipe recipe, const MetricSpec& spec, std::uint64_t seed, int workers = 1) {
    std::vector<Election> es;
    for (auto& entry : build_dataset(recipe, seed)) es.push_back(std::move(entry.election));
    const double d = pairwise_matrix(es, spec, workers).max_entry();
    if (!(d > 0.0)) fail(ErrorKind::degenerate, "reference dataset has zero diameter");
    return d;
}

struct SizeExperiment {
    std::vector<NamedCulture> cultures = default_robustness_cultures();
    std::vector<int> m_values{8, 9, 10, 11, 12, 13, 14, 15, 16};
    int base_m = 16;
    int n = 192;
    int samples = 25;
    std::uint64_t seed = 0;
};

// Distance between an m-candidate and a base_m-candidate election of the same culture, averaged
// over samples and divided by `diameter`.
inline std::vector<CurvePoint> size_curves(const SizeExperiment& ex, const MetricSpec& spec, double diameter, int workers = 1) {
    std::vector<CurvePoint> out;
    for (const auto& c : ex.cultures) {
        for (int m : ex.m_values) {
            std::vector<double> v(static_cast<std::size_t>(ex.samples), 0.0);
            detail::run_parallel(v.size(), workers, [&](std::size_t s) {
                const auto key = derive_seed(ex.seed, c.name + "/" + std::to_string(m) + "/" + std::to_string(s));
                CultureSpec a = c.base;
                a.m = m;
                a.n = ex.n;
                a.seed = derive_seed(key, "a");
                CultureSpec b = c.base;
                b.m = ex.base_m;
                b.n = ex.n;
                b.seed = derive_seed(key, "b");
                MetricSpec local = spec;
                local.dap.emk.seed = derive_seed(spec.dap.emk.seed, key);
                v[s] = pair_distance(sample_election(a), sample_election(b), local, key).value / diameter;
            });
            out.push_back(summarize(c.name, m, v));
        }
    }
    return out;
}

struct TruncationExperiment {
    std::vector<NamedCulture> cultures = default_robustness_cultures();
    int m = 16;
    int n = 192;
    int samples = 25;
    TruncationSpec::Method method = TruncationSpec::Method::top_k;
    // k values for top_k, p values otherwise.
    std::vector<double> levels{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    std::uint64_t seed = 0;
};

// Distance from a complete election to its truncation, averaged over samples, divided by `diameter`.
inline std::vector<CurvePoint> truncation_curves(const TruncationExperiment& ex, const MetricSpec& spec, double diameter, int workers = 1) {
    std::vector<CurvePoint> out;
    for (const auto& c : ex.cultures) {
        for (double level : ex.levels) {
            std::vector<double> v(static_cast<std::size_t>(ex.samples), 0.0);
            detail::run_parallel(v.size(), workers, [&](std::size_t s) {
                const auto key = derive_seed(ex.seed, c.name + "/" + std::to_string(s));
                CultureSpec a = c.base;
                a.m = ex.m;
                a.n = ex.n;
                a.seed = key;
                const auto full = sample_election(a);
                TruncationSpec t;
                t.method = ex.method;
                t.k = static_cast<int>(std::lround(level));
                t.p = level;
                t.seed = derive_seed(key, "truncate");
                MetricSpec local = spec;
                local.dap.emk.seed = derive_seed(spec.dap.emk.seed, key);
                v[s] = pair_distance(full, truncate(full, t), local, key).value / diameter;
            });
            out.push_back(summarize(c.name, level, v));
        }
    }
    return out;
}

inline void write_curves_csv(std::ostream& os, const std::vector<CurvePoint>& pts, const std::string& x_name = "x") {
    os << "culture," << x_name << ",mean,ci95_low,ci95_high,samples\n";
    const auto prec = os.precision();
    os << std::setprecision(12);
    for (const auto& p : pts) os << p.culture << ',' << p.x << ',' << p.mean << ',' << p.ci_low << ',' << p.ci_high << ',' << p.samples << '\n';
    os.precision(prec);
}

}  // namespace elmap
