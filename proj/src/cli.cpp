#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elmap/elmap.hpp"

namespace elmap::cli {
namespace {

namespace fs = std::filesystem;

void log(const std::string& msg) { std::clog << "[elmap] " << msg << '\n'; }

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::capability: return 3;
        case ErrorKind::argument: return 1;
        default: return 2;
    }
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_out(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "cannot open " + path);
    return in;
}

bool is_preflib_file(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".soc" || ext == ".soi";
}

// Elections from files and directories (all .soc/.soi files, sorted by name); labels are file stems.
std::vector<Election> read_inputs(const std::vector<std::string>& paths) {
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        std::error_code ec;
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && is_preflib_file(entry.path())) found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::exists(p, ec)) {
            files.emplace_back(p);
        } else {
            fail(ErrorKind::io, "no such file or directory: " + p);
        }
    }
    std::vector<Election> out;
    std::set<std::string> seen;
    for (const auto& f : files) {
        auto [header, e] = read_preflib_file(f);
        for (const auto& w : header.warnings) log(f.filename().string() + ": " + w);
        e.label = f.stem().string();
        if (!seen.insert(e.label).second) fail(ErrorKind::parse, "duplicate election label '" + e.label + "'");
        out.push_back(std::move(e));
    }
    if (out.empty()) fail(ErrorKind::empty_input, "no .soc/.soi elections found");
    return out;
}

// ---------------------------------------------------------------------------
// Config file support: `key = value` lines name long options of the chosen command.
// Values from the file are appended to the command line unless the flag is already present.
// ---------------------------------------------------------------------------

bool option_given(const CLI::Option* opt, const std::vector<std::string>& args, std::size_t from) {
    for (std::size_t i = from; i < args.size(); ++i) {
        const auto& a = args[i];
        for (const auto& l : opt->get_lnames()) {
            if (a == "--" + l || a.rfind("--" + l + "=", 0) == 0) return true;
        }
        for (const auto& s : opt->get_snames()) {
            if (a == "-" + s || (a.size() > 2 && a.rfind("-" + s, 0) == 0 && a[1] != '-')) return true;
        }
    }
    return false;
}

std::vector<std::string> merge_config(CLI::App& app, std::vector<std::string> args) {
    std::size_t sub_at = 0;
    CLI::App* sub = nullptr;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i].empty() || args[i][0] == '-') continue;
        sub = app.get_subcommand_no_throw(args[i]);
        sub_at = i;
        break;
    }
    if (!sub) return args;
    std::optional<std::string> path;
    for (std::size_t i = sub_at + 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path) return args;
    const auto cfg = ExperimentConfig::load(*path);
    for (const auto& [key, value] : cfg.entries()) {
        if (key == "config" || key == "save-config") continue;
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (!opt) throw UsageError("config key '" + key + "' is not an option of '" + sub->get_name() + "'");
        if (option_given(opt, args, sub_at + 1)) continue;
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1" || value == "yes") args.push_back("--" + key);
            else if (value != "false" && value != "0" && value != "no") throw UsageError("config key '" + key + "' expects true or false");
        } else {
            args.push_back("--" + key);
            args.push_back(value);
        }
    }
    return args;
}

void save_config(const CLI::App& sub, const std::string& path) {
    ExperimentConfig cfg;
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->count() == 0 || opt->get_lnames().empty()) continue;
        const auto& name = opt->get_lnames().front();
        if (name == "help" || name == "config" || name == "save-config") continue;
        if (opt->get_expected_min() == 0) {
            cfg.set(name, "true");
            continue;
        }
        std::string joined;
        for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
        cfg.set(name, joined);
    }
    auto out = open_out(path);
    cfg.write(out);
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

struct MetricOptions {
    std::string metric = "pos-hat";
    int max_exact_m = SearchBudget{}.max_exact_m;
    std::int64_t max_subsets = SearchBudget{}.max_subsets;
    std::string deletion = "exact";
    std::int64_t deletion_samples = DeletionMode{}.samples;
    std::string emk = "auto";
    int restarts = EmkStrategy{}.restarts;
    bool subsample = false;
    std::string norm = "l2";

    void add(CLI::App* c) {
        c->add_option("--metric", metric, "swap, pos, pos-hat, swap-tr, swap-del, dap or feature")->capture_default_str();
        c->add_option("--max-exact-m", max_exact_m, "largest m for the exact isomorphic swap search")->capture_default_str();
        c->add_option("--max-subsets", max_subsets, "largest number of deletion subsets enumerated exactly")->capture_default_str();
        c->add_option("--deletion", deletion, "deletion averaging: exact or monte-carlo")->capture_default_str();
        c->add_option("--deletion-samples", deletion_samples, "Monte Carlo deletion samples")->capture_default_str();
        c->add_option("--emk", emk, "empirical Kemeny search: auto, exact or local")->capture_default_str();
        c->add_option("--restarts", restarts, "local search restarts")->capture_default_str();
        c->add_flag("--subsample", subsample, "estimate DAP on 20 subsamples of 500 votes");
        c->add_option("--norm", norm, "feature metric norm: l1 or l2")->capture_default_str();
    }

    bool randomized() const {
        const auto m = parse_metric(metric);
        return m == Metric::dap || m == Metric::swap_del;
    }

    DapStrategy dap(std::uint64_t seed) const {
        DapStrategy s;
        if (emk == "auto") s.emk.kind = EmkStrategy::Kind::automatic;
        else if (emk == "exact") s.emk.kind = EmkStrategy::Kind::exact;
        else if (emk == "local") s.emk.kind = EmkStrategy::Kind::local_search;
        else throw UsageError("--emk must be auto, exact or local");
        s.emk.restarts = restarts;
        s.emk.seed = derive_seed(seed, "emk");
        s.subsample.enabled = subsample;
        return s;
    }

    MetricSpec spec(std::uint64_t seed) const {
        MetricSpec s;
        s.metric = parse_metric(metric);
        s.budget.max_exact_m = max_exact_m;
        s.budget.max_subsets = max_subsets;
        if (deletion == "exact") s.deletion.kind = DeletionMode::Kind::exact;
        else if (deletion == "monte-carlo") s.deletion.kind = DeletionMode::Kind::monte_carlo;
        else throw UsageError("--deletion must be exact or monte-carlo");
        s.deletion.samples = deletion_samples;
        s.deletion.seed = derive_seed(seed, "deletion");
        s.dap = dap(seed);
        if (norm == "l1") s.norm = Norm::l1;
        else if (norm == "l2") s.norm = Norm::l2;
        else throw UsageError("--norm must be l1 or l2");
        return s;
    }
};

struct Common {
    std::string config;
    std::string save_config;
    std::optional<std::uint64_t> seed;
    int workers = 1;

    void add(CLI::App* c, bool with_seed, bool seed_required) {
        c->add_option("--config", config, "key = value settings file; flags override it");
        c->add_option("--save-config", save_config, "write the effective settings to this file");
        if (with_seed) {
            auto* o = c->add_option("--seed", seed, "global seed");
            if (seed_required) o->required();
        }
        c->add_option("--workers", workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    }
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

std::string style_color(std::size_t family_index) {
    static const std::vector<std::string> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
                                                  "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39",
                                                  "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363"};
    return palette[family_index % palette.size()];
}

Marker truncation_marker(const std::string& truncation) {
    if (truncation == "top_k") return Marker::triangle;
    if (truncation == "random_cut") return Marker::cross;
    if (truncation == "random_drop") return Marker::star;
    return Marker::circle;
}

struct GenerateCmd {
    Common common;
    std::string recipe;
    std::string culture;
    int m = 8;
    int n = 96;
    double norm_phi = 0.5;
    double alpha = 0.0;
    int dim = 2;
    std::string shape = "cube";
    std::string tree = "balanced";
    std::string truncation;
    int k = 1;
    double p = 0.5;
    std::string label;
    std::string out = ".";
    std::string style;

    CLI::App* add(CLI::App& app) {
        auto* c = app.add_subcommand("generate", "sample elections into Preflib files plus manifest.csv");
        common.add(c, true, true);
        c->add_option("--recipe", recipe, "basic, size_oriented, truncation_oriented, comprehensive or random_drop");
        c->add_option("--culture", culture, "single culture: ic, mallows, urn, euclidean, sp_conitzer, sp_walsh, spoc, gs, id, an, un_exact, un_approx, st");
        c->add_option("--m", m, "candidates")->capture_default_str();
        c->add_option("--n", n, "voters")->capture_default_str();
        c->add_option("--norm-phi", norm_phi, "Mallows dispersion in [0,1]")->capture_default_str();
        c->add_option("--alpha", alpha, "urn contagion")->capture_default_str();
        c->add_option("--dim", dim, "Euclidean dimension")->capture_default_str();
        c->add_option("--shape", shape, "Euclidean shape: cube or sphere")->capture_default_str();
        c->add_option("--tree", tree, "group-separable tree: balanced or caterpillar")->capture_default_str();
        c->add_option("--truncate", truncation, "truncate the single election: top_k, random_cut or random_drop");
        c->add_option("--k", k, "top-k length")->capture_default_str();
        c->add_option("--p", p, "random cut / drop parameter")->capture_default_str();
        c->add_option("--label", label, "label of the single election (default: culture name)");
        c->add_option("-o,--out", out, "output directory")->capture_default_str();
        c->add_option("--style", style, "also write a style CSV for `render`");
        return c;
    }

    int run(const CLI::App& sub) {
        if (recipe.empty() == culture.empty()) throw UsageError("give exactly one of --recipe and --culture");
        const std::uint64_t seed = *common.seed;
        std::vector<DatasetEntry> entries;
        if (!recipe.empty()) {
            entries = build_dataset(parse_recipe(recipe), seed);
        } else {
            CultureSpec s;
            s.kind = parse_culture(culture);
            s.m = m;
            s.n = n;
            s.seed = seed;
            s.norm_phi = norm_phi;
            s.alpha = alpha;
            s.dim = dim;
            if (shape == "cube") s.shape = Shape::cube;
            else if (shape == "sphere") s.shape = Shape::sphere;
            else throw UsageError("--shape must be cube or sphere");
            if (tree == "balanced") s.tree = Tree::balanced;
            else if (tree == "caterpillar") s.tree = Tree::caterpillar;
            else throw UsageError("--tree must be balanced or caterpillar");
            const auto problems = validate_spec(s);
            if (!problems.empty()) throw UsageError("invalid culture spec: " + problems.front());
            DatasetEntry entry;
            entry.election = sample_election(s);
            entry.election.label = label.empty() ? std::string(to_string(s.kind)) : label;
            entry.family = entry.election.label;
            entry.spec = s;
            if (!truncation.empty()) {
                TruncationSpec t;
                if (truncation == "top_k") t.method = TruncationSpec::Method::top_k;
                else if (truncation == "random_cut") t.method = TruncationSpec::Method::random_cut;
                else if (truncation == "random_drop") t.method = TruncationSpec::Method::random_drop;
                else throw UsageError("--truncate must be top_k, random_cut or random_drop");
                t.k = k;
                t.p = p;
                t.seed = derive_seed(seed, "truncate");
                const auto keep = entry.election.label;
                entry.election = elmap::truncate(entry.election, t);
                entry.election.label = keep;
                entry.truncation = truncation;
            }
            entries.push_back(std::move(entry));
        }

        std::error_code ec;
        fs::create_directories(out, ec);
        auto manifest = open_out((fs::path(out) / "manifest.csv").string());
        manifest << "label,culture,params,m,n\n";
        std::vector<std::pair<std::string, PointStyle>> styles;
        std::map<std::string, std::size_t> family_index;
        for (const auto& entry : entries) {
            const auto& e = entry.election;
            const auto file = fs::path(out) / (e.label + (e.complete() ? ".soc" : ".soi"));
            auto f = open_out(file.string());
            PreflibHeader h;
            h.file_name = file.filename().string();
            h.title = e.label;
            write_preflib(f, e, h);
            std::string params = entry.spec.params();
            if (entry.truncation != "none") params += std::string(params.empty() ? "" : ";") + "truncation=" + entry.truncation;
            manifest << e.label << ',' << to_string(entry.spec.kind) << ',' << params << ',' << e.m << ',' << e.votes.size() << '\n';
            const auto idx = family_index.emplace(entry.family, family_index.size()).first->second;
            PointStyle st;
            st.color = style_color(idx);
            st.marker = truncation_marker(entry.truncation);
            st.group = entry.family + (entry.truncation == "none" ? "" : " (" + entry.truncation + ")");
            styles.emplace_back(e.label, st);
        }
        if (!style.empty()) {
            auto s = open_out(style);
            write_style_csv(s, styles);
        }
        log("generate: wrote " + std::to_string(entries.size()) + " election(s) to " + out);
        if (!common.save_config.empty()) save_config(sub, common.save_config);
        return 0;
    }
};

struct MatrixCmd {
    Common common;
    MetricOptions metric;
    std::vector<std::string> inputs;
    std::string out;
    bool normalize = false;

    CLI::App* add(CLI::App& app) {
        auto* c = app.add_subcommand("matrix", "pairwise distance matrix of Preflib elections");
        common.add(c, true, false);
        metric.add(c);
        c->add_option("--in", inputs, "input files or directories")->required()->delimiter(',');
        c->add_option("-o,--out", out, "output CSV")->required();
        c->add_flag("--normalize", normalize, "divide by the largest entry");
        return c;
    }

    int run(const CLI::App& sub) {
        if (metric.randomized() && !common.seed) throw UsageError("--seed is required for metric " + metric.metric);
        const auto spec = metric.spec(common.seed.value_or(0));
        const auto es = read_inputs(inputs);
        log("matrix: " + std::to_string(es.size()) + " elections, metric " + std::string(to_string(spec.metric)) + ", " +
            std::to_string(common.workers) + " worker(s)");
        const auto t0 = std::chrono::steady_clock::now();
        auto d = pairwise_matrix(es, spec, common.workers);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::ostringstream ts;
        ts << std::fixed << std::setprecision(3) << dt.count();
        log("matrix: " + std::to_string(es.size() * (es.size() - 1) / 2) + " pairs in " + ts.str() + " s");
        if (normalize) d = normalize_matrix(d);
        auto f = open_out(out);
        d.write_csv(f);
        if (!common.save_config.empty()) save_config(sub, common.save_config);
        return 0;
    }
};

struct DapReportCmd {
    Common common;
    MetricOptions metric;
    std::vector<std::string> inputs;
    std::size_t max_files = ScanOptions{}.max_files_per_dataset;
    std::string out;
    bool keep_going = false;

    CLI::App* add(CLI::App& app) {
        auto* c = app.add_subcommand("dap-report", "diversity, agreement and polarization of Preflib elections");
        common.add(c, true, true);
        metric.add(c);
        c->add_option("--in", inputs, "input files or dataset directories")->required()->delimiter(',');
        c->add_option("--max-files", max_files, "files sampled per dataset in a directory")->capture_default_str();
        c->add_option("-o,--out", out, "output CSV")->required();
        c->add_flag("--keep-going", keep_going, "report unreadable files but exit 0");
        return c;
    }

    int run(const CLI::App& sub) {
        const auto strategy = metric.dap(*common.seed);
        std::vector<Election> es;
        std::vector<std::pair<std::string, std::string>> errors;
        for (const auto& in : inputs) {
            std::error_code ec;
            if (fs::is_directory(in, ec)) {
                ScanOptions opt;
                opt.max_files_per_dataset = max_files;
                opt.seed = derive_seed(*common.seed, "scan");
                auto scan = scan_dataset_dir(in, opt);
                for (const auto& w : scan.warnings) log(w);
                for (auto& s : scan.elections) es.push_back(std::move(s.election));
                errors.insert(errors.end(), scan.errors.begin(), scan.errors.end());
            } else {
                try {
                    auto one = read_inputs({in});
                    es.push_back(std::move(one.front()));
                } catch (const Error& err) {
                    errors.emplace_back(in, err.what());
                }
            }
        }
        for (const auto& [file, msg] : errors) log(file + ": " + msg);
        std::vector<DapReportRow> rows(es.size());
        detail::run_parallel(es.size(), common.workers, [&](std::size_t k) { rows[k] = dap_report_row(es[k], strategy); });
        auto f = open_out(out);
        write_dap_report(f, rows);
        log("dap-report: " + std::to_string(rows.size()) + " election(s), " + std::to_string(errors.size()) + " unreadable");
        if (!common.save_config.empty()) save_config(sub, common.save_config);
        if (!errors.empty() && !keep_going) return 2;
        if (rows.empty()) fail(ErrorKind::empty_input, "no elections to report");
        return 0;
    }
};

struct EmbedCmd {
    Common common;
    std::string input;
    std::string algo = "mds";
    int max_iter = 0;
    int restarts = EmbedConfig{}.restarts;
    double tol = EmbedConfig{}.tol;
    bool normalize = false;
    std::string out;
    std::string svg;
    std::string style;
    std::string title;

    CLI::App* add(CLI::App& app) {
        auto* c = app.add_subcommand("embed", "2D embedding of a distance matrix");
        common.add(c, true, true);
        c->add_option("--in", input, "distance matrix CSV")->required();
        c->add_option("--algo", algo, "mds or kk")->capture_default_str();
        c->add_option("--max-iter", max_iter, "iteration cap (0: algorithm default)")->capture_default_str();
        c->add_option("--restarts", restarts, "random restarts")->capture_default_str();
        c->add_option("--tol", tol, "relative convergence tolerance")->capture_default_str();
        c->add_flag("--normalize", normalize, "divide distances by the largest entry first");
        c->add_option("-o,--out", out, "coordinates CSV")->required();
        c->add_option("--svg", svg, "also render an SVG map");
        c->add_option("--style", style, "style CSV for --svg");
        c->add_option("--title", title, "SVG title");
        return c;
    }

    int run(const CLI::App& sub) {
        auto in = open_in(input);
        auto d = DistanceMatrix::read_csv(in);
        if (normalize) d = normalize_matrix(d);
        EmbedConfig cfg;
        cfg.max_iter = max_iter;
        cfg.restarts = restarts;
        cfg.tol = tol;
        cfg.seed = derive_seed(*common.seed, "embed");
        const auto algorithm = parse_embedder(algo);
        const auto result = embed(d, algorithm, cfg);
        std::ostringstream msg;
        msg << std::setprecision(12) << "embed: " << to_string(algorithm) << " final_stress " << result.final_stress << " after "
            << result.iterations_used << " iteration(s); normalized stress " << normalized_stress(d, result.points);
        log(msg.str());
        auto f = open_out(out);
        write_coordinates_csv(f, result);
        if (!svg.empty()) {
            std::optional<StyleMap> styles;
            if (!style.empty()) {
                auto s = open_in(style);
                styles = read_style_csv(s);
            }
            SvgOptions opt;
            opt.title = title;
            auto g = open_out(svg);
            render_svg(g, result.labels, result.points, styles ? &*styles : nullptr, opt);
        }
        if (!common.save_config.empty()) save_config(sub, common.save_config);
        return 0;
    }
};

struct RenderCmd {
    Common common;
    std::string coords;
    std::string style;
    std::string out;
    std::string title;
    double width = SvgOptions{}.width;
    double height = SvgOptions{}.height;

    CLI::App* add(CLI::App& app) {
        auto* c = app.add_subcommand("render", "SVG scatter plot of embedding coordinates");
        common.add(c, false, false);
        c->add_option("--coords", coords, "coordinates CSV (label,x,y)")->required();
        c->add_option("--style", style, "style CSV (label,color,marker,size[,group]); default black circles");
        c->add_option("-o,--out", out, "output SVG")->required();
        c->add_option("--title", title, "title text");
        c->add_option("--width", width, "plot width")->capture_default_str();
        c->add_option("--height", height, "plot height")->capture_default_str();
        return c;
    }

    int run(const CLI::App& sub) {
        auto in = open_in(coords);
        const auto rows = read_coordinates_csv(in);
        std::vector<std::string> labels;
        std::vector<Point2> points;
        for (const auto& [l, p] : rows) {
            labels.push_back(l);
            points.push_back(p);
        }
        std::optional<StyleMap> styles;
        if (!style.empty()) {
            auto s = open_in(style);
            styles = read_style_csv(s);
            const auto mismatch = style_mismatch(labels, *styles);
            if (!mismatch.empty()) fail(ErrorKind::parse, "style does not match coordinates: " + mismatch);
        }
        SvgOptions opt;
        opt.title = title;
        opt.width = width;
        opt.height = height;
        auto f = open_out(out);
        render_svg(f, labels, points, styles ? &*styles : nullptr, opt);
        if (!common.save_config.empty()) save_config(sub, common.save_config);
        return 0;
    }
};

struct RobustnessCmd {
    Common common;
    MetricOptions metric;
    std::string experiment = "size";
    std::vector<std::string> cultures;
    std::vector<int> m_values;
    int base_m = SizeExperiment{}.base_m;
    int m = TruncationExperiment{}.m;
    int n = SizeExperiment{}.n;
    int samples = SizeExperiment{}.samples;
    std::string method = "top_k";
    std::vector<double> levels;
    std::string reference = "truncation_oriented";
    double diameter = 0.0;
    std::string out;

    CLI::App* add(CLI::App& app) {
        auto* c = app.add_subcommand("robustness", "size and truncation robustness curves");
        common.add(c, true, true);
        metric.add(c);
        c->add_option("--experiment", experiment, "size or truncation")->capture_default_str();
        c->add_option("--cultures", cultures, "subset of IC, Mallows-0.25, Mallows-0.50, Mallows-0.75, 1D-Cube, 2D-Cube, 5D-Cube, ID, AN")
            ->delimiter(',');
        c->add_option("--m-values", m_values, "candidate counts of the size experiment (default 8..16)")->delimiter(',');
        c->add_option("--base-m", base_m, "candidate count compared against in the size experiment")->capture_default_str();
        c->add_option("--m", m, "candidate count of the truncation experiment")->capture_default_str();
        c->add_option("--n", n, "voters")->capture_default_str();
        c->add_option("--samples", samples, "samples per point")->capture_default_str();
        c->add_option("--method", method, "truncation method: top_k, random_cut or random_drop")->capture_default_str();
        c->add_option("--levels", levels, "k values (top_k) or p values; default 1..m or 0.1..0.9")->delimiter(',');
        c->add_option("--reference", reference, "dataset recipe whose diameter normalizes the curves")->capture_default_str();
        c->add_option("--diameter", diameter, "fixed normalizing diameter (skips the reference dataset)");
        c->add_option("-o,--out", out, "output CSV")->required();
        return c;
    }

    std::vector<NamedCulture> chosen() const {
        auto all = default_robustness_cultures();
        if (cultures.empty()) return all;
        std::vector<NamedCulture> out;
        for (const auto& name : cultures) {
            auto it = std::find_if(all.begin(), all.end(), [&](const NamedCulture& c) { return c.name == name; });
            if (it == all.end()) throw UsageError("unknown robustness culture '" + name + "'");
            out.push_back(*it);
        }
        return out;
    }

    int run(const CLI::App& sub) {
        const std::uint64_t seed = *common.seed;
        const auto spec = metric.spec(seed);
        double diam = diameter;
        if (!(diam > 0.0)) {
            const auto t0 = std::chrono::steady_clock::now();
            diam = reference_diameter(parse_recipe(reference), spec, derive_seed(seed, "reference"), common.workers);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            std::ostringstream msg;
            msg << std::setprecision(12) << "robustness: reference diameter " << diam << " (" << reference << ", " << std::fixed
                << std::setprecision(3) << dt.count() << " s)";
            log(msg.str());
        }
        std::vector<CurvePoint> pts;
        std::string x_name;
        if (experiment == "size") {
            SizeExperiment ex;
            ex.cultures = chosen();
            if (!m_values.empty()) ex.m_values = m_values;
            ex.base_m = base_m;
            ex.n = n;
            ex.samples = samples;
            ex.seed = seed;
            pts = size_curves(ex, spec, diam, common.workers);
            x_name = "m";
        } else if (experiment == "truncation") {
            TruncationExperiment ex;
            ex.cultures = chosen();
            ex.m = m;
            ex.n = n;
            ex.samples = samples;
            ex.seed = seed;
            if (method == "top_k") ex.method = TruncationSpec::Method::top_k;
            else if (method == "random_cut") ex.method = TruncationSpec::Method::random_cut;
            else if (method == "random_drop") ex.method = TruncationSpec::Method::random_drop;
            else throw UsageError("--method must be top_k, random_cut or random_drop");
            if (!levels.empty()) {
                ex.levels = levels;
            } else if (ex.method == TruncationSpec::Method::top_k) {
                ex.levels.clear();
                for (int k = 1; k <= m; ++k) ex.levels.push_back(k);
            } else {
                ex.levels = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
            }
            pts = truncation_curves(ex, spec, diam, common.workers);
            x_name = ex.method == TruncationSpec::Method::top_k ? "k" : "p";
        } else {
            throw UsageError("--experiment must be size or truncation");
        }
        auto f = open_out(out);
        write_curves_csv(f, pts, x_name);
        log("robustness: wrote " + std::to_string(pts.size()) + " curve points");
        if (!common.save_config.empty()) save_config(sub, common.save_config);
        return 0;
    }
};

struct ValidateCmd {
    Common common;
    std::vector<std::string> inputs;

    CLI::App* add(CLI::App& app) {
        auto* c = app.add_subcommand("validate", "check that Preflib files parse into valid elections");
        common.add(c, false, false);
        c->add_option("--in", inputs, "files or directories")->required()->delimiter(',');
        return c;
    }

    int run(const CLI::App& sub) {
        std::vector<fs::path> files;
        for (const auto& p : inputs) {
            std::error_code ec;
            if (fs::is_directory(p, ec)) {
                std::vector<fs::path> found;
                for (const auto& entry : fs::directory_iterator(p)) {
                    if (entry.is_regular_file() && is_preflib_file(entry.path())) found.push_back(entry.path());
                }
                std::sort(found.begin(), found.end());
                files.insert(files.end(), found.begin(), found.end());
            } else {
                files.emplace_back(p);
            }
        }
        int worst = 0;
        for (const auto& f : files) {
            try {
                auto [h, e] = read_preflib_file(f);
                const auto problems = validate_election(e);
                if (!problems.empty()) fail(ErrorKind::parse, problems.front().rule + ", " + problems.front().detail);
                for (const auto& w : h.warnings) log(f.string() + ": warning: " + w);
                std::cout << f.string() << ": ok m=" << e.m << " n=" << e.votes.size() << (e.complete() ? " complete" : " truncated") << '\n';
            } catch (const Error& err) {
                std::cout << f.string() << ": " << err.what() << '\n';
                worst = std::max(worst, exit_code(err.kind()) == 1 ? 2 : exit_code(err.kind()));
            }
        }
        if (files.empty()) fail(ErrorKind::empty_input, "no files to validate");
        if (!common.save_config.empty()) save_config(sub, common.save_config);
        return worst;
    }
};

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Maps of ordinal elections of different sizes", "elmap"};
    app.require_subcommand(1);
    GenerateCmd generate;
    MatrixCmd matrix;
    DapReportCmd dap_report;
    EmbedCmd embed_cmd;
    RenderCmd render;
    RobustnessCmd robustness;
    ValidateCmd validate;
    auto* c_generate = generate.add(app);
    auto* c_matrix = matrix.add(app);
    auto* c_dap = dap_report.add(app);
    auto* c_embed = embed_cmd.add(app);
    auto* c_render = render.add(app);
    auto* c_robust = robustness.add(app);
    auto* c_validate = validate.add(app);

    try {
        auto merged = merge_config(app, args);
        std::vector<std::string> reversed(merged.begin() + (merged.empty() ? 0 : 1), merged.end());
        std::reverse(reversed.begin(), reversed.end());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e.kind());
    }

    try {
        if (c_generate->parsed()) return generate.run(*c_generate);
        if (c_matrix->parsed()) return matrix.run(*c_matrix);
        if (c_dap->parsed()) return dap_report.run(*c_dap);
        if (c_embed->parsed()) return embed_cmd.run(*c_embed);
        if (c_render->parsed()) return render.run(*c_render);
        if (c_robust->parsed()) return robustness.run(*c_robust);
        if (c_validate->parsed()) return validate.run(*c_validate);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace elmap::cli
