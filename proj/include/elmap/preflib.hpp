#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elmap/election.hpp"
#include "elmap/error.hpp"
#include "elmap/random.hpp"

namespace elmap {

struct PreflibHeader {
    std::string file_name;
    std::string title;
    std::string data_type;
    int number_alternatives = 0;
    std::int64_t number_voters = -1;
    std::int64_t number_unique_orders = -1;
    std::map<int, std::string> alternative_names;
    // Unrecognized `KEY: VALUE` pairs in file order.
    std::vector<std::pair<std::string, std::string>> extra;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
    fail(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

inline std::int64_t parse_integer(const std::string& s, std::size_t line, std::string_view what) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
        parse_fail(line, "non-integer " + std::string(what) + " '" + s + "'");
    }
    try {
        return std::stoll(s);
    } catch (const std::exception&) {
        parse_fail(line, std::string(what) + " out of range '" + s + "'");
    }
}

}  // namespace detail

// Reads a Preflib .soc / .soi file. Alternative ids are 1-based in the file and 0-based in the result.
inline std::pair<PreflibHeader, Election> parse_preflib(std::istream& in, std::string_view file_hint = {}) {
    PreflibHeader h;
    std::vector<std::pair<std::int64_t, std::vector<int>>> lines;
    std::vector<std::size_t> line_numbers;
    std::string raw;
    std::size_t line_no = 0;
    bool seen_alternatives = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (line_no == 1 && raw.size() >= 3 && static_cast<unsigned char>(raw[0]) == 0xEF) raw.erase(0, 3);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string body = detail::trim(std::string_view(line).substr(1));
            const auto colon = body.find(':');
            if (colon == std::string::npos) {
                h.extra.emplace_back(body, "");
                continue;
            }
            const std::string key = detail::trim(std::string_view(body).substr(0, colon));
            const std::string value = detail::trim(std::string_view(body).substr(colon + 1));
            if (key == "FILE NAME") h.file_name = value;
            else if (key == "TITLE") h.title = value;
            else if (key == "DATA TYPE") h.data_type = value;
            else if (key == "NUMBER ALTERNATIVES") {
                h.number_alternatives = static_cast<int>(detail::parse_integer(value, line_no, "alternative count"));
                seen_alternatives = true;
            } else if (key == "NUMBER VOTERS") h.number_voters = detail::parse_integer(value, line_no, "voter count");
            else if (key == "NUMBER UNIQUE ORDERS") h.number_unique_orders = detail::parse_integer(value, line_no, "unique order count");
            else if (key.rfind("ALTERNATIVE NAME ", 0) == 0) {
                const auto id = detail::parse_integer(detail::trim(std::string_view(key).substr(17)), line_no, "alternative id");
                h.alternative_names[static_cast<int>(id)] = value;
            } else {
                h.extra.emplace_back(key, value);
            }
            continue;
        }
        if (line.find('{') != std::string::npos) {
            fail(ErrorKind::capability, "line " + std::to_string(line_no) + ": orders with ties (toc/toi) are not supported");
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) detail::parse_fail(line_no, "expected '<multiplicity>: <ids>'");
        const auto mult = detail::parse_integer(detail::trim(std::string_view(line).substr(0, colon)), line_no, "multiplicity");
        std::vector<int> ids;
        std::stringstream rest(line.substr(colon + 1));
        std::string tok;
        while (std::getline(rest, tok, ',')) {
            tok = detail::trim(tok);
            if (tok.empty()) {
                if (ids.empty() && rest.eof()) break;
                detail::parse_fail(line_no, "empty alternative id");
            }
            ids.push_back(static_cast<int>(detail::parse_integer(tok, line_no, "alternative id")));
        }
        lines.emplace_back(mult, std::move(ids));
        line_numbers.push_back(line_no);
    }

    if (h.data_type.empty()) {
        const std::string hint(file_hint);
        const auto dot = hint.rfind('.');
        if (dot != std::string::npos) h.data_type = hint.substr(dot + 1);
    }
    if (h.data_type == "toc" || h.data_type == "toi") fail(ErrorKind::capability, "data type " + h.data_type + " (orders with ties) is not supported");
    if (!h.data_type.empty() && h.data_type != "soc" && h.data_type != "soi") {
        fail(ErrorKind::capability, "unsupported data type '" + h.data_type + "'");
    }
    if (!seen_alternatives) fail(ErrorKind::parse, "missing NUMBER ALTERNATIVES header");
    if (h.number_alternatives < 1) fail(ErrorKind::parse, "NUMBER ALTERNATIVES must be at least 1");

    const int m = h.number_alternatives;
    Election e;
    e.m = m;
    e.label = h.file_name.empty() ? std::string(file_hint) : h.file_name;
    std::int64_t total = 0;
    std::vector<char> seen(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const auto& [mult, ids] = lines[k];
        const auto ln = line_numbers[k];
        std::fill(seen.begin(), seen.end(), 0);
        std::vector<int> top;
        top.reserve(ids.size());
        for (int id : ids) {
            if (id < 1 || id > m) detail::parse_fail(ln, "alternative id " + std::to_string(id) + " out of range 1.." + std::to_string(m));
            if (seen[static_cast<std::size_t>(id - 1)]) detail::parse_fail(ln, "duplicate alternative " + std::to_string(id));
            seen[static_cast<std::size_t>(id - 1)] = 1;
            top.push_back(id - 1);
        }
        if (h.data_type == "soc" && static_cast<int>(top.size()) != m) {
            detail::parse_fail(ln, "soc line lists " + std::to_string(top.size()) + " of " + std::to_string(m) + " alternatives");
        }
        for (std::int64_t r = 0; r < mult; ++r) e.votes.emplace_back(top, m);
        total += mult;
    }
    if (h.data_type.empty()) h.data_type = e.complete() ? "soc" : "soi";
    if (h.number_voters >= 0 && h.number_voters != total) {
        h.warnings.push_back("declared NUMBER VOTERS " + std::to_string(h.number_voters) + " but multiplicities sum to " +
                             std::to_string(total));
    }
    if (!h.alternative_names.empty()) {
        e.candidate_names.resize(static_cast<std::size_t>(m));
        for (int c = 0; c < m; ++c) {
            auto it = h.alternative_names.find(c + 1);
            e.candidate_names[static_cast<std::size_t>(c)] = it == h.alternative_names.end() ? std::to_string(c + 1) : it->second;
        }
    }
    return {std::move(h), std::move(e)};
}

inline std::pair<PreflibHeader, Election> parse_preflib_string(const std::string& text, std::string_view file_hint = {}) {
    std::istringstream is(text);
    return parse_preflib(is, file_hint);
}

inline std::pair<PreflibHeader, Election> read_preflib_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open " + path.string());
    auto result = parse_preflib(in, path.filename().string());
    if (result.second.label.empty()) result.second.label = path.stem().string();
    return result;
}

// Canonical form: header block, then distinct votes in lexicographic order with aggregated counts.
inline void write_preflib(std::ostream& os, const Election& e, const PreflibHeader& fields = {}) {
    require_valid(e);
    std::map<std::vector<int>, std::int64_t> counts;
    for (const Vote& v : e.votes) ++counts[v.top];
    os << "# FILE NAME: " << (fields.file_name.empty() ? e.label : fields.file_name) << '\n';
    os << "# TITLE: " << (fields.title.empty() ? e.label : fields.title) << '\n';
    os << "# DATA TYPE: " << (e.complete() ? "soc" : "soi") << '\n';
    for (const auto& [k, v] : fields.extra) os << "# " << k << ": " << v << '\n';
    os << "# NUMBER ALTERNATIVES: " << e.m << '\n';
    os << "# NUMBER VOTERS: " << e.votes.size() << '\n';
    os << "# NUMBER UNIQUE ORDERS: " << counts.size() << '\n';
    for (int c = 0; c < e.m; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        std::string name;
        if (uc < e.candidate_names.size()) name = e.candidate_names[uc];
        else if (auto it = fields.alternative_names.find(c + 1); it != fields.alternative_names.end()) name = it->second;
        else name = "c" + std::to_string(c + 1);
        os << "# ALTERNATIVE NAME " << c + 1 << ": " << name << '\n';
    }
    for (const auto& [top, count] : counts) {
        os << count << ':';
        for (std::size_t r = 0; r < top.size(); ++r) os << (r == 0 ? " " : ",") << top[r] + 1;
        os << '\n';
    }
}

inline std::string write_preflib_string(const Election& e, const PreflibHeader& fields = {}) {
    std::ostringstream os;
    write_preflib(os, e, fields);
    return os.str();
}

// ---------------------------------------------------------------------------
// Directory scan
// ---------------------------------------------------------------------------

struct ScanOptions {
    std::size_t max_files_per_dataset = 10;
    std::uint64_t seed = 0;
};

struct ScannedElection {
    std::string dataset;
    std::filesystem::path path;
    PreflibHeader header;
    Election election;
};

struct ScanResult {
    std::vector<ScannedElection> elections;
    // (file, message) for files that could not be read or parsed.
    std::vector<std::pair<std::string, std::string>> errors;
    std::vector<std::string> warnings;
};

// Dataset id of a Preflib file name: the part before the first '-' (e.g. "00014" in
// "00014-00000002.soc"), or the stem when there is no '-'.
inline std::string dataset_of(const std::filesystem::path& p) {
    const std::string stem = p.stem().string();
    const auto dash = stem.find('-');
    return dash == std::string::npos ? stem : stem.substr(0, dash);
}

inline ScanResult scan_dataset_dir(const std::filesystem::path& dir, const ScanOptions& opt = {}) {
    namespace fs = std::filesystem;
    ScanResult out;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) fail(ErrorKind::io, "not a directory: " + dir.string());
    std::map<std::string, std::vector<fs::path>> groups;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext != ".soc" && ext != ".soi") {
            if (ext == ".toc" || ext == ".toi") out.warnings.push_back("skipping " + entry.path().filename().string() + " (orders with ties)");
            continue;
        }
        groups[dataset_of(entry.path())].push_back(entry.path());
    }
    if (groups.empty()) out.warnings.push_back("no .soc/.soi files in " + dir.string());
    for (auto& [dataset, files] : groups) {
        std::sort(files.begin(), files.end());
        if (files.size() > opt.max_files_per_dataset) {
            Rng rng = Rng::stream(opt.seed, "preflib/" + dataset);
            rng.shuffle(files);
            files.resize(opt.max_files_per_dataset);
            std::sort(files.begin(), files.end());
        }
        for (const auto& f : files) {
            try {
                auto [h, e] = read_preflib_file(f);
                e.label = f.stem().string();
                for (const auto& w : h.warnings) out.warnings.push_back(f.filename().string() + ": " + w);
                out.elections.push_back({dataset, f, std::move(h), std::move(e)});
            } catch (const Error& err) {
                out.errors.emplace_back(f.filename().string(), err.what());
            }
        }
    }
    return out;
}

}  // namespace elmap
