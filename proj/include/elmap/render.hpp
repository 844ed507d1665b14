#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "elmap/embedding.hpp"
#include "elmap/error.hpp"

namespace elmap {

enum class Marker { circle, triangle, cross, star };

inline std::string_view to_string(Marker m) {
    switch (m) {
        case Marker::circle: return "circle";
        case Marker::triangle: return "triangle";
        case Marker::cross: return "cross";
        case Marker::star: return "star";
    }
    return "circle";
}

inline Marker parse_marker(std::string_view s) {
    for (Marker m : {Marker::circle, Marker::triangle, Marker::cross, Marker::star}) {
        if (s == to_string(m)) return m;
    }
    fail(ErrorKind::parse, "unknown marker '" + std::string(s) + "'");
}

struct PointStyle {
    std::string color = "black";
    Marker marker = Marker::circle;
    double size = 4.0;
    // Legend entry; empty entries are left out of the legend.
    std::string group;
};

using StyleMap = std::map<std::string, PointStyle>;

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) {
        while (!cur.empty() && (cur.back() == '\r' || cur.back() == ' ')) cur.pop_back();
        while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
        out.push_back(cur);
    }
    return out;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string marker_svg(Marker m, double x, double y, double r, const std::string& color) {
    std::string c = xml_escape(color);
    switch (m) {
        case Marker::circle:
            return "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"" + fmt(r) + "\" fill=\"" + c + "\"/>";
        case Marker::triangle:
            return "<polygon points=\"" + fmt(x) + "," + fmt(y - r) + " " + fmt(x - r * 0.866) + "," + fmt(y + r * 0.5) + " " +
                   fmt(x + r * 0.866) + "," + fmt(y + r * 0.5) + "\" fill=\"" + c + "\"/>";
        case Marker::cross:
            return "<path d=\"M" + fmt(x - r) + " " + fmt(y - r) + " L" + fmt(x + r) + " " + fmt(y + r) + " M" + fmt(x - r) + " " +
                   fmt(y + r) + " L" + fmt(x + r) + " " + fmt(y - r) + "\" stroke=\"" + c + "\" stroke-width=\"" + fmt(r * 0.5) +
                   "\" fill=\"none\"/>";
        case Marker::star: {
            std::string pts;
            for (int k = 0; k < 10; ++k) {
                const double ang = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
                const double rad = k % 2 == 0 ? r * 1.2 : r * 0.5;
                if (k) pts += ' ';
                pts += fmt(x + rad * std::cos(ang)) + "," + fmt(y + rad * std::sin(ang));
            }
            return "<polygon points=\"" + pts + "\" fill=\"" + c + "\"/>";
        }
    }
    return {};
}

}  // namespace detail

// Style CSV: header `label,color,marker,size[,group]`.
inline StyleMap read_style_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorKind::parse, "style file is empty");
    const auto header = detail::split_csv_line(line);
    if (header.size() < 4 || header[0] != "label" || header[1] != "color" || header[2] != "marker" || header[3] != "size") {
        fail(ErrorKind::parse, "style header must be label,color,marker,size[,group]");
    }
    StyleMap out;
    std::size_t no = 1;
    while (std::getline(is, line)) {
        ++no;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() < 4) fail(ErrorKind::parse, "style line " + std::to_string(no) + " has too few cells");
        PointStyle s;
        s.color = cells[1];
        s.marker = parse_marker(cells[2]);
        try {
            s.size = std::stod(cells[3]);
        } catch (const std::exception&) {
            fail(ErrorKind::parse, "style line " + std::to_string(no) + ": bad size '" + cells[3] + "'");
        }
        if (cells.size() > 4) s.group = cells[4];
        out[cells[0]] = s;
    }
    return out;
}

inline void write_style_csv(std::ostream& os, const std::vector<std::pair<std::string, PointStyle>>& rows) {
    os << "label,color,marker,size,group\n";
    for (const auto& [label, s] : rows) os << label << ',' << s.color << ',' << to_string(s.marker) << ',' << s.size << ',' << s.group << '\n';
}

inline std::vector<std::pair<std::string, Point2>> read_coordinates_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) fail(ErrorKind::parse, "coordinate file is empty");
    const auto header = detail::split_csv_line(line);
    if (header.size() != 3 || header[0] != "label" || header[1] != "x" || header[2] != "y") {
        fail(ErrorKind::parse, "coordinate header must be label,x,y");
    }
    std::vector<std::pair<std::string, Point2>> out;
    std::size_t no = 1;
    while (std::getline(is, line)) {
        ++no;
        if (line.empty() || line == "\r") continue;
        const auto c = detail::split_csv_line(line);
        if (c.size() != 3) fail(ErrorKind::parse, "coordinate line " + std::to_string(no) + " needs 3 cells");
        try {
            out.push_back({c[0], {std::stod(c[1]), std::stod(c[2])}});
        } catch (const std::exception&) {
            fail(ErrorKind::parse, "coordinate line " + std::to_string(no) + " has a bad number");
        }
    }
    return out;
}

// Labels present on only one side, formatted for an error message; empty when they agree.
inline std::string style_mismatch(const std::vector<std::string>& labels, const StyleMap& styles) {
    std::set<std::string> known(labels.begin(), labels.end());
    std::string missing;
    std::string unknown;
    for (const auto& l : labels) {
        if (!styles.count(l)) missing += (missing.empty() ? "" : ", ") + l;
    }
    for (const auto& [l, s] : styles) {
        if (!known.count(l)) unknown += (unknown.empty() ? "" : ", ") + l;
    }
    std::string out;
    if (!missing.empty()) out += "labels without style: " + missing;
    if (!unknown.empty()) out += std::string(out.empty() ? "" : "; ") + "styles for unknown labels: " + unknown;
    return out;
}

struct SvgOptions {
    double width = 800.0;
    double height = 800.0;
    double margin = 40.0;
    std::string title;
};

// Self-contained SVG scatter plot; x and y share one scale so distances are preserved.
inline void render_svg(std::ostream& os, const std::vector<std::string>& labels, const std::vector<Point2>& points,
                       const StyleMap* styles = nullptr, const SvgOptions& opt = {}) {
    if (labels.size() != points.size()) fail(ErrorKind::dimension, "label and point counts differ");
    if (styles) {
        const auto mismatch = style_mismatch(labels, *styles);
        if (!mismatch.empty()) fail(ErrorKind::argument, "style does not match labels: " + mismatch);
    }
    double minx = 0, maxx = 0, miny = 0, maxy = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i == 0 || points[i][0] < minx) minx = points[i][0];
        if (i == 0 || points[i][0] > maxx) maxx = points[i][0];
        if (i == 0 || points[i][1] < miny) miny = points[i][1];
        if (i == 0 || points[i][1] > maxy) maxy = points[i][1];
    }
    const double span = std::max({maxx - minx, maxy - miny, 1e-12});
    const double inner = std::min(opt.width, opt.height) - 2 * opt.margin;
    const double scale = inner / span;

    std::vector<std::pair<std::string, PointStyle>> legend;
    if (styles) {
        for (const auto& l : labels) {
            const auto& s = styles->at(l);
            if (s.group.empty()) continue;
            if (std::none_of(legend.begin(), legend.end(), [&](const auto& e) { return e.first == s.group; })) legend.emplace_back(s.group, s);
        }
    }
    const double legend_w = legend.empty() ? 0.0 : 180.0;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(opt.width + legend_w) << "\" height=\""
       << detail::fmt(opt.height) << "\" viewBox=\"0 0 " << detail::fmt(opt.width + legend_w) << ' ' << detail::fmt(opt.height) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << detail::fmt(opt.width + legend_w) << "\" height=\"" << detail::fmt(opt.height)
       << "\" fill=\"white\"/>\n";
    if (!opt.title.empty()) {
        os << "<text x=\"" << detail::fmt(opt.margin) << "\" y=\"" << detail::fmt(opt.margin / 2) << "\" font-family=\"sans-serif\" font-size=\"14\">"
           << detail::xml_escape(opt.title) << "</text>\n";
    }
    const PointStyle fallback;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointStyle& s = styles ? styles->at(labels[i]) : fallback;
        const double x = opt.margin + (points[i][0] - minx) * scale;
        const double y = opt.height - opt.margin - (points[i][1] - miny) * scale;
        os << "<g><title>" << detail::xml_escape(labels[i]) << "</title>" << detail::marker_svg(s.marker, x, y, s.size, s.color) << "</g>\n";
    }
    for (std::size_t k = 0; k < legend.size(); ++k) {
        const double y = opt.margin + 22.0 * static_cast<double>(k);
        const double x = opt.width + 10.0;
        os << detail::marker_svg(legend[k].second.marker, x, y, 5.0, legend[k].second.color) << '\n';
        os << "<text x=\"" << detail::fmt(x + 12) << "\" y=\"" << detail::fmt(y + 4) << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << detail::xml_escape(legend[k].first) << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace elmap
