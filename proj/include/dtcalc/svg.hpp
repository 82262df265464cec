#pragma once

#include "dtcalc/envelope.hpp"
#include "dtcalc/geometry.hpp"
#include "dtcalc/spaces.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace dtcalc {

struct diagram_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Fixed-point decimal rendering of an exact rational: `digits` fractional
/// digits, round half away from zero. Pure integer arithmetic, so identical
/// input always yields identical text.
inline std::string fixed_decimal(const ExtRat& v, int digits) {
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    BigInt num = v.numerator();
    BigInt den = v.denominator();
    bool negative = num < 0;
    if (negative) num = -num;
    BigInt t = num * scale;
    BigInt q = t / den;
    if (2 * (t % den) >= den) ++q;
    BigInt whole = q / scale;
    BigInt frac = q % scale;
    std::string out = (negative && q != 0 ? "-" : "") + whole.str();
    if (digits > 0) {
        std::string f = frac.str();
        out += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
    }
    return out;
}

/// Decimal rendering with six significant digits, for human-readable output.
inline std::string decimal_6sig(const ExtRat& v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    if (v.is_zero()) return "0.00000";
    BigInt a = v.numerator();
    if (a < 0) a = -a;
    BigInt b = v.denominator();
    int decimals;
    if (a >= b) {
        int int_digits = 0;
        for (BigInt w = a / b; w > 0; w /= 10) ++int_digits;
        decimals = int_digits >= 6 ? 0 : 6 - int_digits;
    } else {
        int zeros = 0;
        BigInt scaled = a * 10;
        while (scaled < b) {
            scaled *= 10;
            ++zeros;
        }
        decimals = zeros + 6;
    }
    return fixed_decimal(v, decimals);
}

struct Viewport {
    ExtRat x_min, x_max, y_min, y_max;

    bool contains(const ExtRat& x, const ExtRat& y) const {
        return x_min <= x && x <= x_max && y_min <= y && y <= y_max;
    }
};

struct LabeledPoint {
    DiagramPoint at;
    std::string label;
    bool open = true;  ///< open points render as hollow circles
};

struct StyledLine {
    Line line;
    std::string style = "solid";  ///< solid | dashed | dotted
    std::string label;
};

struct AdaptivityRay {
    ExtRat inv_p;
    ExtRat shift = ExtRat(0);
    std::string label;
};

/// Everything a DeVore-Triebel diagram can show: a shaded region, assertion
/// rays, construction lines, adaptivity rays, and labeled points. Axes use
/// the usual convention: smoothness r vertical, 1/rho horizontal.
struct DiagramSpec {
    explicit DiagramSpec(DomainContext c) : ctx(std::move(c)) {}

    DomainContext ctx;
    std::optional<RegularityRegion> region;
    std::vector<RegularityAssertion> assertion_marks;
    std::vector<LabeledPoint> points;
    std::vector<StyledLine> lines;
    std::vector<AdaptivityRay> rays;
    std::optional<Viewport> viewport;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

struct Frame {
    Viewport view;
    ExtRat sx, sy;
    ExtRat px0, py0;  // pixel origin offsets

    std::string px(const ExtRat& x) const { return fixed_decimal(px0 + (x - view.x_min) * sx, 2); }
    std::string py(const ExtRat& y) const { return fixed_decimal(py0 - (y - view.y_min) * sy, 2); }
};

/// Clips a line to the viewport rectangle; returns the two extreme boundary
/// points when the line meets the rectangle.
inline std::optional<std::pair<std::pair<ExtRat, ExtRat>, std::pair<ExtRat, ExtRat>>>
clip_line(const Line& l, const Viewport& v) {
    std::vector<std::pair<ExtRat, ExtRat>> hits;
    auto push = [&](ExtRat x, ExtRat y) {
        if (!v.contains(x, y)) return;
        for (const auto& h : hits)
            if (h.first == x && h.second == y) return;
        hits.emplace_back(std::move(x), std::move(y));
    };
    if (!l.is_vertical()) {
        push(v.x_min, l.y_at(v.x_min));
        push(v.x_max, l.y_at(v.x_max));
    }
    if (!l.a().is_zero()) {
        // x at a horizontal level: a x = c - b y
        for (const ExtRat& y : {v.y_min, v.y_max}) push((l.c() - l.b() * y) / l.a(), y);
    }
    if (hits.size() < 2) return std::nullopt;
    auto lt = [](const std::pair<ExtRat, ExtRat>& a, const std::pair<ExtRat, ExtRat>& b) {
        return a.first < b.first || (a.first == b.first && a.second < b.second);
    };
    auto [mn, mx] = std::minmax_element(hits.begin(), hits.end(), lt);
    if (*mn == *mx) return std::nullopt;
    return std::make_pair(*mn, *mx);
}

inline const char* dash_for(const std::string& style) {
    if (style == "dashed") return " stroke-dasharray=\"7,5\"";
    if (style == "dotted") return " stroke-dasharray=\"2,4\"";
    return "";
}

}  // namespace detail

/// Renders the diagram as standalone SVG text. The output is a pure function
/// of the input: coordinates are computed in exact arithmetic and printed
/// with fixed precision, so regeneration is byte-identical.
inline std::string render_svg(const DiagramSpec& spec) {
    // -- viewport ------------------------------------------------------------
    std::vector<std::pair<ExtRat, ExtRat>> anchors;
    anchors.emplace_back(ExtRat(0), ExtRat(0));
    if (spec.region && spec.region->state() == RegularityRegion::State::bounded)
        for (const DiagramPoint& bp : spec.region->breakpoints()) anchors.emplace_back(bp.x, bp.y);
    for (const LabeledPoint& p : spec.points) anchors.emplace_back(p.at.x, p.at.y);
    for (const AdaptivityRay& r : spec.rays) anchors.emplace_back(r.inv_p, r.shift);
    for (const RegularityAssertion& a : spec.assertion_marks)
        if (a.top.is_finite()) anchors.emplace_back(a.inv_p, a.top);

    Viewport view{ExtRat(0), ExtRat(1), ExtRat(0), ExtRat(1)};
    if (spec.viewport) {
        view = *spec.viewport;
        if (!(view.x_min < view.x_max && view.y_min < view.y_max))
            throw diagram_error("viewport must have positive spans");
        for (const auto& [x, y] : anchors)
            if (!view.contains(x, y))
                throw diagram_error("viewport does not contain the referenced geometry");
    } else {
        view = Viewport{anchors.front().first, anchors.front().first, anchors.front().second,
                        anchors.front().second};
        for (const auto& [x, y] : anchors) {
            view.x_min = min(view.x_min, x);
            view.x_max = max(view.x_max, x);
            view.y_min = min(view.y_min, y);
            view.y_max = max(view.y_max, y);
        }
        ExtRat x_span = view.x_max - view.x_min;
        ExtRat y_span = view.y_max - view.y_min;
        if (x_span.is_zero()) x_span = ExtRat(1);
        if (y_span.is_zero()) y_span = ExtRat(1);
        ExtRat mx = x_span / ExtRat(10), my = y_span / ExtRat(10);
        view.x_min -= mx;
        view.x_max += mx;
        view.y_min -= my;
        view.y_max += my;
    }

    const int width = 720, height = 540;
    const int ml = 70, mr = 40, mt = 30, mb = 50;
    detail::Frame fr{view, ExtRat(width - ml - mr) / (view.x_max - view.x_min),
                     ExtRat(height - mt - mb) / (view.y_max - view.y_min), ExtRat(ml),
                     ExtRat(height - mb)};

    std::string out;
    auto text_at = [&](const std::string& x, const std::string& y, const std::string& label,
                       const char* anchor = "start") {
        out += "<text x=\"" + x + "\" y=\"" + y + "\" font-family=\"sans-serif\" font-size=\"13\"" +
               " text-anchor=\"" + std::string(anchor) + "\">" + detail::xml_escape(label) +
               "</text>\n";
    };

    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" fill=\"white\"/>\n";

    // -- region shading --------------------------------------------------
    if (spec.region) {
        const RegularityRegion& region = *spec.region;
        if (region.state() == RegularityRegion::State::infinite) {
            out += "<rect x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(mt) +
                   "\" width=\"" + std::to_string(width - ml - mr) + "\" height=\"" +
                   std::to_string(height - mt - mb) + "\" fill=\"#d9d9d9\" fill-opacity=\"0.55\"/>\n";
        } else if (region.state() == RegularityRegion::State::bounded) {
            ExtRat x_lo = max(ExtRat(0), view.x_min);
            ExtRat x_hi = view.x_max;
            std::vector<ExtRat> xs{x_lo};
            for (const DiagramPoint& bp : region.breakpoints())
                if (x_lo < bp.x && bp.x < x_hi) xs.push_back(bp.x);
            xs.push_back(x_hi);
            // clamp the top polyline at the viewport, inserting exact crossings
            std::vector<std::pair<ExtRat, ExtRat>> top;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                ExtRat u = region.value_at(xs[i]);
                if (i > 0) {
                    ExtRat u_prev = region.value_at(xs[i - 1]);
                    for (const ExtRat& level : {view.y_max, view.y_min}) {
                        bool crosses = (u_prev < level && level < u) || (u < level && level < u_prev);
                        if (crosses) {
                            ExtRat t = (level - u_prev) / (u - u_prev);
                            top.emplace_back(xs[i - 1] + t * (xs[i] - xs[i - 1]), level);
                        }
                    }
                }
                top.emplace_back(xs[i], min(max(u, view.y_min), view.y_max));
            }
            std::string poly;
            poly += fr.px(x_lo) + "," + fr.py(view.y_min) + " ";
            for (const auto& [x, y] : top) poly += fr.px(x) + "," + fr.py(y) + " ";
            poly += fr.px(x_hi) + "," + fr.py(view.y_min);
            out += "<polygon points=\"" + poly + "\" fill=\"#d9d9d9\" fill-opacity=\"0.55\"/>\n";
            std::string boundary;
            for (const auto& [x, y] : top) boundary += fr.px(x) + "," + fr.py(y) + " ";
            if (!boundary.empty()) boundary.pop_back();
            out += "<polyline points=\"" + boundary +
                   "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.6\""
                   " stroke-dasharray=\"6,4\"/>\n";
        }
    }

    // -- axes --------------------------------------------------------------
    if (view.x_min <= ExtRat(0) && ExtRat(0) <= view.x_max) {
        std::string x0 = fr.px(ExtRat(0));
        out += "<line x1=\"" + x0 + "\" y1=\"" + std::to_string(height - mb + 8) + "\" x2=\"" + x0 +
               "\" y2=\"" + std::to_string(mt - 8) + "\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
        out += "<path d=\"M " + x0 + " " + std::to_string(mt - 14) + " l -4 8 l 8 0 z\"/>\n";
        text_at(x0, std::to_string(mt - 16), "r", "end");
    }
    if (view.y_min <= ExtRat(0) && ExtRat(0) <= view.y_max) {
        std::string y0 = fr.py(ExtRat(0));
        out += "<line x1=\"" + std::to_string(ml - 8) + "\" y1=\"" + y0 + "\" x2=\"" +
               std::to_string(width - mr + 8) + "\" y2=\"" + y0 +
               "\" stroke=\"black\" stroke-width=\"1.2\"/>\n";
        out += "<path d=\"M " + std::to_string(width - mr + 14) + " " + y0 + " l -8 -4 l 0 8 z\"/>\n";
        text_at(std::to_string(width - mr + 16), y0, "1/\xcf\x81");
    }

    // -- construction lines --------------------------------------------------
    for (const StyledLine& sl : spec.lines) {
        auto seg = detail::clip_line(sl.line, view);
        if (!seg) continue;
        const auto& [p1, p2] = *seg;
        out += "<line x1=\"" + fr.px(p1.first) + "\" y1=\"" + fr.py(p1.second) + "\" x2=\"" +
               fr.px(p2.first) + "\" y2=\"" + fr.py(p2.second) +
               "\" stroke=\"#333333\" stroke-width=\"1.4\"" + detail::dash_for(sl.style) + "/>\n";
        if (!sl.label.empty()) {
            ExtRat lx = p1.first + (p2.first - p1.first) * ExtRat(3, 5);
            ExtRat ly = p1.second + (p2.second - p1.second) * ExtRat(3, 5);
            text_at(fr.px(lx), fixed_decimal((fr.py0 - (ly - view.y_min) * fr.sy) - ExtRat(6), 2),
                    sl.label);
        }
    }

    // -- adaptivity rays -------------------------------------------------
    const ExtRat d(spec.ctx.dim);
    for (const AdaptivityRay& ray : spec.rays) {
        ExtRat t_lo = max(ExtRat(0), max(view.x_min - ray.inv_p, (view.y_min - ray.shift) / d));
        ExtRat t_hi = min(view.x_max - ray.inv_p, (view.y_max - ray.shift) / d);
        if (!(t_lo < t_hi)) continue;
        auto x1 = fr.px(ray.inv_p + t_lo), y1 = fr.py(ray.shift + d * t_lo);
        auto x2 = fr.px(ray.inv_p + t_hi), y2 = fr.py(ray.shift + d * t_hi);
        out += "<line x1=\"" + x1 + "\" y1=\"" + y1 + "\" x2=\"" + x2 + "\" y2=\"" + y2 +
               "\" stroke=\"#1f4e9c\" stroke-width=\"1.6\" stroke-dasharray=\"2,4\"/>\n";
        if (!ray.label.empty()) {
            ExtRat t_lab = t_lo + (t_hi - t_lo) * ExtRat(7, 10);
            text_at(fr.px(ray.inv_p + t_lab),
                    fixed_decimal(fr.py0 - (ray.shift + d * t_lab - view.y_min) * fr.sy - ExtRat(6), 2),
                    ray.label);
        }
    }

    // -- assertion rays ---------------------------------------------------
    for (const RegularityAssertion& a : spec.assertion_marks) {
        ExtRat top = a.top.is_finite() ? min(a.top, view.y_max) : view.y_max;
        ExtRat base = max(ExtRat(0), view.y_min);
        if (!(base < top) || a.inv_p < view.x_min || a.inv_p > view.x_max) continue;
        std::string x = fr.px(a.inv_p);
        out += "<line x1=\"" + x + "\" y1=\"" + fr.py(base) + "\" x2=\"" + x + "\" y2=\"" +
               fr.py(top) + "\" stroke=\"#aa2222\" stroke-width=\"2.4\"/>\n";
        if (a.top.is_finite() && a.top <= view.y_max)
            out += "<circle cx=\"" + x + "\" cy=\"" + fr.py(a.top) +
                   "\" r=\"3.5\" fill=\"white\" stroke=\"#aa2222\" stroke-width=\"1.4\"/>\n";
    }

    // -- labeled points --------------------------------------------------
    for (const LabeledPoint& p : spec.points) {
        std::string cx = fr.px(p.at.x), cy = fr.py(p.at.y);
        out += "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"3.5\" fill=\"" +
               (p.open ? std::string("white") : std::string("black")) +
               "\" stroke=\"black\" stroke-width=\"1.3\"/>\n";
        if (!p.label.empty())
            text_at(fixed_decimal(ExtRat((p.at.x - view.x_min) * fr.sx) + fr.px0 + ExtRat(6), 2),
                    fixed_decimal(fr.py0 - (p.at.y - view.y_min) * fr.sy - ExtRat(7), 2), p.label);
    }

    out += "</svg>\n";
    return out;
}

}  // namespace dtcalc
