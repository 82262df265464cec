#pragma once

#include "dtcalc/bounds.hpp"
#include "dtcalc/casestudies.hpp"
#include "dtcalc/envelope.hpp"
#include "dtcalc/serialize.hpp"
#include "dtcalc/svg.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dtcalc {

/// Structural or value errors in a profile / diagram document (CLI exit 2).
struct profile_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QueryLimitS {
    ExtRat inv_p;
};
struct QueryLimitAlpha {
    ExtRat inv_p;
    ExtRat shift = ExtRat(0);
};
struct QueryAlphaUpper {
    ExtRat inv_p, s_bar, inv_pz, z;
    ExtRat shift = ExtRat(0);
};
struct QuerySLower {
    ExtRat inv_p, inv_pz, z, alpha;
};
struct QuerySTransfer {
    ExtRat inv_p, s_bar, inv_pz, z, inv_phat;
};
using ProfileQuery =
    std::variant<QueryLimitS, QueryLimitAlpha, QueryAlphaUpper, QuerySLower, QuerySTransfer>;

/// A profile: ambient dimension, regularity assertions, and queries against
/// their deductive closure.
struct ProfileDocument {
    int dimension = 2;
    std::optional<ExtRat> epsilon;
    std::vector<RegularityAssertion> assertions;
    std::vector<ProfileQuery> queries;

    DomainContext context() const {
        return epsilon ? DomainContext(dimension, *epsilon) : DomainContext(dimension);
    }
};

namespace detail {

inline ExtRat rat_at(const Json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw profile_error(path + ": missing field '" + key + "'");
    const Json& v = j.at(key);
    try {
        if (v.is_string()) return ExtRat::parse(v.get<std::string>());
        if (v.is_number_integer()) return ExtRat(v.get<long long>());
    } catch (const parse_error& e) {
        throw profile_error(path + "." + key + ": " + e.what());
    }
    throw profile_error(path + "." + key + ": expected a rational string or integer literal");
}

inline std::optional<ExtRat> rat_opt(const Json& j, const std::string& key,
                                     const std::string& path) {
    if (!j.contains(key)) return std::nullopt;
    return rat_at(j, key, path);
}

}  // namespace detail

inline ProfileDocument parse_profile(const Json& j) {
    if (!j.is_object()) throw profile_error("$: profile document must be a JSON object");
    ProfileDocument doc;
    if (!j.contains("dimension") || !j.at("dimension").is_number_integer())
        throw profile_error("$.dimension: required integer");
    doc.dimension = j.at("dimension").get<int>();
    if (doc.dimension < 1) throw profile_error("$.dimension: must be >= 1");
    doc.epsilon = detail::rat_opt(j, "epsilon", "$");

    if (j.contains("assertions")) {
        if (!j.at("assertions").is_array()) throw profile_error("$.assertions: expected an array");
        std::size_t idx = 0;
        for (const Json& a : j.at("assertions")) {
            std::string path = "$.assertions[" + std::to_string(idx++) + "]";
            if (!a.is_object()) throw profile_error(path + ": expected an object");
            ExtRat inv_pz = detail::rat_at(a, "invPz", path);
            ExtRat z = detail::rat_at(a, "z", path);
            try {
                doc.assertions.emplace_back(std::move(inv_pz), std::move(z));
            } catch (const envelope_error& e) {
                throw profile_error(path + ": " + e.what());
            }
        }
    }

    if (j.contains("queries")) {
        if (!j.at("queries").is_array()) throw profile_error("$.queries: expected an array");
        std::size_t idx = 0;
        for (const Json& q : j.at("queries")) {
            std::string path = "$.queries[" + std::to_string(idx++) + "]";
            if (!q.is_object() || !q.contains("kind") || !q.at("kind").is_string())
                throw profile_error(path + ": expected an object with a 'kind' string");
            std::string kind = q.at("kind").get<std::string>();
            if (kind == "limit_s") {
                doc.queries.push_back(QueryLimitS{detail::rat_at(q, "invP", path)});
            } else if (kind == "limit_alpha") {
                QueryLimitAlpha query{detail::rat_at(q, "invP", path)};
                if (auto s = detail::rat_opt(q, "shift", path)) query.shift = *s;
                doc.queries.push_back(std::move(query));
            } else if (kind == "alpha_upper") {
                QueryAlphaUpper query{detail::rat_at(q, "invP", path),
                                      detail::rat_at(q, "sBar", path),
                                      detail::rat_at(q, "invPz", path),
                                      detail::rat_at(q, "z", path)};
                if (auto s = detail::rat_opt(q, "shift", path)) query.shift = *s;
                doc.queries.push_back(std::move(query));
            } else if (kind == "s_lower") {
                doc.queries.push_back(QuerySLower{
                    detail::rat_at(q, "invP", path), detail::rat_at(q, "invPz", path),
                    detail::rat_at(q, "z", path), detail::rat_at(q, "alpha", path)});
            } else if (kind == "s_transfer") {
                doc.queries.push_back(QuerySTransfer{
                    detail::rat_at(q, "invP", path), detail::rat_at(q, "sBar", path),
                    detail::rat_at(q, "invPz", path), detail::rat_at(q, "z", path),
                    detail::rat_at(q, "invPhat", path)});
            } else {
                throw profile_error(path + ".kind: unknown query kind '" + kind + "'");
            }
        }
    }
    return doc;
}

/// Answers every query against the closed region. Domain errors in query
/// parameters surface as profile_error; inconsistent bound inputs
/// (z > s_bar) propagate as inconsistent_input for the caller to map to its
/// own exit code.
inline Json run_profile(const ProfileDocument& doc) {
    DomainContext ctx = doc.context();
    RegularityRegion region = close(RegularityRegion::from_generators(doc.assertions), ctx);

    Json report;
    report["dimension"] = doc.dimension;
    if (doc.epsilon) report["epsilon"] = doc.epsilon->str();
    report["envelope"] = envelope_to_json(region);
    Json answers = Json::object();
    Json results = Json::array();

    auto guard = [&](auto&& fn) {
        try {
            return fn();
        } catch (const inconsistent_input&) {
            throw;
        } catch (const std::domain_error& e) {
            throw profile_error(std::string("query error: ") + e.what());
        }
    };

    for (const ProfileQuery& query : doc.queries) {
        Json entry;
        if (const auto* q = std::get_if<QueryLimitS>(&query)) {
            ExtRat v = guard([&] { return limit_s(region, q->inv_p); });
            entry = Json{{"kind", "limit_s"}, {"invP", q->inv_p.str()}, {"result", v.str()}};
            answers["limit_s"] = v.str();
        } else if (const auto* q = std::get_if<QueryLimitAlpha>(&query)) {
            ExtRat v = guard([&] { return limit_alpha(region, q->inv_p, ctx, q->shift); });
            entry = Json{{"kind", "limit_alpha"}, {"invP", q->inv_p.str()}};
            if (!q->shift.is_zero()) entry["shift"] = q->shift.str();
            entry["result"] = v.str();
            answers["limit_alpha"] = v.str();
        } else if (const auto* q = std::get_if<QueryAlphaUpper>(&query)) {
            BoundResult r = guard([&] {
                return alpha_upper_bound(
                    BoundInput(ctx, q->inv_p, q->s_bar, q->inv_pz, q->z), q->shift);
            });
            entry = Json{{"kind", "alpha_upper"},
                         {"invP", q->inv_p.str()},
                         {"sBar", q->s_bar.str()},
                         {"invPz", q->inv_pz.str()},
                         {"z", q->z.str()}};
            if (!q->shift.is_zero()) entry["shift"] = q->shift.str();
            entry["bound"] = to_json(r);
            answers["alpha_upper"] = r.outcome == BoundResult::Outcome::finite ? r.value->str()
                                     : r.outcome == BoundResult::Outcome::infinite ? "inf"
                                                                                   : "none";
        } else if (const auto* q = std::get_if<QuerySLower>(&query)) {
            ExtRat v = guard(
                [&] { return s_lower_bound(q->alpha, q->inv_p, q->inv_pz, q->z, ctx.dim); });
            entry = Json{{"kind", "s_lower"},
                         {"invP", q->inv_p.str()},
                         {"invPz", q->inv_pz.str()},
                         {"z", q->z.str()},
                         {"alpha", q->alpha.str()},
                         {"result", v.str()}};
            answers["s_lower"] = v.str();
        } else if (const auto* q = std::get_if<QuerySTransfer>(&query)) {
            ExtRat v = guard([&] {
                return s_transfer_upper_bound(q->s_bar, q->inv_p, q->z, q->inv_pz, q->inv_phat);
            });
            entry = Json{{"kind", "s_transfer"}, {"invP", q->inv_p.str()},
                         {"sBar", q->s_bar.str()}, {"invPz", q->inv_pz.str()},
                         {"z", q->z.str()},       {"invPhat", q->inv_phat.str()},
                         {"result", v.str()}};
            answers["s_transfer"] = v.str();
        }
        results.push_back(std::move(entry));
    }
    report["answers"] = std::move(answers);
    report["results"] = std::move(results);
    return report;
}

/// Diagram for a profile: the closed region, its generating assertions, one
/// adaptivity ray per limit_alpha / alpha_upper query, and for bound queries
/// the full construction: the pivot line through (1/p_z, z) and (1/p, s̄_p),
/// the Sobolev line through the query point, and marks for μ and the bound.
inline DiagramSpec profile_diagram(const ProfileDocument& doc) {
    DomainContext ctx = doc.context();
    DiagramSpec spec{ctx};
    spec.region = close(RegularityRegion::from_generators(doc.assertions), ctx);
    spec.assertion_marks = doc.assertions;
    for (const ProfileQuery& query : doc.queries) {
        if (const auto* q = std::get_if<QueryLimitAlpha>(&query)) {
            spec.rays.push_back({q->inv_p, q->shift, ""});
        } else if (const auto* q = std::get_if<QueryAlphaUpper>(&query)) {
            spec.rays.push_back({q->inv_p, q->shift, ""});
            spec.points.push_back({DiagramPoint(q->inv_p, q->s_bar), "s̄_p", true});
            spec.points.push_back({DiagramPoint(q->inv_pz, q->z), "z", true});
            spec.lines.push_back({line_through(DiagramPoint(q->inv_pz, q->z),
                                               DiagramPoint(q->inv_p, q->s_bar)),
                                  "dashed", ""});
            spec.lines.push_back(
                {sobolev_line_through(DiagramPoint(q->inv_p, q->s_bar), ctx.dim), "dotted", ""});
            try {
                BoundResult r = alpha_upper_bound(
                    BoundInput(ctx, q->inv_p, q->s_bar, q->inv_pz, q->z), q->shift);
                if (r.mu) spec.points.push_back({DiagramPoint(q->inv_pz, *r.mu), "μ", true});
                if (r.outcome == BoundResult::Outcome::finite)
                    spec.points.push_back(
                        {DiagramPoint((*r.value - q->shift) / ExtRat(ctx.dim) + q->inv_p,
                                      *r.value),
                         "ᾱ_p", true});
            } catch (const std::domain_error&) {
                // inconsistent or degenerate query: draw the raw data only
            }
        }
    }
    return spec;
}

/// Parses the standalone diagram document consumed by the `diagram` command.
inline DiagramSpec diagram_from_json(const Json& j) {
    if (!j.is_object()) throw profile_error("$: diagram document must be a JSON object");
    if (!j.contains("dimension") || !j.at("dimension").is_number_integer())
        throw profile_error("$.dimension: required integer");
    int dim = j.at("dimension").get<int>();
    if (dim < 1) throw profile_error("$.dimension: must be >= 1");
    DiagramSpec spec{DomainContext(dim)};

    auto parse_assertions = [&](const Json& arr, const std::string& path) {
        std::vector<RegularityAssertion> out;
        std::size_t idx = 0;
        for (const Json& a : arr) {
            std::string p = path + "[" + std::to_string(idx++) + "]";
            if (!a.is_object()) throw profile_error(p + ": expected an object");
            out.emplace_back(detail::rat_at(a, "invPz", p), detail::rat_at(a, "z", p));
        }
        return out;
    };

    if (j.contains("region")) {
        const Json& r = j.at("region");
        if (!r.is_object() || !r.contains("assertions") || !r.at("assertions").is_array())
            throw profile_error("$.region: expected {\"assertions\": [...]}");
        auto gens = parse_assertions(r.at("assertions"), "$.region.assertions");
        spec.region = close(RegularityRegion::from_generators(std::move(gens)), spec.ctx);
    }
    if (j.contains("assertions")) {
        if (!j.at("assertions").is_array()) throw profile_error("$.assertions: expected an array");
        spec.assertion_marks = parse_assertions(j.at("assertions"), "$.assertions");
    }
    if (j.contains("points")) {
        std::size_t idx = 0;
        for (const Json& p : j.at("points")) {
            std::string path = "$.points[" + std::to_string(idx++) + "]";
            if (!p.is_object()) throw profile_error(path + ": expected an object");
            LabeledPoint lp{DiagramPoint(detail::rat_at(p, "x", path), detail::rat_at(p, "y", path)),
                            p.value("label", std::string()), p.value("open", true)};
            spec.points.push_back(std::move(lp));
        }
    }
    if (j.contains("lines")) {
        std::size_t idx = 0;
        for (const Json& l : j.at("lines")) {
            std::string path = "$.lines[" + std::to_string(idx++) + "]";
            if (!l.is_object()) throw profile_error(path + ": expected an object");
            std::optional<Line> line;
            if (l.contains("through")) {
                const Json& pts = l.at("through");
                if (!pts.is_array() || pts.size() != 2)
                    throw profile_error(path + ".through: expected two points");
                DiagramPoint p1(detail::rat_at(pts.at(0), "x", path),
                                detail::rat_at(pts.at(0), "y", path));
                DiagramPoint p2(detail::rat_at(pts.at(1), "x", path),
                                detail::rat_at(pts.at(1), "y", path));
                line = line_through(p1, p2);
            } else {
                line = Line(detail::rat_at(l, "a", path), detail::rat_at(l, "b", path),
                            detail::rat_at(l, "c", path));
            }
            spec.lines.push_back({*line, l.value("style", std::string("solid")),
                                  l.value("label", std::string())});
        }
    }
    if (j.contains("rays")) {
        std::size_t idx = 0;
        for (const Json& r : j.at("rays")) {
            std::string path = "$.rays[" + std::to_string(idx++) + "]";
            AdaptivityRay ray{detail::rat_at(r, "invP", path), ExtRat(0), std::string()};
            if (auto s = detail::rat_opt(r, "shift", path)) ray.shift = *s;
            ray.label = r.value("label", std::string());
            spec.rays.push_back(std::move(ray));
        }
    }
    if (j.contains("viewport")) {
        const Json& v = j.at("viewport");
        spec.viewport = Viewport{detail::rat_at(v, "xMin", "$.viewport"),
                                 detail::rat_at(v, "xMax", "$.viewport"),
                                 detail::rat_at(v, "yMin", "$.viewport"),
                                 detail::rat_at(v, "yMax", "$.viewport")};
    }
    return spec;
}

// --- case-study diagrams ------------------------------------------------

inline DiagramSpec poisson_diagram(const PoissonCase& c, const PoissonReport& report) {
    DomainContext ctx(c.dim);
    DiagramSpec spec{ctx};
    spec.region = poisson_region(c);
    ExtRat cutoff(c.dim + 1, c.dim - 1);
    spec.viewport = Viewport{ExtRat(-1, 4), cutoff + ExtRat(1, 2), ExtRat(-1, 2),
                             cutoff + ExtRat(3, 2)};
    spec.rays.push_back({c.inv_p, ExtRat(0), "1/ρ ↦ d(1/ρ − 1/p)"});
    spec.lines.push_back(
        {Line::from_point_slope(DiagramPoint(ExtRat(0), ExtRat(1)), ExtRat(1)), "dotted",
         "1/ρ ↦ 1+1/ρ"});
    spec.lines.push_back({Line(ExtRat(0), ExtRat(1), report.s_bar), "dashed", ""});
    spec.lines.push_back({Line(ExtRat(0), ExtRat(1), report.alpha_bar), "dashed", ""});
    spec.points.push_back({DiagramPoint(c.inv_p, report.s_bar), "s̄_p", true});
    spec.points.push_back(
        {DiagramPoint(report.alpha_bar / ExtRat(c.dim) + c.inv_p, report.alpha_bar), "ᾱ_p", true});
    return spec;
}

inline DiagramSpec ppoisson_diagram(const PPoissonCase& c, const PPoissonReport& report) {
    DomainContext ctx(c.dim);
    DiagramSpec spec{ctx};
    ExtRat s_bar = c.s_bar_hypothesis.value();
    ExtRat inv_pz = report.p_z.reciprocal();
    spec.assertion_marks.emplace_back(inv_pz, report.z);
    spec.points.push_back({DiagramPoint(c.inv_p, s_bar), "s̄_p", true});
    spec.rays.push_back({c.inv_p, ExtRat(0), "1/ρ ↦ d(1/ρ − 1/p)"});
    ExtRat top = report.bound ? *report.bound : s_bar + ExtRat(1);
    if (report.bound) {
        spec.lines.push_back({line_through(DiagramPoint(inv_pz, report.z),
                                           DiagramPoint(c.inv_p, s_bar)),
                              "dashed", ""});
        spec.lines.push_back({Line(ExtRat(0), ExtRat(1), *report.bound), "dashed", ""});
        spec.points.push_back(
            {DiagramPoint(*report.bound / ExtRat(c.dim) + c.inv_p, *report.bound), "ᾱ_p ≤", true});
    }
    spec.viewport = Viewport{ExtRat(-1, 4), top / ExtRat(c.dim) + c.inv_p + ExtRat(1, 2),
                             ExtRat(-1, 2), top + ExtRat(1)};
    return spec;
}

inline DiagramSpec stokes_diagram(const StokesCase& c, const StokesReport& report) {
    DiagramSpec spec{c.context()};
    ExtRat s_bar = c.s_bar2_hypothesis.value();
    ExtRat over(1, c.dim - 1);
    ExtRat inv_pz0 = ExtRat(1, 2) - report.m * over;  // delta -> 0 assertion abscissa
    ExtRat z0 = report.floor - report.m * over;
    spec.assertion_marks.emplace_back(inv_pz0, z0);
    spec.points.push_back({DiagramPoint(ExtRat(1, 2), s_bar), "s̄_2", true});
    spec.rays.push_back({ExtRat(1, 2), ExtRat(0), "1/ρ ↦ d(1/ρ − 1/2)"});
    ExtRat top = report.bound ? *report.bound : s_bar + ExtRat(1);
    if (report.bound) {
        spec.lines.push_back(
            {line_through(DiagramPoint(inv_pz0, z0), DiagramPoint(ExtRat(1, 2), s_bar)), "dashed",
             ""});
        spec.lines.push_back({Line(ExtRat(0), ExtRat(1), *report.bound), "dashed", ""});
        spec.points.push_back(
            {DiagramPoint(*report.bound / ExtRat(c.dim) + ExtRat(1, 2), *report.bound), "ᾱ_2 ≤",
             true});
    }
    spec.viewport = Viewport{ExtRat(-1, 4), top / ExtRat(c.dim) + ExtRat(1), ExtRat(-1, 2),
                             top + ExtRat(1)};
    return spec;
}

}  // namespace dtcalc
