#pragma once

#include "dtcalc/spaces.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace dtcalc {

struct interpolation_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct kind_mismatch : interpolation_error {
    using interpolation_error::interpolation_error;
};
struct location_mismatch : interpolation_error {
    using interpolation_error::interpolation_error;
};
struct theta_out_of_range : interpolation_error {
    using interpolation_error::interpolation_error;
};
struct q_both_infinite : interpolation_error {
    using interpolation_error::interpolation_error;
};

/// One replayable inference step: src embeds into dst by the named rule.
struct ChainStep {
    std::string rule;
    SpaceDescriptor from;
    SpaceDescriptor to;
};

/// Tri-state embedding verdict. NotEmbeds is only ever produced by the two
/// iff-rules ("i" and "v"); everything the sufficient rules cannot reach
/// stays Unknown, which keeps the procedure sound.
struct EmbedVerdict {
    enum class Status : unsigned char { embeds, not_embeds, unknown };

    Status status = Status::unknown;
    std::string rule;
    std::vector<ChainStep> chain;

    bool embeds() const { return status == Status::embeds; }
    bool not_embeds() const { return status == Status::not_embeds; }
    bool unknown() const { return status == Status::unknown; }

    static EmbedVerdict yes(std::string rule_id, std::vector<ChainStep> steps) {
        return {Status::embeds, std::move(rule_id), std::move(steps)};
    }
    static EmbedVerdict no(std::string rule_id) { return {Status::not_embeds, std::move(rule_id), {}}; }
    static EmbedVerdict maybe() { return {}; }
};

namespace detail {

inline bool on_sharp_line(const SpaceDescriptor& a, const SpaceDescriptor& b, int de) {
    ExtRat d(de);
    return a.smoothness - d * a.inv_p == b.smoothness - d * b.inv_p;
}

/// Tries every single rule from src to dst; returns the first applicable one.
inline std::optional<ChainStep> single_rule(const SpaceDescriptor& src, const SpaceDescriptor& dst,
                                            int de) {
    const bool same_sp = src.smoothness == dst.smoothness && src.inv_p == dst.inv_p;

    // B^s_{p,p} = F^s_{p,p}.
    if (same_sp && src.kind != dst.kind && src.inv_q == src.inv_p && dst.inv_q == dst.inv_p)
        return ChainStep{"identity", src, dst};
    // (i): B <-> F at fixed s and p, iff-conditions on the microscopic q's.
    if (same_sp && src.kind != dst.kind) {
        if (src.kind == SpaceKind::besov) {
            if (src.q() <= min(dst.p(), dst.q())) return ChainStep{"i", src, dst};
        } else {
            if (max(src.p(), src.q()) <= dst.q()) return ChainStep{"i", src, dst};
        }
    }
    // (ii): F -> F along the sharp Sobolev line, p increasing, q's arbitrary.
    if (src.kind == SpaceKind::triebel_lizorkin && dst.kind == SpaceKind::triebel_lizorkin &&
        src.inv_p > dst.inv_p && dst.inv_p.sign() > 0 && on_sharp_line(src, dst, de))
        return ChainStep{"ii", src, dst};
    // (iii): same scale, same s and p, q nondecreasing.
    if (src.kind == dst.kind && same_sp && src.inv_q >= dst.inv_q)
        return ChainStep{"iii", src, dst};
    // (iv): strict smoothness gap beats any q and any kind.
    if (src.smoothness - dst.smoothness > ExtRat(de) * max(src.inv_p - dst.inv_p, ExtRat(0)))
        return ChainStep{"iv", src, dst};
    // (v): sharp line with strict p increase, iff-conditions against the F-side p.
    if (src.kind == SpaceKind::besov && dst.kind == SpaceKind::triebel_lizorkin &&
        src.inv_p > dst.inv_p && on_sharp_line(src, dst, de)) {
        if (src.q() <= dst.p()) return ChainStep{"v", src, dst};
    }
    if (src.kind == SpaceKind::triebel_lizorkin && dst.kind == SpaceKind::besov &&
        src.inv_p > dst.inv_p && on_sharp_line(src, dst, de)) {
        if (src.p() <= dst.q()) return ChainStep{"v", src, dst};
    }
    return std::nullopt;
}

inline bool pattern_i(const SpaceDescriptor& src, const SpaceDescriptor& dst) {
    return src.kind != dst.kind && src.smoothness == dst.smoothness && src.inv_p == dst.inv_p;
}

inline bool pattern_v(const SpaceDescriptor& src, const SpaceDescriptor& dst, int de) {
    return src.kind != dst.kind && src.inv_p > dst.inv_p && on_sharp_line(src, dst, de);
}

inline std::optional<SpaceDescriptor> identity_partner(const SpaceDescriptor& x) {
    if (x.inv_q != x.inv_p) return std::nullopt;
    if (x.kind == SpaceKind::besov && x.inv_p.is_zero()) return std::nullopt;
    SpaceKind other = x.kind == SpaceKind::besov ? SpaceKind::triebel_lizorkin : SpaceKind::besov;
    return SpaceDescriptor(other, x.smoothness, x.inv_p, x.inv_q, x.location);
}

inline bool search_chain(const SpaceDescriptor& node, const SpaceDescriptor& dst, int de,
                         int remaining, std::vector<SpaceDescriptor>& visited,
                         std::vector<ChainStep>& chain) {
    if (remaining <= 0) return false;
    if (auto step = single_rule(node, dst, de)) {
        chain.push_back(*step);
        return true;
    }
    if (remaining == 1) return false;

    auto visit = [&](const SpaceDescriptor& next, const char* rule_id) {
        if (std::find(visited.begin(), visited.end(), next) != visited.end()) return false;
        visited.push_back(next);
        chain.push_back(ChainStep{rule_id, node, next});
        if (search_chain(next, dst, de, remaining - 1, visited, chain)) return true;
        chain.pop_back();
        return false;
    };

    if (auto partner = identity_partner(node)) {
        if (visit(*partner, "identity")) return true;
    }
    // Rule hops land at the target abscissa; the landing q is either the
    // target's own q or q = p so the scale identity can finish on a Besov
    // target. Each candidate is a genuine single-rule application.
    const bool toward_smaller_p = node.inv_p > dst.inv_p;
    ExtRat s_land = node.smoothness - ExtRat(de) * (node.inv_p - dst.inv_p);
    for (const ExtRat& q_land : {dst.inv_q, dst.inv_p}) {
        if (toward_smaller_p && node.kind == SpaceKind::triebel_lizorkin &&
            dst.inv_p.sign() > 0) {
            SpaceDescriptor hop(SpaceKind::triebel_lizorkin, s_land, dst.inv_p, q_land,
                                node.location);
            if (visit(hop, "ii")) return true;
        }
        if (toward_smaller_p && node.kind == SpaceKind::besov && dst.inv_p.sign() > 0 &&
            node.q() <= dst.inv_p.reciprocal()) {
            SpaceDescriptor hop(SpaceKind::triebel_lizorkin, s_land, dst.inv_p, q_land,
                                node.location);
            if (visit(hop, "v")) return true;
        }
        if (toward_smaller_p && node.kind == SpaceKind::triebel_lizorkin &&
            node.p() <= q_land.reciprocal()) {
            SpaceDescriptor hop(SpaceKind::besov, s_land, dst.inv_p, q_land, node.location);
            if (visit(hop, "v")) return true;
        }
        // rule (i) at fixed s and p across the scales
        if (node.inv_p == dst.inv_p && node.inv_p.sign() > 0) {
            if (node.kind == SpaceKind::besov &&
                node.q() <= min(node.p(), q_land.reciprocal())) {
                SpaceDescriptor hop(SpaceKind::triebel_lizorkin, node.smoothness, node.inv_p,
                                    q_land, node.location);
                if (visit(hop, "i")) return true;
            }
            if (node.kind == SpaceKind::triebel_lizorkin &&
                max(node.p(), node.q()) <= q_land.reciprocal()) {
                SpaceDescriptor hop(SpaceKind::besov, node.smoothness, node.inv_p, q_land,
                                    node.location);
                if (visit(hop, "i")) return true;
            }
        }
    }
    return false;
}

}  // namespace detail

/// Decides src -> dst with the embedding rules for Besov / Triebel-Lizorkin
/// scales on bounded Lipschitz domains. Embeds verdicts carry a chain of at
/// most three single-rule steps; NotEmbeds is only emitted when one of the
/// iff-rules applies with its condition violated. Boundary descriptors are
/// compared with effective dimension d - 1; mixed locations are Unknown.
inline EmbedVerdict embed_check(const SpaceDescriptor& src, const SpaceDescriptor& dst,
                                const DomainContext& ctx) {
    if (src.location != dst.location) return EmbedVerdict::maybe();
    const int de = src.effective_dim(ctx);

    if (src == dst) return EmbedVerdict::yes("refl", {ChainStep{"refl", src, dst}});

    if (auto step = detail::single_rule(src, dst, de))
        return EmbedVerdict::yes(step->rule, {*step});

    std::vector<SpaceDescriptor> visited{src};
    std::vector<ChainStep> chain;
    if (detail::search_chain(src, dst, de, 3, visited, chain))
        return EmbedVerdict::yes("composition", std::move(chain));

    if (detail::pattern_i(src, dst)) return EmbedVerdict::no("i");
    if (detail::pattern_v(src, dst, de)) return EmbedVerdict::no("v");
    return EmbedVerdict::maybe();
}

/// Complex interpolation [a0, a1]_theta on a fixed scale: s, 1/p, 1/q are the
/// theta-convex combinations of the endpoint parameters.
inline SpaceDescriptor interpolate(const SpaceDescriptor& a0, const SpaceDescriptor& a1,
                                   const ExtRat& theta) {
    if (a0.kind != a1.kind) throw kind_mismatch("interpolation endpoints must share the scale");
    if (a0.location != a1.location)
        throw location_mismatch("interpolation endpoints must share the location");
    if (!theta.is_finite() || theta.sign() <= 0 || theta >= ExtRat(1))
        throw theta_out_of_range("theta must lie in (0, 1)");
    if (a0.inv_q.is_zero() && a1.inv_q.is_zero())
        throw q_both_infinite("interpolation requires min{q0, q1} < inf");
    ExtRat co = ExtRat(1) - theta;
    return SpaceDescriptor(a0.kind, co * a0.smoothness + theta * a1.smoothness,
                           co * a0.inv_p + theta * a1.inv_p, co * a0.inv_q + theta * a1.inv_q,
                           a0.location);
}

/// The diagram image of theta -> [a0, a1]_theta: both coordinates are affine
/// in theta, so the image is the straight segment between the endpoints.
class InterpolationSegment {
public:
    InterpolationSegment(SpaceDescriptor a0, SpaceDescriptor a1)
        : a0_(std::move(a0)), a1_(std::move(a1)) {
        interpolate(a0_, a1_, ExtRat(1, 2));  // validates the endpoint pair
    }

    DiagramPoint point_at(const ExtRat& theta) const {
        if (!theta.is_finite() || theta.sign() <= 0 || theta >= ExtRat(1))
            throw theta_out_of_range("theta must lie in (0, 1)");
        ExtRat co = ExtRat(1) - theta;
        return DiagramPoint(co * a0_.inv_p + theta * a1_.inv_p,
                            co * a0_.smoothness + theta * a1_.smoothness);
    }

    SpaceDescriptor space_at(const ExtRat& theta) const { return interpolate(a0_, a1_, theta); }

    const SpaceDescriptor& left() const { return a0_; }
    const SpaceDescriptor& right() const { return a1_; }

private:
    SpaceDescriptor a0_;
    SpaceDescriptor a1_;
};

}  // namespace dtcalc
