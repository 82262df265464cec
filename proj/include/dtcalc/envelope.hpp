#pragma once

#include "dtcalc/geometry.hpp"
#include "dtcalc/spaces.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dtcalc {

struct envelope_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// "The solution set lies in B^s_{p,p} for every s < top" -- an open vertical
/// ray at abscissa 1/p. top = +inf encodes unlimited smoothness at that
/// integrability; top = -inf is a degenerate assertion that closure drops.
struct RegularityAssertion {
    ExtRat inv_p;
    ExtRat top;

    RegularityAssertion(ExtRat invP, ExtRat top_) : inv_p(std::move(invP)), top(std::move(top_)) {
        if (!inv_p.is_finite() || inv_p.sign() < 0)
            throw envelope_error("assertion abscissa must be finite and >= 0");
    }

    friend bool operator==(const RegularityAssertion&, const RegularityAssertion&) = default;
};

/// Shadow of a diagram point: flat to the right, slope-d descent to the left.
struct ShadowFragment {
    DiagramPoint apex;
    int dim;

    ExtRat operator()(const ExtRat& x) const {
        if (!x.is_finite() || x.sign() < 0)
            throw envelope_error("shadow evaluated outside the diagram");
        if (x >= apex.x) return apex.y;
        return apex.y - ExtRat(dim) * (apex.x - x);
    }
};

inline ShadowFragment shadow(const DiagramPoint& pt, const DomainContext& ctx) {
    return ShadowFragment{pt, ctx.dim};
}

/// Sampled approximation of an envelope, produced by the brute-force oracle.
struct OracleEnvelope {
    ExtRat x_max;
    std::vector<ExtRat> values;  ///< values[j] approximates U(j * x_max / (values.size()-1))

    ExtRat abscissa(std::size_t j) const {
        return x_max * ExtRat(static_cast<long long>(j)) /
               ExtRat(static_cast<long long>(values.size() - 1));
    }
};

/// Deductive closure of regularity assertions in the (1/p, s)-plane: the
/// upper envelope U is concave and piecewise linear with segment slopes
/// falling from at most d down to the flat tail right of the last generator.
/// Region values use open (sup) semantics throughout: membership holds for
/// every smoothness strictly below U.
class RegularityRegion {
public:
    enum class State : unsigned char { empty, bounded, infinite };

    static RegularityRegion from_generators(std::vector<RegularityAssertion> generators) {
        RegularityRegion r;
        r.generators_ = std::move(generators);
        return r;
    }

    /// Builds an already-closed region from an explicit envelope, for regions
    /// whose generator family is infinite but whose envelope is known in
    /// closed form. Breakpoints must start at x = 0 with concave slopes
    /// inside [0, d]; adjacent collinear segments are rejected as
    /// non-canonical.
    static RegularityRegion from_envelope(std::vector<DiagramPoint> breakpoints,
                                          const DomainContext& ctx) {
        if (breakpoints.empty()) throw envelope_error("explicit envelope needs breakpoints");
        if (!breakpoints.front().x.is_zero())
            throw envelope_error("explicit envelope must start at x = 0");
        ExtRat prev_slope(ctx.dim);
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
            if (!(breakpoints[i].x < breakpoints[i + 1].x))
                throw envelope_error("envelope abscissae must increase");
            ExtRat slope = (breakpoints[i + 1].y - breakpoints[i].y) /
                           (breakpoints[i + 1].x - breakpoints[i].x);
            if (slope.sign() < 0 || slope > ExtRat(ctx.dim))
                throw envelope_error("envelope slopes must lie in [0, d]");
            if (i > 0 && slope >= prev_slope)
                throw envelope_error("envelope must be strictly concave after canonicalization");
            prev_slope = slope;
        }
        RegularityRegion r;
        r.state_ = State::bounded;
        r.breakpoints_ = std::move(breakpoints);
        r.closed_ = true;
        r.closure_dim_ = ctx.dim;
        return r;
    }

    const std::vector<RegularityAssertion>& generators() const { return generators_; }
    bool closed() const { return closed_; }
    State state() const {
        require_closed();
        return state_;
    }
    const std::vector<DiagramPoint>& breakpoints() const {
        require_closed();
        return breakpoints_;
    }
    int closure_dim() const {
        require_closed();
        return closure_dim_;
    }

    /// U(x); -inf on empty regions, +inf on regions with an unlimited ray.
    ExtRat value_at(const ExtRat& x) const {
        require_closed();
        if (!x.is_finite() || x.sign() < 0)
            throw envelope_error("envelope evaluated outside the diagram");
        if (state_ == State::empty) return ExtRat::neg_inf();
        if (state_ == State::infinite) return ExtRat::pos_inf();
        if (x >= breakpoints_.back().x) return breakpoints_.back().y;
        std::size_t lo = 0, hi = breakpoints_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (breakpoints_[mid].x <= x ? lo : hi) = mid;
        }
        const DiagramPoint& a = breakpoints_[lo];
        const DiagramPoint& b = breakpoints_[hi];
        return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
    }

    /// Slope of the segment immediately left of x, when one exists.
    std::optional<ExtRat> left_slope_at(const ExtRat& x) const {
        require_closed();
        if (state_ != State::bounded || x.sign() <= 0) return std::nullopt;
        if (x > breakpoints_.back().x) return ExtRat(0);
        for (std::size_t i = breakpoints_.size() - 1; i-- > 0;) {
            if (breakpoints_[i].x < x) {
                const DiagramPoint& a = breakpoints_[i];
                const DiagramPoint& b = breakpoints_[i + 1];
                return (b.y - a.y) / (b.x - a.x);
            }
        }
        return std::nullopt;  // x == 0
    }

    friend RegularityRegion close(const RegularityRegion& region, const DomainContext& ctx);

private:
    void require_closed() const {
        if (!closed_) throw envelope_error("region must be closed first");
    }

    std::vector<RegularityAssertion> generators_;
    State state_ = State::empty;
    std::vector<DiagramPoint> breakpoints_;
    bool closed_ = false;
    int closure_dim_ = 0;
};

/// Closure under embedding shadows and interpolation segments. The envelope
/// is the least concave majorant of the pointwise supremum of all generator
/// shadows; concavity plus slopes in [0, d] make the result closed under
/// both deduction rules, so a single pass is a fixed point.
inline RegularityRegion close(const RegularityRegion& region, const DomainContext& ctx) {
    if (region.closed_) {
        if (region.closure_dim_ == ctx.dim) return region;
        if (region.generators_.empty() && region.state_ == RegularityRegion::State::bounded)
            throw envelope_error("explicit envelope cannot be re-closed for another dimension");
        RegularityRegion reopened = RegularityRegion::from_generators(region.generators_);
        return close(reopened, ctx);
    }

    RegularityRegion out;
    out.generators_ = region.generators_;
    out.closed_ = true;
    out.closure_dim_ = ctx.dim;
    const ExtRat d(ctx.dim);

    std::vector<DiagramPoint> corners;
    for (const RegularityAssertion& g : region.generators_) {
        if (g.top.is_neg_inf()) continue;
        if (g.top.is_pos_inf()) {
            out.state_ = RegularityRegion::State::infinite;
            return out;
        }
        corners.emplace_back(g.inv_p, g.top);
    }
    if (corners.empty()) {
        out.state_ = RegularityRegion::State::empty;
        return out;
    }

    std::sort(corners.begin(), corners.end(), [](const DiagramPoint& a, const DiagramPoint& b) {
        return a.x < b.x || (a.x == b.x && a.y > b.y);
    });
    corners.erase(std::unique(corners.begin(), corners.end(),
                              [](const DiagramPoint& a, const DiagramPoint& b) { return a.x == b.x; }),
                  corners.end());

    // Drop corners lying inside (or on) another corner's shadow cone.
    auto shadow_value = [&](const DiagramPoint& apex, const ExtRat& x) {
        return x >= apex.x ? apex.y : apex.y - d * (apex.x - x);
    };
    std::vector<DiagramPoint> surviving;
    for (std::size_t j = 0; j < corners.size(); ++j) {
        bool dominated = false;
        for (std::size_t i = 0; i < corners.size() && !dominated; ++i)
            dominated = i != j && shadow_value(corners[i], corners[j].x) >= corners[j].y;
        if (!dominated) surviving.push_back(corners[j]);
    }

    // Upper concave hull; collinear middle points are merged away.
    std::vector<DiagramPoint> hull;
    for (const DiagramPoint& c : surviving) {
        while (hull.size() >= 2) {
            const DiagramPoint& a = hull[hull.size() - 2];
            const DiagramPoint& b = hull[hull.size() - 1];
            // keep b only if slope(a,b) > slope(b,c)
            if ((b.y - a.y) * (c.x - b.x) > (c.y - b.y) * (b.x - a.x)) break;
            hull.pop_back();
        }
        hull.push_back(c);
    }

    out.state_ = RegularityRegion::State::bounded;
    if (hull.front().x.sign() > 0)
        out.breakpoints_.emplace_back(ExtRat(0), hull.front().y - d * hull.front().x);
    out.breakpoints_.insert(out.breakpoints_.end(), hull.begin(), hull.end());
    return out;
}

/// Limit Sobolev regularity read off the envelope at abscissa 1/p. The
/// defining supremum ranges over s > 0 only, so envelopes at or below zero
/// report the empty supremum -inf.
inline ExtRat limit_s(const RegularityRegion& region, const ExtRat& inv_p) {
    ExtRat v = region.value_at(inv_p);
    return v.sign() > 0 ? v : ExtRat::neg_inf();
}

/// Limit adaptivity regularity at base integrability 1/p: the ordinate at
/// which the slope-d adaptivity ray from (1/p, shift) leaves the region's
/// reach. When the envelope carries genuine information left of the query
/// (left slope < d), that is the intersection of the ray with the supporting
/// line of the envelope at the query point, matching the interpolation
/// geometry of the two-index bound. When the left branch is pure slope-d
/// shadow there is nothing to pivot on and the crossing with the envelope
/// itself is reported. The optional shift moves the ray base for errors
/// measured in a smoothness-r norm instead of the Lebesgue norm.
inline ExtRat limit_alpha(const RegularityRegion& region, const ExtRat& inv_p,
                          const DomainContext& ctx, const ExtRat& shift = ExtRat(0)) {
    if (region.closure_dim() != ctx.dim)
        throw envelope_error("region was closed for a different dimension");
    if (!inv_p.is_finite() || inv_p.sign() < 0)
        throw envelope_error("limit_alpha requires finite 1/p >= 0");
    if (!shift.is_finite() || shift.sign() < 0)
        throw envelope_error("limit_alpha shift must be finite and >= 0");
    if (region.state() == RegularityRegion::State::empty) return ExtRat::neg_inf();
    if (region.state() == RegularityRegion::State::infinite) return ExtRat::pos_inf();

    const ExtRat d(ctx.dim);
    const ExtRat s = region.value_at(inv_p);
    if (s <= shift) return ExtRat::neg_inf();

    if (auto sl = region.left_slope_at(inv_p); sl && *sl < d)
        return shift + d * (s - shift) / (d - *sl);

    // Pure-shadow left branch: intersect the ray with the envelope directly.
    // g(x) = U(x) - ray(x) starts positive at the query and never increases.
    const auto& bps = region.breakpoints();
    ExtRat x_prev = inv_p;
    ExtRat g_prev = s - shift;
    for (const DiagramPoint& bp : bps) {
        if (bp.x <= inv_p) continue;
        ExtRat g_here = bp.y - (shift + d * (bp.x - inv_p));
        if (g_here < ExtRat(0)) {
            ExtRat slope_g = (g_here - g_prev) / (bp.x - x_prev);
            ExtRat x_star = x_prev - g_prev / slope_g;
            return shift + d * (x_star - inv_p);
        }
        x_prev = bp.x;
        g_prev = g_here;
    }
    // No crossing before the flat tail, so the ray meets U at the tail height.
    return bps.back().y;
}

/// Brute-force approximation of the closure on a uniform grid: seed with
/// exact shadow values of the generators, then iterate shadow propagation and
/// pairwise theta-grid interpolation until nothing improves. Every value is a
/// genuine member ordinate, so the result lower-bounds the exact envelope.
inline OracleEnvelope oracle_close(const RegularityRegion& region, const DomainContext& ctx,
                                   int grid_n) {
    if (grid_n < 2) throw envelope_error("oracle grid needs at least two cells");
    const ExtRat d(ctx.dim);

    std::vector<DiagramPoint> corners;
    bool infinite = false;
    for (const RegularityAssertion& g : region.generators()) {
        if (g.top.is_neg_inf()) continue;
        if (g.top.is_pos_inf()) infinite = true;
        else corners.emplace_back(g.inv_p, g.top);
    }

    ExtRat x_max(1);
    for (const DiagramPoint& c : corners) x_max = max(x_max, c.x + ExtRat(1));
    OracleEnvelope oracle{x_max, {}};
    std::size_t n = static_cast<std::size_t>(grid_n) + 1;
    oracle.values.assign(n, infinite ? ExtRat::pos_inf() : ExtRat::neg_inf());
    if (infinite || corners.empty()) return oracle;

    std::vector<ExtRat> xs;
    xs.reserve(n);
    for (std::size_t j = 0; j < n; ++j) xs.push_back(oracle.abscissa(j));
    const ExtRat step = x_max / ExtRat(grid_n);

    auto raise = [&](std::size_t j, const ExtRat& v) {
        if (oracle.values[j].is_neg_inf() || oracle.values[j] < v) {
            oracle.values[j] = v;
            return true;
        }
        return false;
    };

    for (std::size_t j = 0; j < n; ++j)
        for (const DiagramPoint& c : corners)
            raise(j, xs[j] >= c.x ? c.y : c.y - d * (c.x - xs[j]));

    for (int pass = 0; pass < 8; ++pass) {
        bool changed = false;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (j == k) continue;
                ExtRat v = k < j ? oracle.values[j] - d * (xs[j] - xs[k]) : oracle.values[j];
                changed |= raise(k, v);
            }

        for (std::size_t j = 0; j + 1 < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                for (int t = 1; t < grid_n; ++t) {
                    ExtRat theta(t, grid_n);
                    ExtRat x = (ExtRat(1) - theta) * xs[j] + theta * xs[k];
                    ExtRat v = (ExtRat(1) - theta) * oracle.values[j] + theta * oracle.values[k];
                    BigRational cell = (x / step).value();
                    BigInt m_idx = numerator(cell) / denominator(cell);
                    auto m = static_cast<std::size_t>(m_idx.convert_to<long long>());
                    changed |= raise(m, v - d * (x - xs[m]));
                }
            }
        }
        if (!changed) break;
    }
    return oracle;
}

}  // namespace dtcalc
