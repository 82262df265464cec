#pragma once

#include "dtcalc/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace dtcalc {

struct geometry_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct coincident_points : geometry_error {
    using geometry_error::geometry_error;
};
struct degenerate_map : geometry_error {
    using geometry_error::geometry_error;
};
struct pole_in_interval : geometry_error {
    using geometry_error::geometry_error;
};
struct pole_error : geometry_error {
    using geometry_error::geometry_error;
};

/// A point of the DeVore-Triebel diagram: abscissa x = 1/rho >= 0 (finite),
/// ordinate y = smoothness (finite).
struct DiagramPoint {
    ExtRat x;
    ExtRat y;

    DiagramPoint(ExtRat x_, ExtRat y_) : x(std::move(x_)), y(std::move(y_)) {
        if (!x.is_finite() || x.sign() < 0)
            throw geometry_error("diagram abscissa must be finite and >= 0");
        if (!y.is_finite())
            throw geometry_error("diagram ordinate must be finite");
    }

    friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// A line a*x + b*y = c with finite rational coefficients, stored in implicit
/// form so vertical lines (x = const) need no special case. Normalization
/// scales so the first nonzero of (a, b) equals 1, which makes the
/// representative unique.
class Line {
public:
    Line(ExtRat a, ExtRat b, ExtRat c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
        if (!a_.is_finite() || !b_.is_finite() || !c_.is_finite())
            throw geometry_error("line coefficients must be finite");
        if (a_.is_zero() && b_.is_zero())
            throw geometry_error("line requires a nonzero normal");
        const ExtRat& lead = a_.is_zero() ? b_ : a_;
        c_ /= lead;
        b_ /= lead;
        a_ /= lead;
    }

    const ExtRat& a() const { return a_; }
    const ExtRat& b() const { return b_; }
    const ExtRat& c() const { return c_; }

    bool contains(const DiagramPoint& p) const { return a_ * p.x + b_ * p.y == c_; }
    bool is_vertical() const { return b_.is_zero(); }

    /// Slope as a derived quantity, +inf for vertical lines.
    ExtRat slope() const {
        if (is_vertical()) return ExtRat::pos_inf();
        return -(a_ / b_);
    }

    ExtRat y_at(const ExtRat& x) const {
        if (is_vertical()) throw geometry_error("vertical line has no ordinate function");
        return (c_ - a_ * x) / b_;
    }

    static Line from_point_slope(const DiagramPoint& p, const ExtRat& slope) {
        if (slope.is_infinite()) return Line(1, 0, p.x);
        return Line(slope, -1, slope * p.x - p.y);
    }

    friend bool operator==(const Line&, const Line&) = default;

private:
    ExtRat a_, b_, c_;
};

inline Line line_through(const DiagramPoint& p1, const DiagramPoint& p2) {
    if (p1 == p2) throw coincident_points("line_through: points coincide");
    ExtRat a = p2.y - p1.y;
    ExtRat b = p1.x - p2.x;
    return Line(a, b, a * p1.x + b * p1.y);
}

struct ParallelLines {
    friend bool operator==(const ParallelLines&, const ParallelLines&) = default;
};
struct IdenticalLines {
    friend bool operator==(const IdenticalLines&, const IdenticalLines&) = default;
};
using Intersection = std::variant<DiagramPoint, ParallelLines, IdenticalLines>;

/// Exact intersection of two lines. The unique intersection point must lie in
/// the diagram half-plane x >= 0 (DiagramPoint invariant); anything else is a
/// geometry_error because the caller left the diagram.
inline Intersection intersect(const Line& l1, const Line& l2) {
    ExtRat det = l1.a() * l2.b() - l2.a() * l1.b();
    if (det.is_zero()) {
        if (l1 == l2) return IdenticalLines{};
        return ParallelLines{};
    }
    ExtRat x = (l1.c() * l2.b() - l2.c() * l1.b()) / det;
    ExtRat y = (l1.a() * l2.c() - l2.a() * l1.c()) / det;
    return DiagramPoint(x, y);
}

/// One-dimensional Moebius map t -> (a*t + b) / (c*t + d) with finite
/// coefficients and a*d - b*c != 0. On every interval free of the pole the
/// map is strictly monotone; the direction is the sign of the determinant.
class MoebiusMap {
public:
    MoebiusMap(ExtRat a, ExtRat b, ExtRat c, ExtRat d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        if (!a_.is_finite() || !b_.is_finite() || !c_.is_finite() || !d_.is_finite())
            throw geometry_error("Moebius coefficients must be finite");
        if (determinant().is_zero())
            throw degenerate_map("Moebius map requires a*d - b*c != 0");
    }

    ExtRat determinant() const { return a_ * d_ - b_ * c_; }
    bool increasing() const { return determinant().sign() > 0; }

    /// Pole location, or nothing for affine maps (c = 0).
    std::optional<ExtRat> pole() const {
        if (c_.is_zero()) return std::nullopt;
        return -(d_ / c_);
    }

    ExtRat operator()(const ExtRat& t) const {
        ExtRat den = c_ * t + d_;
        if (den.is_zero()) throw pole_error("Moebius map evaluated at its pole");
        return (a_ * t + b_) / den;
    }

    /// Value at an endpoint, as a limit from inside the interval when the
    /// endpoint is the pole itself.
    ExtRat limit_at(const ExtRat& t, bool from_right) const {
        ExtRat den = c_ * t + d_;
        if (!den.is_zero()) return (a_ * t + b_) / den;
        int num_sign = (a_ * t + b_).sign();
        // a pole with vanishing numerator would force det = 0
        int side = from_right ? 1 : -1;
        return num_sign * c_.sign() * side > 0 ? ExtRat::pos_inf() : ExtRat::neg_inf();
    }

private:
    ExtRat a_, b_, c_, d_;
};

enum class Objective { minimum, maximum };

struct ExtremumResult {
    ExtRat value;
    bool attained;    ///< false when the optimum sits at an open endpoint
    ExtRat at;        ///< the endpoint realizing (or approaching) the optimum
};

/// Infimum or supremum of a Moebius map over an interval whose interior is
/// pole-free. For open endpoints the limit value is reported with
/// attained = false; an endpoint pole yields an infinite limit.
inline ExtremumResult moebius_extremum_on_interval(const MoebiusMap& m, const ExtRat& lo,
                                                   const ExtRat& hi, bool lo_open, bool hi_open,
                                                   Objective objective) {
    if (!lo.is_finite() || !hi.is_finite() || !(lo < hi))
        throw geometry_error("extremum interval requires finite lo < hi");
    if (auto p = m.pole(); p && lo < *p && *p < hi)
        throw pole_in_interval("Moebius map has a pole inside the interval");

    ExtRat lo_val = m.limit_at(lo, /*from_right=*/true);
    ExtRat hi_val = m.limit_at(hi, /*from_right=*/false);

    bool pick_lo = objective == Objective::minimum ? lo_val <= hi_val : lo_val >= hi_val;
    const ExtRat& value = pick_lo ? lo_val : hi_val;
    bool open_end = pick_lo ? lo_open : hi_open;
    return ExtremumResult{value, !open_end && value.is_finite(), pick_lo ? lo : hi};
}

}  // namespace dtcalc
