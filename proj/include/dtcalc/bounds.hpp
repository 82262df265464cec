#pragma once

#include "dtcalc/envelope.hpp"
#include "dtcalc/geometry.hpp"
#include "dtcalc/spaces.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace dtcalc {

/// Raised when a bound query violates the consistency chain z <= s_bar <= alpha_bar.
struct inconsistent_input : std::domain_error {
    using std::domain_error::domain_error;
};

enum class BoundReason : unsigned char {
    z_above_mu,
    z_below_or_equal_mu,
    s_bar_infinite,
    input_inconsistent,
};

inline const char* to_string(BoundReason r) {
    switch (r) {
        case BoundReason::z_above_mu: return "zAboveMu";
        case BoundReason::z_below_or_equal_mu: return "zBelowOrEqualMu";
        case BoundReason::s_bar_infinite: return "sBarInfinite";
        case BoundReason::input_inconsistent: return "inputInconsistent";
    }
    return "unknown";
}

/// Inputs of the two-index bound: the base integrability 1/p in (0, 1), the
/// limit Sobolev regularity s_bar (> 0, possibly +inf), and an auxiliary
/// assertion ray at 1/p_z in [0, 1/p) with top z. Inputs with z > s_bar are
/// rejected at construction: the consistency chain z <= s_bar <= alpha_bar
/// makes them contradictory.
struct BoundInput {
    DomainContext ctx;
    ExtRat inv_p;
    ExtRat s_bar;
    ExtRat inv_pz;
    ExtRat z;

    BoundInput(DomainContext c, ExtRat invP, ExtRat sBar, ExtRat invPz, ExtRat z_)
        : ctx(std::move(c)), inv_p(std::move(invP)), s_bar(std::move(sBar)),
          inv_pz(std::move(invPz)), z(std::move(z_)) {
        if (!inv_p.is_finite() || inv_p.sign() <= 0 || inv_p >= ExtRat(1))
            throw std::domain_error("bound input requires 1 < p < inf, i.e. 1/p in (0, 1)");
        if (!inv_pz.is_finite() || inv_pz.sign() < 0 || inv_pz >= inv_p)
            throw std::domain_error("bound input requires p < p_z <= inf, i.e. 0 <= 1/p_z < 1/p");
        if (s_bar.is_neg_inf() || s_bar.sign() <= 0)
            throw std::domain_error("bound input requires s_bar > 0");
        if (!z.is_finite()) throw std::domain_error("bound input requires finite z");
        if (z > s_bar)
            throw inconsistent_input(
                "assertion top z = " + z.str() + " exceeds s_bar = " + s_bar.str() +
                "; inputs must satisfy the chain z <= s_bar <= alpha_bar");
    }
};

struct BoundResult {
    enum class Outcome : unsigned char { finite, infinite, no_bound };

    Outcome outcome;
    BoundReason reason;
    std::optional<ExtRat> value;
    std::optional<ExtRat> mu;
    std::optional<bool> attained;  ///< set by family optimization only

    static BoundResult finite(ExtRat v, ExtRat mu_value) {
        return {Outcome::finite, BoundReason::z_above_mu, std::move(v), std::move(mu_value), {}};
    }
    static BoundResult infinite() {
        return {Outcome::infinite, BoundReason::s_bar_infinite, {}, {}, {}};
    }
    static BoundResult no_bound(ExtRat mu_value) {
        return {Outcome::no_bound, BoundReason::z_below_or_equal_mu, {}, std::move(mu_value), {}};
    }
};

/// mu(p_z, p, s_bar, d) = s_bar - d (1/p - 1/p_z): the ordinate of the
/// Sobolev embedding line through (1/p, s_bar) at abscissa 1/p_z. The
/// auxiliary assertion carries information exactly when its top exceeds mu.
inline ExtRat mu(const ExtRat& inv_p, const ExtRat& inv_pz, const ExtRat& s_bar, int dim) {
    if (!s_bar.is_finite()) throw std::domain_error("mu requires finite s_bar");
    if (!(inv_pz < inv_p)) throw std::domain_error("mu requires 1/p_z < 1/p");
    return s_bar - ExtRat(dim) * (inv_p - inv_pz);
}

/// Upper bound for the limit adaptivity regularity alpha_bar from s_bar and
/// one auxiliary assertion: the ordinate of the intersection of the line
/// through (1/p_z, z) and (1/p, s_bar) with the adaptivity ray from
/// (1/p, shift). With shift = 0 this is s_bar (s_bar - mu) / (z - mu).
/// z <= mu yields NoBound: such an assertion is already implied by the
/// Sobolev embedding line and carries no information. s_bar = +inf yields
/// Infinite (alpha_bar = +inf follows outright).
inline BoundResult alpha_upper_bound(const BoundInput& in, const ExtRat& shift = ExtRat(0)) {
    if (!shift.is_finite() || shift.sign() < 0)
        throw std::domain_error("bound shift must be finite and >= 0");
    if (in.s_bar.is_pos_inf()) return BoundResult::infinite();
    if (shift >= in.s_bar) throw std::domain_error("bound shift must stay below s_bar");

    ExtRat m = mu(in.inv_p, in.inv_pz, in.s_bar, in.ctx.dim);
    if (in.z <= m) return BoundResult::no_bound(m);

    ExtRat d(in.ctx.dim);
    ExtRat chord_slope = (in.s_bar - in.z) / (in.inv_p - in.inv_pz);
    ExtRat value = shift + d * (in.s_bar - shift) / (d - chord_slope);
    return BoundResult::finite(std::move(value), std::move(m));
}

/// Lower bound for s_bar from a known adaptivity level alpha and an
/// auxiliary assertion right of the query: alpha (z + d(1/p - 1/p_z)) /
/// (alpha + d(1/p - 1/p_z)).
inline ExtRat s_lower_bound(const ExtRat& alpha, const ExtRat& inv_p, const ExtRat& inv_pz,
                            const ExtRat& z, int dim) {
    if (!alpha.is_finite() || alpha.sign() <= 0)
        throw std::domain_error("s_lower_bound requires finite alpha > 0");
    if (!(inv_pz >= ExtRat(0) && inv_pz < inv_p))
        throw std::domain_error("s_lower_bound requires 0 <= 1/p_z < 1/p");
    ExtRat gap = ExtRat(dim) * (inv_p - inv_pz);
    return alpha * (z + gap) / (alpha + gap);
}

/// Transfers s_bar at p to an upper bound for the limit regularity at some
/// larger integrability p_hat: the ordinate at 1/p_hat of the line through
/// (1/p_z, z) and (1/p, s_bar), for p_z < p < p_hat and z > s_bar.
inline ExtRat s_transfer_upper_bound(const ExtRat& s_bar_p, const ExtRat& inv_p, const ExtRat& z,
                                     const ExtRat& inv_pz, const ExtRat& inv_phat) {
    if (!(inv_pz > inv_p && inv_p >= inv_phat && inv_phat.sign() >= 0))
        throw geometry_error("s_transfer requires 1/p_z > 1/p >= 1/p_hat >= 0");
    if (!(z > s_bar_p)) throw geometry_error("s_transfer requires z > s_bar_p");
    if (inv_phat == inv_p) return s_bar_p;
    Line through = line_through(DiagramPoint(inv_pz, z), DiagramPoint(inv_p, s_bar_p));
    return through.y_at(inv_phat);
}

/// Affine polynomial c0 + c1 t used to describe bound families.
struct AffineInT {
    ExtRat c0;
    ExtRat c1;

    ExtRat operator()(const ExtRat& t) const { return c0 + c1 * t; }
    static AffineInT constant(ExtRat c) { return {std::move(c), ExtRat(0)}; }
};

/// A one-parameter family of bound inputs over the interval (t_lo, t_hi):
/// s_bar and 1/p are fixed, z and 1/p_z move affinely in t. The induced
/// bound is then a Moebius map of t and its infimum sits at an endpoint.
struct BoundFamily {
    DomainContext ctx;
    ExtRat inv_p;
    ExtRat s_bar;
    AffineInT z;
    AffineInT inv_pz;
    ExtRat t_lo;
    ExtRat t_hi;
    bool lo_open = true;
    bool hi_open = true;
};

/// Infimum of alpha_upper_bound over the family, evaluated exactly through
/// the Moebius endpoint calculus; open endpoints contribute their limit
/// values and the attained flag reports whether the infimum is realized by a
/// family member.
inline BoundResult best_bound_over_family(const BoundFamily& fam) {
    if (!fam.t_lo.is_finite() || !fam.t_hi.is_finite() || !(fam.t_lo < fam.t_hi))
        throw std::domain_error("bound family requires finite t_lo < t_hi");
    if (fam.s_bar.is_pos_inf()) return BoundResult::infinite();

    const ExtRat d(fam.ctx.dim);
    for (const ExtRat& t : {fam.t_lo, fam.t_hi}) {
        ExtRat ipz = fam.inv_pz(t);
        if (ipz.sign() < 0 || ipz > fam.inv_p)
            throw std::domain_error("family leaves the admissible 1/p_z range [0, 1/p]");
        if (fam.z(t) > fam.s_bar)
            throw inconsistent_input("family violates z <= s_bar at an endpoint");
    }

    // numerator s_bar (s_bar - mu(t)), denominator z(t) - mu(t), both affine
    AffineInT num{fam.s_bar * d * (fam.inv_p - fam.inv_pz.c0), -(fam.s_bar * d * fam.inv_pz.c1)};
    AffineInT den{fam.z.c0 - fam.s_bar + d * (fam.inv_p - fam.inv_pz.c0),
                  fam.z.c1 - d * fam.inv_pz.c1};

    ExtRat den_lo = den(fam.t_lo), den_hi = den(fam.t_hi);
    if (den_lo.sign() <= 0 && den_hi.sign() <= 0) {
        ExtRat mu_lo = fam.s_bar - d * (fam.inv_p - fam.inv_pz(fam.t_lo));
        return BoundResult::no_bound(std::move(mu_lo));
    }
    if (den_lo.sign() < 0 || den_hi.sign() < 0)
        throw pole_in_interval("family crosses z = mu inside the interval");
    if ((den_lo.is_zero() && !fam.lo_open) || (den_hi.is_zero() && !fam.hi_open))
        throw pole_in_interval("family contains a z = mu member at a closed endpoint");

    ExtRat det = num.c1 * den.c0 - num.c0 * den.c1;
    if (det.is_zero()) {
        // constant bound, realized by every interior member
        ExtRat t = den_lo.is_zero() ? fam.t_hi : fam.t_lo;
        BoundResult r = BoundResult::finite(num(t) / den(t),
                                            fam.s_bar - d * (fam.inv_p - fam.inv_pz(t)));
        r.attained = true;
        return r;
    }

    MoebiusMap map(num.c1, num.c0, den.c1, den.c0);
    ExtremumResult ext =
        moebius_extremum_on_interval(map, fam.t_lo, fam.t_hi, fam.lo_open, fam.hi_open,
                                     Objective::minimum);
    ExtRat mu_at = fam.s_bar - d * (fam.inv_p - fam.inv_pz(ext.at));
    BoundResult r = BoundResult::finite(ext.value, std::move(mu_at));
    r.attained = ext.attained;
    return r;
}

/// Limit Sobolev regularity of the Dirichlet-Laplace solution set on a plane
/// polygon whose largest interior angle is (angle_ratio * pi): 2/p + 1/angle_ratio.
/// Feeding the resulting profile into alpha_upper_bound always lands in the
/// NoBound branch, consistent with unbounded adaptivity regularity on such
/// domains.
inline ExtRat grisvard_s_bar(const ExtRat& inv_p, const ExtRat& angle_ratio) {
    if (!(inv_p.sign() > 0 && inv_p < ExtRat(1)))
        throw std::domain_error("grisvard_s_bar requires 1 < p < inf");
    if (!(angle_ratio > ExtRat(1) && angle_ratio < ExtRat(2)))
        throw std::domain_error("largest interior angle must lie in (pi, 2 pi)");
    return ExtRat(2) * inv_p + ExtRat(1) / angle_ratio;
}

}  // namespace dtcalc
