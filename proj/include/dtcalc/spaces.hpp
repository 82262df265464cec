#pragma once

#include "dtcalc/geometry.hpp"
#include "dtcalc/rational.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtcalc {

struct invalid_space : std::domain_error {
    using std::domain_error::domain_error;
};
struct alias_out_of_range : invalid_space {
    using invalid_space::invalid_space;
};

/// Ambient setting: dimension d >= 1 and the Lipschitz roughness parameter
/// epsilon in (0, 1] (only consulted by the Stokes case study).
struct DomainContext {
    int dim;
    ExtRat epsilon;

    explicit DomainContext(int d, ExtRat eps = ExtRat(1)) : dim(d), epsilon(std::move(eps)) {
        if (dim < 1) throw std::domain_error("dimension must be >= 1");
        if (!(epsilon.sign() > 0 && epsilon <= ExtRat(1)))
            throw std::domain_error("epsilon must lie in (0, 1]");
    }
};

enum class SpaceKind : unsigned char { besov, triebel_lizorkin };

/// Spaces on the boundary of the domain share the descriptor; they carry an
/// effective dimension of d - 1 in every parameter computation.
enum class Location : unsigned char { interior, boundary };

/// A^s_{p,q} identified by (kind, smoothness, 1/p, 1/q). Reciprocals are the
/// stored coordinates, matching the diagram axes; 1/p = 0 encodes p = inf
/// (Besov only) and 1/q = 0 encodes q = inf.
struct SpaceDescriptor {
    SpaceKind kind;
    ExtRat smoothness;
    ExtRat inv_p;
    ExtRat inv_q;
    Location location = Location::interior;

    SpaceDescriptor(SpaceKind k, ExtRat s, ExtRat invP, ExtRat invQ,
                    Location loc = Location::interior)
        : kind(k), smoothness(std::move(s)), inv_p(std::move(invP)), inv_q(std::move(invQ)),
          location(loc) {
        if (!smoothness.is_finite()) throw invalid_space("smoothness must be finite");
        if (!inv_p.is_finite() || inv_p.sign() < 0) throw invalid_space("1/p must be finite, >= 0");
        if (!inv_q.is_finite() || inv_q.sign() < 0) throw invalid_space("1/q must be finite, >= 0");
        if (kind == SpaceKind::triebel_lizorkin && inv_p.is_zero())
            throw invalid_space("F-spaces require p < inf");
    }

    ExtRat p() const { return inv_p.reciprocal(); }
    ExtRat q() const { return inv_q.reciprocal(); }
    DiagramPoint diagram_point() const { return DiagramPoint(inv_p, smoothness); }
    int effective_dim(const DomainContext& ctx) const {
        return location == Location::boundary ? ctx.dim - 1 : ctx.dim;
    }

    friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;

    /// Canonical rendering "B^{s}_{p,q}" with reduced fractions and the
    /// "inf" token; boundary descriptors carry an "@bd" suffix.
    std::string str() const {
        std::string out = kind == SpaceKind::besov ? "B" : "F";
        out += "^{" + smoothness.str() + "}_{" + p().str() + "," + q().str() + "}";
        if (location == Location::boundary) out += "@bd";
        return out;
    }

    static SpaceDescriptor parse(std::string_view text);
};

/// Classical-space aliases resolved onto the B/F scales (W Sobolev and
/// Sobolev-Slobodeckij, H_p Bessel potential, H Sobolev-Hilbert, L Lebesgue).
struct AliasedSpace {
    enum class Family : unsigned char { sobolev_w, bessel_h, hilbert_h, lebesgue_l };

    Family family;
    ExtRat smoothness;  // unused for lebesgue_l
    ExtRat inv_p;       // unused for hilbert_h
    Location location = Location::interior;

    static AliasedSpace W(ExtRat s, ExtRat invP, Location loc = Location::interior) {
        return {Family::sobolev_w, std::move(s), std::move(invP), loc};
    }
    static AliasedSpace H(ExtRat s, ExtRat invP, Location loc = Location::interior) {
        return {Family::bessel_h, std::move(s), std::move(invP), loc};
    }
    static AliasedSpace Hs(ExtRat s, Location loc = Location::interior) {
        return {Family::hilbert_h, std::move(s), ExtRat(1, 2), loc};
    }
    static AliasedSpace Lp(ExtRat invP, Location loc = Location::interior) {
        return {Family::lebesgue_l, ExtRat(0), std::move(invP), loc};
    }
};

/// Resolves an alias to its canonical descriptor. Idempotent in the sense
/// that the result re-renders and re-parses to itself; inputs outside the
/// alias validity range raise alias_out_of_range instead of being coerced.
inline SpaceDescriptor resolve_alias(const AliasedSpace& a) {
    using Family = AliasedSpace::Family;
    const ExtRat zero(0), one(1);
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw alias_out_of_range(msg);
    };
    switch (a.family) {
        case Family::sobolev_w:
            require(a.inv_p.is_finite() && a.smoothness.is_finite(), "W alias needs finite parameters");
            if (a.smoothness.sign() >= 0 && a.smoothness.is_integer()) {
                require(zero < a.inv_p && a.inv_p < one, "W^m_p requires 1 < p < inf");
                return SpaceDescriptor(SpaceKind::triebel_lizorkin, a.smoothness, a.inv_p,
                                       ExtRat(1, 2), a.location);
            }
            require(a.smoothness.sign() > 0, "fractional W alias requires s > 0 (use the H alias below zero)");
            require(zero < a.inv_p && a.inv_p <= one, "W^s_p (s not integer) requires 1 <= p < inf");
            return SpaceDescriptor(SpaceKind::triebel_lizorkin, a.smoothness, a.inv_p, a.inv_p,
                                   a.location);
        case Family::bessel_h:
            require(zero < a.inv_p && a.inv_p < one, "H^s_p requires 1 < p < inf");
            return SpaceDescriptor(SpaceKind::triebel_lizorkin, a.smoothness, a.inv_p, ExtRat(1, 2),
                                   a.location);
        case Family::hilbert_h:
            return SpaceDescriptor(SpaceKind::besov, a.smoothness, ExtRat(1, 2), ExtRat(1, 2),
                                   a.location);
        case Family::lebesgue_l:
            require(zero < a.inv_p && a.inv_p < one, "L_p alias requires 1 < p < inf");
            return SpaceDescriptor(SpaceKind::triebel_lizorkin, ExtRat(0), a.inv_p, ExtRat(1, 2),
                                   a.location);
    }
    throw alias_out_of_range("unknown alias family");
}

/// sigma_p threshold d * max(1/p - 1, 0) below which spaces may contain
/// non-regular distributions.
inline ExtRat sigma_p(const ExtRat& inv_p, int dim) {
    if (!inv_p.is_finite() || inv_p.sign() < 0)
        throw std::domain_error("sigma_p requires finite 1/p >= 0");
    return ExtRat(dim) * max(inv_p - ExtRat(1), ExtRat(0));
}

/// Point of the adaptivity scale at level alpha for base integrability 1/p:
/// (alpha/d + 1/p, alpha). It lies on the slope-d line through (1/p, 0).
inline DiagramPoint adaptivity_point(const ExtRat& alpha, const ExtRat& inv_p, int dim) {
    if (!(alpha.sign() > 0) || !alpha.is_finite())
        throw std::domain_error("adaptivity level must be finite and > 0");
    if (!inv_p.is_finite() || inv_p.sign() < 0)
        throw std::domain_error("adaptivity base 1/p must be finite and >= 0");
    return DiagramPoint(alpha / ExtRat(dim) + inv_p, alpha);
}

/// The L_p-Sobolev embedding line: slope d through the given point.
inline Line sobolev_line_through(const DiagramPoint& pt, int dim) {
    return Line::from_point_slope(pt, ExtRat(dim));
}

// --- descriptor parsing -----------------------------------------------------

namespace detail {

inline ExtRat parse_token(std::string_view text, std::size_t& i, char terminator,
                          const char* what) {
    std::size_t start = i;
    while (i < text.size() && text[i] != terminator) ++i;
    if (i == text.size())
        throw parse_error(std::string("missing '") + terminator + "' after " + what, start);
    ExtRat value = ExtRat::parse(text.substr(start, i - start));
    ++i;
    return value;
}

inline void expect(std::string_view text, std::size_t& i, std::string_view token) {
    if (text.compare(i, token.size(), token) != 0)
        throw parse_error("expected '" + std::string(token) + "'", i);
    i += token.size();
}

}  // namespace detail

inline SpaceDescriptor SpaceDescriptor::parse(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && text[i] == ' ') ++i;
    if (i == text.size()) throw parse_error("empty space descriptor", i);

    Location loc = Location::interior;
    if (text.size() >= 3 && text.substr(text.size() - 3) == "@bd") {
        loc = Location::boundary;
        text = text.substr(0, text.size() - 3);
    }

    char head = text[i++];
    auto inv_of = [](const ExtRat& v) { return v.reciprocal(); };

    if (head == 'B' || head == 'F') {
        detail::expect(text, i, "^{");
        ExtRat s = detail::parse_token(text, i, '}', "smoothness");
        detail::expect(text, i, "_{");
        ExtRat p = detail::parse_token(text, i, ',', "integrability");
        ExtRat q = detail::parse_token(text, i, '}', "microscopic parameter");
        if (i != text.size()) throw parse_error("trailing characters after descriptor", i);
        return SpaceDescriptor(head == 'B' ? SpaceKind::besov : SpaceKind::triebel_lizorkin, s,
                               inv_of(p), inv_of(q), loc);
    }
    if (head == 'W' || head == 'H') {
        detail::expect(text, i, "^{");
        ExtRat s = detail::parse_token(text, i, '}', "smoothness");
        if (i == text.size() && head == 'H') return resolve_alias(AliasedSpace::Hs(s, loc));
        detail::expect(text, i, "_{");
        ExtRat p = detail::parse_token(text, i, '}', "integrability");
        if (i != text.size()) throw parse_error("trailing characters after descriptor", i);
        auto alias = head == 'W' ? AliasedSpace::W(s, inv_of(p), loc)
                                 : AliasedSpace::H(s, inv_of(p), loc);
        return resolve_alias(alias);
    }
    if (head == 'L') {
        detail::expect(text, i, "_{");
        ExtRat p = detail::parse_token(text, i, '}', "integrability");
        if (i != text.size()) throw parse_error("trailing characters after descriptor", i);
        return resolve_alias(AliasedSpace::Lp(inv_of(p), loc));
    }
    throw parse_error("unknown space letter (expected B, F, W, H, or L)", i - 1);
}

}  // namespace dtcalc
