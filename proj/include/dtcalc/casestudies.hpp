#pragma once

#include "dtcalc/bounds.hpp"
#include "dtcalc/envelope.hpp"
#include "dtcalc/rules.hpp"
#include "dtcalc/spaces.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dtcalc {

struct hypothesis_below_floor : std::domain_error {
    using std::domain_error::domain_error;
};

/// A data-chain replay failed at a specific link.
struct chain_broken : std::runtime_error {
    chain_broken(std::string datum_, std::size_t link_, const SpaceDescriptor& from_,
                 const SpaceDescriptor& to_)
        : std::runtime_error("embedding chain broken for datum '" + datum_ + "' at link " +
                             std::to_string(link_) + ": " + from_.str() + " -> " + to_.str()),
          datum(std::move(datum_)), link(link_), from(from_), to(to_) {}
    std::string datum;
    std::size_t link;
    SpaceDescriptor from;
    SpaceDescriptor to;
};

// --- Dirichlet Laplacian with smooth right-hand sides ------------------------

struct PoissonCase {
    int dim;
    ExtRat inv_p;

    PoissonCase(int d, ExtRat invP) : dim(d), inv_p(std::move(invP)) {
        if (dim < 2) throw std::domain_error("Poisson case requires d >= 2");
        if (!(inv_p.sign() > 0 && inv_p < ExtRat(1)))
            throw std::domain_error("Poisson case requires 1 < p < inf");
    }
};

/// Known regularity region of the solution set: solutions lie in B^r_{q,q}
/// for all 0 < r < 1 + 1/q and 0 < 1/q < (d+1)/(d-1). The generator family
/// is infinite; the region is represented exactly by its closed-form
/// envelope r = 1/q + 1 up to the cutoff abscissa.
inline RegularityRegion poisson_region(const PoissonCase& c) {
    DomainContext ctx(c.dim);
    ExtRat cutoff(c.dim + 1, c.dim - 1);
    std::vector<DiagramPoint> bps;
    bps.emplace_back(ExtRat(0), ExtRat(1));
    bps.emplace_back(cutoff, cutoff + ExtRat(1));
    return RegularityRegion::from_envelope(std::move(bps), ctx);
}

struct PoissonReport {
    ExtRat s_bar;
    ExtRat alpha_bar;
    std::vector<std::string> formulas;
};

/// Limit indices (s_bar, alpha_bar) = (1 + 1/p, (1 + 1/p) d/(d-1)), computed
/// three ways that must agree exactly: the closed forms, the envelope of
/// poisson_region, and the two-index bound with an arbitrary auxiliary
/// abscissa.
inline PoissonReport poisson_indices(const PoissonCase& c) {
    DomainContext ctx(c.dim);
    ExtRat s_bar = ExtRat(1) + c.inv_p;
    ExtRat alpha_bar = s_bar * ExtRat(c.dim) / ExtRat(c.dim - 1);

    RegularityRegion region = poisson_region(c);
    if (limit_s(region, c.inv_p) != s_bar)
        throw std::logic_error("poisson envelope route disagrees on s_bar");
    if (limit_alpha(region, c.inv_p, ctx) != alpha_bar)
        throw std::logic_error("poisson envelope route disagrees on alpha_bar");

    ExtRat inv_pz = c.inv_p / ExtRat(2);
    BoundResult via_bound =
        alpha_upper_bound(BoundInput(ctx, c.inv_p, s_bar, inv_pz, ExtRat(1) + inv_pz));
    if (via_bound.outcome != BoundResult::Outcome::finite || *via_bound.value != alpha_bar)
        throw std::logic_error("poisson two-index route disagrees on alpha_bar");

    return {std::move(s_bar), std::move(alpha_bar),
            {"poisson.closed-form", "poisson.envelope", "two-index-bound"}};
}

// --- p-Laplacian on polyhedral domains ---------------------------------------

struct PPoissonCase {
    int dim;
    ExtRat inv_p;
    std::optional<ExtRat> s_bar_hypothesis;

    PPoissonCase(int d, ExtRat invP, std::optional<ExtRat> sBar = std::nullopt)
        : dim(d), inv_p(std::move(invP)), s_bar_hypothesis(std::move(sBar)) {
        if (dim < 2) throw std::domain_error("p-Poisson case requires d >= 2");
        if (!(inv_p > ExtRat(1, 2) && inv_p < ExtRat(1)))
            throw std::domain_error("p-Poisson case requires 1 < p < 2");
    }
};

/// Gained integrability p_z = p / (1 - (2 - p)/(2d)) in which solutions keep
/// smoothness up to 3/2; strictly larger than p for p < 2.
inline ExtRat ppoisson_pz(int dim, const ExtRat& inv_p) {
    if (dim < 2) throw std::domain_error("p_z requires d >= 2");
    if (!(inv_p >= ExtRat(1, 2) && inv_p < ExtRat(1)))
        throw std::domain_error("p_z requires 1 < p <= 2");
    ExtRat inv_pz = inv_p - (ExtRat(2) * inv_p - ExtRat(1)) / ExtRat(2 * dim);
    ExtRat p_z = inv_pz.reciprocal();
    if (inv_p > ExtRat(1, 2) && !(inv_pz < inv_p))
        throw std::logic_error("p_z must be strictly larger than p for p < 2");
    return p_z;
}

inline ExtRat ppoisson_pz(const PPoissonCase& c) { return ppoisson_pz(c.dim, c.inv_p); }

struct PPoissonReport {
    int case_id;                  ///< 1: finite bound, 2: no bound from this route
    ExtRat p_z;
    ExtRat z;                     ///< assertion top 3/2
    ExtRat ceiling;               ///< 1 + 1/p separating the cases
    std::optional<ExtRat> bound;
    std::optional<ExtRat> mu;
    std::vector<std::string> formulas;
};

/// Case split on the hypothesis s_bar: below 1 + 1/p the two-index bound with
/// the p_z assertion is finite and equals s_bar (1 + 1/p - 3/2)/(1 + 1/p - s_bar);
/// from 1 + 1/p upward the assertion carries no extra information.
inline PPoissonReport ppoisson_case_split(const PPoissonCase& c) {
    if (!c.s_bar_hypothesis)
        throw std::domain_error("case split needs an s_bar hypothesis");
    const ExtRat& s_bar = *c.s_bar_hypothesis;
    const ExtRat floor(3, 2);
    if (s_bar < floor)
        throw hypothesis_below_floor("p-Poisson hypothesis must satisfy s_bar >= 3/2");

    PPoissonReport report;
    report.p_z = ppoisson_pz(c);
    report.z = floor;
    report.ceiling = ExtRat(1) + c.inv_p;
    report.formulas = {"ppoisson.pz", "two-index-bound", "ppoisson.case1-closed-form"};

    if (s_bar >= report.ceiling) {
        report.case_id = 2;
        report.formulas = {"ppoisson.pz", "consistency-chain"};
        return report;
    }

    report.case_id = 1;
    DomainContext ctx(c.dim);
    BoundInput in(ctx, c.inv_p, s_bar, report.p_z.reciprocal(), floor);
    BoundResult r = alpha_upper_bound(in);
    if (r.outcome != BoundResult::Outcome::finite)
        throw std::logic_error("p-Poisson case 1 must produce a finite bound");
    ExtRat closed = s_bar * (report.ceiling - floor) / (report.ceiling - s_bar);
    if (*r.value != closed)
        throw std::logic_error("p-Poisson closed form disagrees with the two-index bound");
    report.bound = *r.value;
    report.mu = r.mu;
    return report;
}

/// Lower bound for s_bar induced by an adaptivity level alpha >= 3/2:
/// (1 + 1/p) alpha / (alpha + 1/p - 1/2). Strictly increasing in alpha with
/// fixed point 3/2 and supremum 1 + 1/p (reported for alpha = +inf, never
/// attained).
inline ExtRat ppoisson_shat(const ExtRat& inv_p, const ExtRat& alpha) {
    if (!(inv_p > ExtRat(1, 2) && inv_p < ExtRat(1)))
        throw std::domain_error("shat requires 1 < p < 2");
    if (alpha < ExtRat(3, 2)) throw std::domain_error("shat requires alpha >= 3/2");
    if (alpha.is_pos_inf()) return ExtRat(1) + inv_p;
    return (ExtRat(1) + inv_p) * alpha / (alpha + inv_p - ExtRat(1, 2));
}

// --- Stationary Stokes system ------------------------------------------------

struct StokesCase {
    int dim;
    ExtRat epsilon;
    ExtRat sigma;
    std::optional<ExtRat> s_bar2_hypothesis;

    StokesCase(int d, ExtRat eps, ExtRat sigma_, std::optional<ExtRat> sBar2 = std::nullopt)
        : dim(d), epsilon(std::move(eps)), sigma(std::move(sigma_)),
          s_bar2_hypothesis(std::move(sBar2)) {
        if (dim < 2) throw std::domain_error("Stokes case requires d >= 2");
        DomainContext probe(dim, epsilon);  // validates epsilon in (0, 1]
        if (!sigma.is_finite() || sigma.sign() <= 0)
            throw std::domain_error("Stokes case requires finite sigma > 0");
    }

    DomainContext context() const { return DomainContext(dim, epsilon); }
    ExtRat smoothing_margin() const {
        return min(ExtRat(dim - 1) * epsilon / ExtRat(2), sigma);
    }
};

struct Interval {
    ExtRat lo;
    ExtRat hi;
};

/// Integrability window in which the data regularity transfers to the
/// solution: 1/2 - min(eps/2, sigma/(d-1)) <= 1/p <= 1/2 (closed).
inline Interval stokes_admissible_inv_p(const StokesCase& c) {
    ExtRat gain = min(c.epsilon / ExtRat(2), c.sigma / ExtRat(c.dim - 1));
    return {ExtRat(1, 2) - gain, ExtRat(1, 2)};
}

struct ChainLink {
    SpaceDescriptor from;
    SpaceDescriptor to;
    EmbedVerdict verdict;
};

struct DataChainReport {
    std::string datum;
    std::vector<ChainLink> links;
};

/// Replays the three-space embedding chains moving each datum (interior
/// forcing f, interior divergence g, boundary trace h) from its Hilbert-scale
/// space into the integrability-p space the shift theorem consumes. Every
/// link must come back Embeds; otherwise chain_broken reports the failure.
inline std::vector<DataChainReport> stokes_data_chain_check(const StokesCase& c,
                                                            const ExtRat& inv_p,
                                                            const ExtRat& s) {
    if (!(s.sign() > 0 && s < ExtRat(1)))
        throw std::domain_error("chain check requires 0 < s < 1");
    if (!(inv_p.sign() > 0 && inv_p <= ExtRat(1, 2)))
        throw std::domain_error("chain check requires 2 <= p < inf");

    DomainContext ctx = c.context();
    const ExtRat half(1, 2);
    const ExtRat d_minus_1(c.dim - 1);
    const ExtRat& sg = c.sigma;

    auto run_chain = [&](const std::string& datum, std::vector<SpaceDescriptor> nodes)
        -> DataChainReport {
        DataChainReport report{datum, {}};
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
            EmbedVerdict v = embed_check(nodes[i], nodes[i + 1], ctx);
            if (!v.embeds()) throw chain_broken(datum, i + 1, nodes[i], nodes[i + 1]);
            report.links.push_back({nodes[i], nodes[i + 1], std::move(v)});
        }
        return report;
    };

    using SK = SpaceKind;
    std::vector<DataChainReport> out;

    // interior data: sharp hop from the p = 2 axis, then drop the surplus
    auto interior_chain = [&](const std::string& datum, const ExtRat& base) {
        ExtRat target_s = s + inv_p + base;              // smoothness the shift consumes
        ExtRat mid_s = target_s + sg + d_minus_1 * (inv_p - half);
        ExtRat src_s = s + base + half + sg;             // Hilbert-scale datum at 1/2
        return run_chain(datum, {SpaceDescriptor(SK::triebel_lizorkin, src_s, half, half),
                                 SpaceDescriptor(SK::triebel_lizorkin, mid_s, inv_p, half),
                                 SpaceDescriptor(SK::triebel_lizorkin, target_s, inv_p, half)});
    };
    out.push_back(interior_chain("f", ExtRat(-2)));
    out.push_back(interior_chain("g", ExtRat(-1)));

    // boundary trace, effective dimension d - 1
    ExtRat sb = s + sg - d_minus_1 * (half - inv_p);
    out.push_back(run_chain(
        "h", {SpaceDescriptor(SK::besov, s + sg, half, half, Location::boundary),
              SpaceDescriptor(SK::triebel_lizorkin, s + sg, half, half, Location::boundary),
              SpaceDescriptor(SK::triebel_lizorkin, sb, inv_p, half, Location::boundary),
              SpaceDescriptor(SK::triebel_lizorkin, s, inv_p, inv_p, Location::boundary)}));
    return out;
}

enum class StokesComponent : unsigned char { velocity, pressure };

struct StokesReport {
    StokesComponent component;
    int case_id;
    ExtRat m;       ///< min((d-1) eps / 2, sigma)
    ExtRat floor;   ///< 3/2 for the velocity, 1/2 for the pressure
    std::optional<ExtRat> bound;
    bool attained = false;
    std::vector<std::string> formulas;
};

/// Case split for the Stokes smoothness hypothesis: below floor + m the
/// delta-family of admissible assertions yields the finite bound
/// s_bar2 * d/(d-1) * m/(floor + m - s_bar2) in the delta -> 0 limit, which
/// the closed form reproduces exactly.
inline StokesReport stokes_bound(const StokesCase& c, StokesComponent component) {
    if (!c.s_bar2_hypothesis) throw std::domain_error("Stokes bound needs an s_bar2 hypothesis");
    const ExtRat& s_bar = *c.s_bar2_hypothesis;
    const ExtRat floor = component == StokesComponent::velocity ? ExtRat(3, 2) : ExtRat(1, 2);
    if (s_bar < floor)
        throw hypothesis_below_floor("Stokes hypothesis must satisfy s_bar2 >= " + floor.str());

    StokesReport report;
    report.component = component;
    report.m = c.smoothing_margin();
    report.floor = floor;
    report.formulas = {"stokes.m", "stokes.delta-family", "two-index-bound",
                       "stokes.closed-form"};

    if (s_bar >= floor + report.m) {
        report.case_id = 2;
        report.formulas = {"stokes.m", "consistency-chain"};
        return report;
    }

    report.case_id = 1;
    const int d = c.dim;
    ExtRat closed = s_bar * ExtRat(d) / ExtRat(d - 1) * report.m / (floor + report.m - s_bar);

    ExtRat delta_cap = min(ExtRat(1), (floor + report.m - s_bar) / ExtRat(2));
    ExtRat over(1, d - 1);
    BoundFamily family{c.context(),
                       ExtRat(1, 2),
                       s_bar,
                       /*z=*/{floor - report.m * over, over},
                       /*inv_pz=*/{ExtRat(1, 2) - report.m * over, over},
                       ExtRat(0),
                       delta_cap,
                       /*lo_open=*/true,
                       /*hi_open=*/true};
    BoundResult family_result = best_bound_over_family(family);
    if (family_result.outcome != BoundResult::Outcome::finite || *family_result.value != closed)
        throw std::logic_error("Stokes family infimum disagrees with the closed form");
    report.bound = closed;
    report.attained = family_result.attained.value_or(false);
    return report;
}

}  // namespace dtcalc
