#include "dtcalc/envelope.hpp"

#include "dtcalc/bounds.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace dtcalc;

namespace {

RegularityRegion two_ray(const ExtRat& x1, const ExtRat& z1, const ExtRat& x2, const ExtRat& z2) {
    return RegularityRegion::from_generators({{x1, z1}, {x2, z2}});
}

std::mt19937_64 rng(4242);

ExtRat rr(long long lo, long long hi, long long den_max = 8) {
    std::uniform_int_distribution<long long> num(lo, hi);
    std::uniform_int_distribution<long long> den(1, den_max);
    return ExtRat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("shadow fragments: flat right, slope-d left") {
    DomainContext d2(2);
    ShadowFragment f = shadow(DiagramPoint(ExtRat(1, 2), ExtRat(3, 2)), d2);
    CHECK(f(ExtRat(1)) == ExtRat(3, 2));
    CHECK(f(ExtRat(1, 4)) == ExtRat(1));
    CHECK(f(ExtRat(0)) == ExtRat(1, 2));

    ShadowFragment flat = shadow(DiagramPoint(ExtRat(0), ExtRat(7, 3)), d2);
    CHECK(flat(ExtRat(0)) == ExtRat(7, 3));
    CHECK(flat(ExtRat(5)) == ExtRat(7, 3));

    ShadowFragment g = shadow(DiagramPoint(ExtRat(1), ExtRat(2)), d2);
    CHECK(g(ExtRat(0)) == ExtRat(0));
}

TEST_CASE("closure of a single assertion is its shadow") {
    DomainContext d2(2);
    RegularityRegion r = close(RegularityRegion::from_generators({{ExtRat(1, 2), ExtRat(3, 2)}}), d2);
    // U(x) = min(3/2, 2x + 1/2)
    CHECK(r.value_at(ExtRat(0)) == ExtRat(1, 2));
    CHECK(r.value_at(ExtRat(1, 4)) == ExtRat(1));
    CHECK(r.value_at(ExtRat(1, 2)) == ExtRat(3, 2));
    CHECK(r.value_at(ExtRat(7)) == ExtRat(3, 2));
    REQUIRE(r.breakpoints().size() == 2);
}

TEST_CASE("closure of the two-assertion configuration") {
    DomainContext d2(2);
    RegularityRegion r = close(two_ray(ExtRat(1, 2), ExtRat(3, 2), ExtRat(1, 4), ExtRat(5, 4)), d2);
    const auto& bps = r.breakpoints();
    REQUIRE(bps.size() == 3);
    CHECK(bps[0] == DiagramPoint(ExtRat(0), ExtRat(3, 4)));
    CHECK(bps[1] == DiagramPoint(ExtRat(1, 4), ExtRat(5, 4)));
    CHECK(bps[2] == DiagramPoint(ExtRat(1, 2), ExtRat(3, 2)));
    // the chord (slope 1) dominates both shadows between the generators
    CHECK(r.value_at(ExtRat(3, 8)) == ExtRat(11, 8));
}

TEST_CASE("closure drops dominated and degenerate generators") {
    DomainContext d2(2);
    RegularityRegion r = close(RegularityRegion::from_generators({{ExtRat(1, 2), ExtRat(3, 2)},
                                                                  {ExtRat(1), ExtRat(1)},
                                                                  {ExtRat(1, 4), ExtRat::neg_inf()}}),
                               d2);
    // the ray at 1 with top 1 sits inside the first shadow
    REQUIRE(r.breakpoints().size() == 2);
    CHECK(r.breakpoints()[1] == DiagramPoint(ExtRat(1, 2), ExtRat(3, 2)));
}

TEST_CASE("empty and unlimited regions") {
    DomainContext d2(2);
    RegularityRegion empty = close(RegularityRegion::from_generators({}), d2);
    CHECK(empty.state() == RegularityRegion::State::empty);
    CHECK(empty.value_at(ExtRat(1, 2)) == ExtRat::neg_inf());
    CHECK(limit_s(empty, ExtRat(1, 2)) == ExtRat::neg_inf());
    CHECK(limit_alpha(empty, ExtRat(1, 2), d2) == ExtRat::neg_inf());

    RegularityRegion inf =
        close(RegularityRegion::from_generators({{ExtRat(1, 2), ExtRat::pos_inf()}}), d2);
    CHECK(inf.state() == RegularityRegion::State::infinite);
    CHECK(limit_s(inf, ExtRat(1, 4)) == ExtRat::pos_inf());
    CHECK(limit_alpha(inf, ExtRat(1, 4), d2) == ExtRat::pos_inf());
}

TEST_CASE("limit_s reads the envelope with the positive-supremum convention") {
    DomainContext d2(2);
    RegularityRegion r = close(two_ray(ExtRat(1, 2), ExtRat(3, 2), ExtRat(1, 4), ExtRat(5, 4)), d2);
    CHECK(limit_s(r, ExtRat(1, 2)) == ExtRat(3, 2));
    CHECK(limit_s(r, ExtRat(1)) == ExtRat(3, 2));
    CHECK(limit_s(r, ExtRat(1, 8)) == ExtRat(1));

    // single ray at its own abscissa reports its top
    RegularityRegion single = close(RegularityRegion::from_generators({{ExtRat(1, 3), ExtRat(2)}}), d2);
    CHECK(limit_s(single, ExtRat(1, 3)) == ExtRat(2));

    // negative envelope values mean the supremum over s > 0 is empty
    RegularityRegion low = close(RegularityRegion::from_generators({{ExtRat(1), ExtRat(-1)}}), d2);
    CHECK(limit_s(low, ExtRat(1)) == ExtRat::neg_inf());
    CHECK(limit_s(low, ExtRat(0)) == ExtRat::neg_inf());
}

TEST_CASE("limit_alpha on the two-assertion configuration matches the intersection reading") {
    DomainContext d2(2);
    RegularityRegion r = close(two_ray(ExtRat(1, 2), ExtRat(3, 2), ExtRat(1, 4), ExtRat(5, 4)), d2);
    CHECK(limit_alpha(r, ExtRat(1, 2), d2) == ExtRat(3));
}

TEST_CASE("limit_alpha on a single assertion crosses the flat branch") {
    DomainContext d2(2);
    RegularityRegion r = close(RegularityRegion::from_generators({{ExtRat(1, 2), ExtRat(2)}}), d2);
    CHECK(limit_alpha(r, ExtRat(1, 2), d2) == ExtRat(2));
    // base left of the assertion: the ray passes under the left branch and
    // still exits through the flat part
    CHECK(limit_alpha(r, ExtRat(1, 4), d2) == ExtRat(2));
    // base right of the assertion: flat left slope, supporting-line reading
    CHECK(limit_alpha(r, ExtRat(3, 4), d2) == ExtRat(2));
}

TEST_CASE("limit_alpha with a shifted ray base") {
    DomainContext d2(2);
    // envelope r = x + 1 through x = 2 (collinear assertions merge into one chord)
    RegularityRegion r = close(RegularityRegion::from_generators({{ExtRat(1, 4), ExtRat(5, 4)},
                                                                  {ExtRat(1, 2), ExtRat(3, 2)},
                                                                  {ExtRat(1), ExtRat(2)},
                                                                  {ExtRat(2), ExtRat(3)}}),
                               d2);
    CHECK(limit_alpha(r, ExtRat(1, 2), d2, ExtRat(0)) == ExtRat(3));
    CHECK(limit_alpha(r, ExtRat(1, 2), d2, ExtRat(1, 2)) == ExtRat(5, 2));
    // shift at or above the envelope value leaves nothing to gain
    CHECK(limit_alpha(r, ExtRat(1, 2), d2, ExtRat(3, 2)) == ExtRat::neg_inf());
}

TEST_CASE("closure is idempotent and canonical") {
    DomainContext d2(2);
    for (int i = 0; i < 200; ++i) {
        std::vector<RegularityAssertion> gens;
        std::uniform_int_distribution<int> count(0, 5);
        int n = count(rng);
        for (int k = 0; k < n; ++k) {
            ExtRat x = rr(0, 12);
            ExtRat z = rr(-4, 12);
            gens.emplace_back(x.abs(), z);
        }
        RegularityRegion closed = close(RegularityRegion::from_generators(gens), d2);
        RegularityRegion again = close(closed, d2);
        CHECK(closed.state() == again.state());
        CHECK(closed.breakpoints() == again.breakpoints());
    }
}

TEST_CASE("envelope invariants: concavity and slope range") {
    for (int i = 0; i < 300; ++i) {
        std::uniform_int_distribution<int> dim_dist(1, 5);
        DomainContext ctx(dim_dist(rng));
        std::vector<RegularityAssertion> gens;
        std::uniform_int_distribution<int> count(1, 6);
        int n = count(rng);
        for (int k = 0; k < n; ++k) gens.emplace_back(rr(0, 10).abs(), rr(-3, 10));
        RegularityRegion r = close(RegularityRegion::from_generators(gens), ctx);
        if (r.state() != RegularityRegion::State::bounded) continue;
        const auto& bps = r.breakpoints();
        ExtRat prev_slope(ctx.dim);
        for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
            ExtRat slope = (bps[k + 1].y - bps[k].y) / (bps[k + 1].x - bps[k].x);
            CHECK(slope.sign() >= 0);
            CHECK(slope <= ExtRat(ctx.dim));
            CHECK(slope <= prev_slope);
            prev_slope = slope;
        }
        // concavity against chords at interior breakpoints
        for (std::size_t k = 1; k + 1 < bps.size(); ++k) {
            ExtRat chord = bps[k - 1].y + (bps[k + 1].y - bps[k - 1].y) * (bps[k].x - bps[k - 1].x) /
                                              (bps[k + 1].x - bps[k - 1].x);
            CHECK(bps[k].y >= chord);
        }
        // random-triple concavity on the evaluated envelope
        for (int t = 0; t < 5; ++t) {
            ExtRat x1 = rr(0, 8).abs(), x3 = rr(0, 8).abs();
            if (x1 == x3) continue;
            if (x3 < x1) std::swap(x1, x3);
            ExtRat x2 = (x1 + x3) / ExtRat(2);
            ExtRat chord = (r.value_at(x1) + r.value_at(x3)) / ExtRat(2);
            CHECK(r.value_at(x2) >= chord);
        }
    }
}

TEST_CASE("adding a generator never shrinks the envelope") {
    DomainContext d3(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<RegularityAssertion> gens;
        std::uniform_int_distribution<int> count(1, 4);
        int n = count(rng);
        for (int k = 0; k < n; ++k) gens.emplace_back(rr(0, 8).abs(), rr(-2, 8));
        RegularityRegion base = close(RegularityRegion::from_generators(gens), d3);
        gens.emplace_back(rr(0, 8).abs(), rr(-2, 8));
        RegularityRegion bigger = close(RegularityRegion::from_generators(gens), d3);
        if (base.state() != RegularityRegion::State::bounded ||
            bigger.state() != RegularityRegion::State::bounded)
            continue;
        for (const DiagramPoint& bp : base.breakpoints())
            CHECK(bigger.value_at(bp.x) >= bp.y);
        for (const DiagramPoint& bp : bigger.breakpoints())
            CHECK(bigger.value_at(bp.x) >= base.value_at(bp.x));
    }
}

TEST_CASE("oracle approximates the exact envelope within grid resolution") {
    DomainContext d2(2);
    RegularityRegion fixture = two_ray(ExtRat(1, 2), ExtRat(3, 2), ExtRat(1, 4), ExtRat(5, 4));
    RegularityRegion exact = close(fixture, d2);
    OracleEnvelope oracle = oracle_close(fixture, d2, 64);
    for (std::size_t j = 0; j < oracle.values.size(); ++j) {
        ExtRat x = oracle.abscissa(j);
        ExtRat err = exact.value_at(x) - oracle.values[j];
        CHECK(err.sign() >= 0);  // the oracle only produces genuine members
        CHECK(err <= ExtRat(1, 32));
    }
}

TEST_CASE("oracle agreement on random two-ray configurations") {
    std::uniform_int_distribution<int> dim_dist(1, 4);
    const int grid_n = 32;
    int done = 0;
    while (done < 50) {
        int d = dim_dist(rng);
        DomainContext ctx(d);
        ExtRat x1 = rr(0, 8, 6).abs(), x2 = rr(0, 8, 6).abs();
        ExtRat z1 = rr(-2, 8, 6), z2 = rr(-2, 8, 6);
        RegularityRegion fixture = two_ray(x1, z1, x2, z2);
        RegularityRegion exact = close(fixture, ctx);
        if (exact.state() != RegularityRegion::State::bounded) continue;
        OracleEnvelope oracle = oracle_close(fixture, ctx, grid_n);
        ExtRat tolerance = ExtRat(2 * d) * oracle.x_max / ExtRat(grid_n);
        for (std::size_t j = 0; j < oracle.values.size(); ++j) {
            ExtRat err = exact.value_at(oracle.abscissa(j)) - oracle.values[j];
            CHECK(err.sign() >= 0);
            CHECK(err <= tolerance);
        }
        ++done;
    }
}

TEST_CASE("limit_s dominates each assertion top at its own abscissa") {
    std::uniform_int_distribution<int> dim_dist(1, 5);
    std::uniform_int_distribution<int> count(1, 5);
    for (int i = 0; i < 200; ++i) {
        DomainContext ctx(dim_dist(rng));
        std::vector<RegularityAssertion> gens;
        int n = count(rng);
        for (int k = 0; k < n; ++k) gens.emplace_back(rr(0, 8, 6).abs(), rr(1, 8, 4));
        RegularityRegion r = close(RegularityRegion::from_generators(gens), ctx);
        for (const RegularityAssertion& g : gens) {
            CHECK(limit_s(r, g.inv_p) >= g.top);
            CHECK(r.value_at(g.inv_p) >= g.top);
        }
    }
    // equality when nothing else reaches above the assertion
    DomainContext d2(2);
    RegularityRegion lone = close(RegularityRegion::from_generators({{ExtRat(1, 3), ExtRat(2)}}), d2);
    CHECK(limit_s(lone, ExtRat(1, 3)) == ExtRat(2));
}

TEST_CASE("oracle on a single ray is exact on the flat branch") {
    DomainContext d2(2);
    RegularityRegion fixture = RegularityRegion::from_generators({{ExtRat(1, 2), ExtRat(3, 2)}});
    OracleEnvelope oracle = oracle_close(fixture, d2, 32);
    for (std::size_t j = 0; j < oracle.values.size(); ++j)
        if (oracle.abscissa(j) >= ExtRat(1, 2)) CHECK(oracle.values[j] == ExtRat(3, 2));
}

TEST_CASE("oracle of the empty region") {
    DomainContext d2(2);
    OracleEnvelope oracle = oracle_close(RegularityRegion::from_generators({}), d2, 16);
    for (const ExtRat& v : oracle.values) CHECK(v == ExtRat::neg_inf());
}

TEST_CASE("two-ray envelope agrees with the two-index bound") {
    std::uniform_int_distribution<int> dim_dist(2, 5);
    for (int i = 0; i < 60; ++i) {
        int d = dim_dist(rng);
        DomainContext ctx(d);
        ExtRat inv_p = rr(1, 11, 12).abs();
        if (!(inv_p.sign() > 0 && inv_p < ExtRat(1))) continue;
        ExtRat inv_pz = inv_p * rr(0, 6, 7).abs() / ExtRat(8);
        if (!(inv_pz < inv_p)) continue;
        ExtRat s_bar = rr(1, 9, 3).abs() + ExtRat(1, 7);
        ExtRat mu_v = s_bar - ExtRat(d) * (inv_p - inv_pz);
        ExtRat z = max(mu_v, ExtRat(0)) + (s_bar - max(mu_v, ExtRat(0))) * ExtRat(3, 5);
        if (!(z > mu_v && z <= s_bar && z.sign() > 0)) continue;

        RegularityRegion region = close(two_ray(inv_p, s_bar, inv_pz, z), ctx);
        BoundResult bound = alpha_upper_bound(BoundInput(ctx, inv_p, s_bar, inv_pz, z));
        REQUIRE(bound.outcome == BoundResult::Outcome::finite);
        CHECK(limit_alpha(region, inv_p, ctx) == *bound.value);
    }
}

TEST_CASE("re-closing under a different dimension recomputes the envelope") {
    RegularityRegion base = two_ray(ExtRat(1, 2), ExtRat(3, 2), ExtRat(1, 4), ExtRat(5, 4));
    RegularityRegion d2 = close(base, DomainContext(2));
    RegularityRegion d3 = close(d2, DomainContext(3));
    CHECK(d3.closure_dim() == 3);
    CHECK(d3.value_at(ExtRat(0)) == ExtRat(1, 2));  // steeper left branch
    CHECK(d2.value_at(ExtRat(0)) == ExtRat(3, 4));
    // synthetic envelopes carry no generators to recompute from
    RegularityRegion synthetic = RegularityRegion::from_envelope(
        {DiagramPoint(ExtRat(0), ExtRat(1)), DiagramPoint(ExtRat(3), ExtRat(4))}, DomainContext(2));
    CHECK_THROWS_AS(close(synthetic, DomainContext(3)), envelope_error);
}

TEST_CASE("explicit envelopes validate their invariants") {
    DomainContext d2(2);
    CHECK_THROWS_AS(RegularityRegion::from_envelope({}, d2), envelope_error);
    CHECK_THROWS_AS(
        RegularityRegion::from_envelope({DiagramPoint(ExtRat(1, 2), ExtRat(1))}, d2),
        envelope_error);  // must start at x = 0
    CHECK_THROWS_AS(RegularityRegion::from_envelope({DiagramPoint(ExtRat(0), ExtRat(0)),
                                                     DiagramPoint(ExtRat(1), ExtRat(3))},
                                                    d2),
                    envelope_error);  // slope 3 > d
    RegularityRegion ok = RegularityRegion::from_envelope(
        {DiagramPoint(ExtRat(0), ExtRat(1)), DiagramPoint(ExtRat(3), ExtRat(4))}, d2);
    CHECK(ok.value_at(ExtRat(5)) == ExtRat(4));
}
