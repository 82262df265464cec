#include "dtcalc/profile.hpp"
#include "dtcalc/serialize.hpp"
#include "dtcalc/svg.hpp"

#include <catch_amalgamated.hpp>

using namespace dtcalc;

namespace {

Json two_ray_profile() {
    return Json::parse(R"({
      "dimension": 2,
      "assertions": [
        {"invPz": "1/2", "z": "3/2"},
        {"invPz": "1/4", "z": "5/4"}
      ],
      "queries": [
        {"kind": "limit_s", "invP": "1/2"},
        {"kind": "limit_alpha", "invP": "1/2"},
        {"kind": "alpha_upper", "invP": "1/2", "sBar": "3/2", "invPz": "1/4", "z": "5/4"},
        {"kind": "s_lower", "invP": "1/2", "invPz": "1/4", "z": "5/4", "alpha": "3"},
        {"kind": "s_transfer", "invP": "1/2", "sBar": "3/2", "invPz": "1", "z": "2", "invPhat": "1/4"}
      ]
    })");
}

}  // namespace

TEST_CASE("profile run answers every query") {
    ProfileDocument doc = parse_profile(two_ray_profile());
    Json report = run_profile(doc);
    CHECK(report["answers"]["limit_s"] == "3/2");
    CHECK(report["answers"]["limit_alpha"] == "3");
    CHECK(report["answers"]["alpha_upper"] == "3");
    CHECK(report["answers"]["s_lower"] == "3/2");
    CHECK(report["answers"]["s_transfer"] == "5/4");
    CHECK(report["results"].size() == 5);
    CHECK(report["envelope"]["breakpoints"].size() == 3);
    CHECK(report["envelope"]["right_value"] == "3/2");
    CHECK(report["envelope"]["left_slope"] == "2");
}

TEST_CASE("profile with no assertions reports the empty supremum") {
    Json doc = Json::parse(R"({"dimension": 2, "assertions": [],
                               "queries": [{"kind": "limit_s", "invP": "1/2"}]})");
    Json report = run_profile(parse_profile(doc));
    CHECK(report["answers"]["limit_s"] == "-inf");
    CHECK(report["envelope"]["right_value"] == "-inf");
}

TEST_CASE("inconsistent bound query propagates as inconsistent_input") {
    Json doc = Json::parse(R"({"dimension": 2,
      "queries": [{"kind": "alpha_upper", "invP": "1/2", "sBar": "3/2", "invPz": "1/4", "z": "2"}]})");
    CHECK_THROWS_AS(run_profile(parse_profile(doc)), inconsistent_input);
}

TEST_CASE("profile parsing reports the offending path") {
    Json doc = Json::parse(R"({"dimension": 2, "assertions": [{"invPz": "x", "z": "1"}]})");
    try {
        parse_profile(doc);
        FAIL("expected profile_error");
    } catch (const profile_error& e) {
        CHECK(std::string(e.what()).find("$.assertions[0].invPz") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_profile(Json::parse(R"({"dimension": "two"})")), profile_error);
    CHECK_THROWS_AS(parse_profile(Json::parse(R"({"dimension": 2, "queries": [{"kind": "nope"}]})")),
                    profile_error);
    CHECK_THROWS_AS(
        parse_profile(Json::parse(R"({"dimension": 2, "queries": [{"kind": "limit_s"}]})")),
        profile_error);
    // integer literals are accepted wherever rationals are
    Json ints = Json::parse(R"({"dimension": 2, "assertions": [{"invPz": 0, "z": 2}],
                                "queries": [{"kind": "limit_s", "invP": 0}]})");
    CHECK(run_profile(parse_profile(ints))["answers"]["limit_s"] == "2");
}

TEST_CASE("verdict and chain serialization") {
    DomainContext d2(2);
    EmbedVerdict v = embed_check(SpaceDescriptor::parse("B^{2}_{2,2}"),
                                 SpaceDescriptor::parse("B^{1}_{4,4}"), d2);
    Json j = to_json(v);
    CHECK(j["verdict"] == "Embeds");
    CHECK(j["chain"][0]["rule"] == "iv");
    CHECK(j["chain"][0]["from"] == "B^{2}_{2,2}");
    CHECK(j["chain"][0]["to"] == "B^{1}_{4,4}");
}

TEST_CASE("bound result serialization shapes") {
    DomainContext d2(2);
    Json fin = to_json(
        alpha_upper_bound(BoundInput(d2, ExtRat(1, 2), ExtRat(3, 2), ExtRat(1, 4), ExtRat(5, 4))));
    CHECK(fin["outcome"] == "finite");
    CHECK(fin["value"] == "3");
    CHECK(fin["mu"] == "1");
    CHECK(fin["reason"] == "zAboveMu");

    Json no = to_json(
        alpha_upper_bound(BoundInput(d2, ExtRat(1, 2), ExtRat(2), ExtRat(1, 4), ExtRat(5, 4))));
    CHECK(no["outcome"] == "noBound");
    CHECK_FALSE(no.contains("value"));
    CHECK(no["reason"] == "zBelowOrEqualMu");
}

TEST_CASE("decimal renderings are exact and fixed-width") {
    CHECK(fixed_decimal(ExtRat(3, 2), 2) == "1.50");
    CHECK(fixed_decimal(ExtRat(-7, 3), 4) == "-2.3333");
    CHECK(fixed_decimal(ExtRat(1, 200), 2) == "0.01");  // round half away from zero
    CHECK(fixed_decimal(ExtRat(0), 2) == "0.00");
    CHECK(decimal_6sig(ExtRat(20, 13)) == "1.53846");
    CHECK(decimal_6sig(ExtRat(3)) == "3.00000");
    CHECK(decimal_6sig(ExtRat(1, 300)) == "0.00333333");
    CHECK(decimal_6sig(ExtRat(-22, 7)) == "-3.14286");
    CHECK(decimal_6sig(ExtRat(1234567)) == "1234567");
}

TEST_CASE("diagram rendering is deterministic and validates the viewport") {
    ProfileDocument doc = parse_profile(two_ray_profile());
    DiagramSpec spec = profile_diagram(doc);
    std::string first = render_svg(spec);
    std::string second = render_svg(spec);
    CHECK(first == second);
    CHECK(first.find("<svg") != std::string::npos);
    CHECK(first.find("1/\xcf\x81") != std::string::npos);  // axis label

    spec.viewport = Viewport{ExtRat(0), ExtRat(1, 8), ExtRat(0), ExtRat(1, 8)};
    CHECK_THROWS_AS(render_svg(spec), diagram_error);
    spec.viewport = Viewport{ExtRat(1), ExtRat(0), ExtRat(0), ExtRat(1)};
    CHECK_THROWS_AS(render_svg(spec), diagram_error);
}

TEST_CASE("diagram documents parse into full specs") {
    Json doc = Json::parse(R"({
      "dimension": 2,
      "region": {"assertions": [{"invPz": "1/2", "z": "3/2"}, {"invPz": "1/4", "z": "5/4"}]},
      "assertions": [{"invPz": "1/2", "z": "3/2"}],
      "points": [{"x": "1/2", "y": "3/2", "label": "top", "open": true}],
      "lines": [{"through": [{"x": "0", "y": "1"}, {"x": "1", "y": "2"}], "style": "dashed"}],
      "rays": [{"invP": "1/2"}],
      "viewport": {"xMin": "-1/4", "xMax": "3", "yMin": "-1/2", "yMax": "4"}
    })");
    DiagramSpec spec = diagram_from_json(doc);
    CHECK(spec.region.has_value());
    CHECK(spec.points.size() == 1);
    CHECK(spec.lines.size() == 1);
    CHECK(spec.rays.size() == 1);
    std::string svg = render_svg(spec);
    CHECK(svg.find("polygon") != std::string::npos);

    CHECK_THROWS_AS(diagram_from_json(Json::parse(R"({"dimension": 0})")), profile_error);
}

TEST_CASE("envelope serialization of the unlimited region") {
    DomainContext d2(2);
    RegularityRegion inf =
        close(RegularityRegion::from_generators({{ExtRat(1, 2), ExtRat::pos_inf()}}), d2);
    Json j = envelope_to_json(inf);
    CHECK(j["right_value"] == "inf");
    CHECK(j["breakpoints"].empty());
}
