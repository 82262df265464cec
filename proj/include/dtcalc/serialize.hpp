#pragma once

#include "dtcalc/bounds.hpp"
#include "dtcalc/casestudies.hpp"
#include "dtcalc/envelope.hpp"
#include "dtcalc/rules.hpp"

#include <json.hpp>

#include <string>

namespace dtcalc {

using Json = nlohmann::ordered_json;

inline Json to_json(const ExtRat& v) { return v.str(); }

inline Json to_json(const DiagramPoint& p) { return Json::array({p.x.str(), p.y.str()}); }

inline Json chain_to_json(const std::vector<ChainStep>& chain) {
    Json arr = Json::array();
    for (const ChainStep& step : chain)
        arr.push_back(Json{{"rule", step.rule}, {"from", step.from.str()}, {"to", step.to.str()}});
    return arr;
}

inline Json to_json(const EmbedVerdict& v) {
    Json j;
    switch (v.status) {
        case EmbedVerdict::Status::embeds: j["verdict"] = "Embeds"; break;
        case EmbedVerdict::Status::not_embeds: j["verdict"] = "NotEmbeds"; break;
        case EmbedVerdict::Status::unknown: j["verdict"] = "Unknown"; break;
    }
    if (!v.rule.empty()) j["rule"] = v.rule;
    if (!v.chain.empty()) j["chain"] = chain_to_json(v.chain);
    return j;
}

/// {breakpoints, left_slope, right_value}; empty and unbounded regions keep
/// an empty breakpoint list and put the signed infinity in right_value.
inline Json envelope_to_json(const RegularityRegion& region) {
    Json j;
    j["breakpoints"] = Json::array();
    switch (region.state()) {
        case RegularityRegion::State::empty:
            j["left_slope"] = nullptr;
            j["right_value"] = "-inf";
            return j;
        case RegularityRegion::State::infinite:
            j["left_slope"] = nullptr;
            j["right_value"] = "inf";
            return j;
        case RegularityRegion::State::bounded: break;
    }
    const auto& bps = region.breakpoints();
    for (const DiagramPoint& bp : bps) j["breakpoints"].push_back(to_json(bp));
    if (bps.size() >= 2)
        j["left_slope"] = ((bps[1].y - bps[0].y) / (bps[1].x - bps[0].x)).str();
    else
        j["left_slope"] = nullptr;
    j["right_value"] = bps.back().y.str();
    return j;
}

inline Json to_json(const BoundResult& r) {
    Json j;
    switch (r.outcome) {
        case BoundResult::Outcome::finite: j["outcome"] = "finite"; break;
        case BoundResult::Outcome::infinite: j["outcome"] = "infinite"; break;
        case BoundResult::Outcome::no_bound: j["outcome"] = "noBound"; break;
    }
    if (r.value) j["value"] = r.value->str();
    if (r.mu) j["mu"] = r.mu->str();
    j["reason"] = to_string(r.reason);
    if (r.attained) j["attained"] = *r.attained;
    return j;
}

inline Json to_json(const PoissonReport& r) {
    return Json{{"sBar", r.s_bar.str()}, {"alphaBar", r.alpha_bar.str()}, {"formulas", r.formulas}};
}

inline Json to_json(const PPoissonReport& r) {
    Json j{{"case", r.case_id}, {"pz", r.p_z.str()}, {"z", r.z.str()},
           {"ceiling", r.ceiling.str()}};
    if (r.bound) j["bound"] = r.bound->str();
    if (r.mu) j["mu"] = r.mu->str();
    j["formulas"] = r.formulas;
    return j;
}

inline Json to_json(const StokesReport& r) {
    Json j{{"component", r.component == StokesComponent::velocity ? "velocity" : "pressure"},
           {"case", r.case_id},
           {"m", r.m.str()},
           {"floor", r.floor.str()}};
    if (r.bound) {
        j["bound"] = r.bound->str();
        j["attained"] = r.attained;
    }
    j["formulas"] = r.formulas;
    return j;
}

inline Json to_json(const DataChainReport& r) {
    Json links = Json::array();
    for (const ChainLink& link : r.links) {
        Json lj{{"from", link.from.str()}, {"to", link.to.str()}};
        lj["verdict"] = to_json(link.verdict);
        links.push_back(std::move(lj));
    }
    return Json{{"datum", r.datum}, {"links", std::move(links)}};
}

}  // namespace dtcalc
