#include "dtcalc/bounds.hpp"
#include "dtcalc/casestudies.hpp"
#include "dtcalc/profile.hpp"
#include "dtcalc/rules.hpp"
#include "dtcalc/serialize.hpp"
#include "dtcalc/svg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace dtcalc;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInconsistent = 3;

ExtRat inv_of(const std::string& p_text) { return ExtRat::parse(p_text).reciprocal(); }

std::string pretty(const ExtRat& v, bool decimal) {
    return decimal ? v.str() + " (" + decimal_6sig(v) + ")" : v.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw profile_error("cannot open output file: " + path);
    out << content;
}

Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw profile_error("cannot open input file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw profile_error(std::string("JSON parse error: ") + e.what());
    }
}

void emit_report(const Json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

struct EmbedArgs {
    std::string src, dst;
    int dim = 2;
};

int run_embed(const EmbedArgs& a) {
    SpaceDescriptor src = SpaceDescriptor::parse(a.src);
    SpaceDescriptor dst = SpaceDescriptor::parse(a.dst);
    EmbedVerdict v = embed_check(src, dst, DomainContext(a.dim));
    switch (v.status) {
        case EmbedVerdict::Status::embeds:
            std::cout << "Embeds [" << (v.rule == "composition" ? "composition" : "rule " + v.rule)
                      << "]\n";
            std::cout << chain_to_json(v.chain).dump() << "\n";
            break;
        case EmbedVerdict::Status::not_embeds:
            std::cout << "NotEmbeds [rule " << v.rule << "]\n";
            break;
        case EmbedVerdict::Status::unknown:
            std::cout << "Unknown\n";
            break;
    }
    return kExitOk;
}

struct InterpolateArgs {
    std::string a, b, theta;
};

int run_interpolate(const InterpolateArgs& args) {
    SpaceDescriptor a = SpaceDescriptor::parse(args.a);
    SpaceDescriptor b = SpaceDescriptor::parse(args.b);
    std::cout << interpolate(a, b, ExtRat::parse(args.theta)).str() << "\n";
    return kExitOk;
}

struct ProfileArgs {
    std::string path, out, svg;
};

int run_profile_cmd(const ProfileArgs& a) {
    ProfileDocument doc = parse_profile(load_json(a.path));
    Json report = run_profile(doc);
    emit_report(report, a.out);
    if (!a.svg.empty()) write_file(a.svg, render_svg(profile_diagram(doc)));
    return kExitOk;
}

struct BoundAlphaArgs {
    int dim = 2;
    std::string p, sbar, pz, z, shift = "0";
};

int run_bound_alpha(const BoundAlphaArgs& a) {
    BoundInput in(DomainContext(a.dim), inv_of(a.p), ExtRat::parse(a.sbar), inv_of(a.pz),
                  ExtRat::parse(a.z));
    std::cout << to_json(alpha_upper_bound(in, ExtRat::parse(a.shift))).dump(2) << "\n";
    return kExitOk;
}

struct BoundSLowerArgs {
    int dim = 2;
    std::string p, pz, z, alpha;
};

int run_bound_s_lower(const BoundSLowerArgs& a) {
    ExtRat v = s_lower_bound(ExtRat::parse(a.alpha), inv_of(a.p), inv_of(a.pz),
                             ExtRat::parse(a.z), a.dim);
    std::cout << Json{{"result", v.str()}}.dump(2) << "\n";
    return kExitOk;
}

struct BoundSTransferArgs {
    std::string p, sbar, pz, z, phat;
};

int run_bound_s_transfer(const BoundSTransferArgs& a) {
    ExtRat v = s_transfer_upper_bound(ExtRat::parse(a.sbar), inv_of(a.p), ExtRat::parse(a.z),
                                      inv_of(a.pz), inv_of(a.phat));
    std::cout << Json{{"result", v.str()}}.dump(2) << "\n";
    return kExitOk;
}

struct CaseArgs {
    std::string name;
    int dim = 2;
    std::string p, sbar, eps = "1", sigma, sbar2, component = "velocity";
    bool json = false;
    std::string svg;
    bool decimal = false;
};

int run_case(const CaseArgs& a) {
    if (a.name == "poisson") {
        if (a.p.empty()) throw profile_error("case poisson requires --p");
        PoissonCase c(a.dim, inv_of(a.p));
        PoissonReport report = poisson_indices(c);
        if (a.json)
            std::cout << to_json(report).dump(2) << "\n";
        else
            std::cout << "s̄_p = " << pretty(report.s_bar, a.decimal) << ", ᾱ_p = "
                      << pretty(report.alpha_bar, a.decimal) << "\n";
        if (!a.svg.empty()) write_file(a.svg, render_svg(poisson_diagram(c, report)));
        return kExitOk;
    }
    if (a.name == "ppoisson") {
        if (a.p.empty() || a.sbar.empty())
            throw profile_error("case ppoisson requires --p and --sbar");
        PPoissonCase c(a.dim, inv_of(a.p), ExtRat::parse(a.sbar));
        PPoissonReport report = ppoisson_case_split(c);
        if (a.json)
            std::cout << to_json(report).dump(2) << "\n";
        else if (report.case_id == 1)
            std::cout << "case 1: ᾱ_p ≤ " << pretty(*report.bound, a.decimal) << "\n";
        else
            std::cout << "case 2: 1+1/p ≤ s̄_p ≤ ᾱ_p; no bound from this route\n";
        if (!a.svg.empty()) write_file(a.svg, render_svg(ppoisson_diagram(c, report)));
        return kExitOk;
    }
    if (a.name == "stokes") {
        if (a.sigma.empty() || a.sbar2.empty())
            throw profile_error("case stokes requires --sigma and --sbar2");
        StokesCase c(a.dim, ExtRat::parse(a.eps), ExtRat::parse(a.sigma), ExtRat::parse(a.sbar2));
        StokesComponent component;
        if (a.component == "velocity")
            component = StokesComponent::velocity;
        else if (a.component == "pressure")
            component = StokesComponent::pressure;
        else
            throw profile_error("--component must be velocity or pressure");
        StokesReport report = stokes_bound(c, component);
        const char* index = component == StokesComponent::velocity ? "ᾱ₂" : "ᾱ₂(π)";
        if (a.json)
            std::cout << to_json(report).dump(2) << "\n";
        else if (report.case_id == 1)
            std::cout << "case 1: " << index << " ≤ " << pretty(*report.bound, a.decimal) << "\n";
        else
            std::cout << "case 2: s̄₂ ≥ " << pretty(report.floor + report.m, a.decimal)
                      << "; no bound from this route\n";
        if (!a.svg.empty()) write_file(a.svg, render_svg(stokes_diagram(c, report)));
        return kExitOk;
    }
    throw profile_error("unknown case: " + a.name);
}

struct DiagramArgs {
    std::string path, svg;
};

int run_diagram(const DiagramArgs& a) {
    DiagramSpec spec = diagram_from_json(load_json(a.path));
    write_file(a.svg, render_svg(spec));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dtcalc: exact calculus for smoothness spaces in DeVore-Triebel diagrams"};
    app.require_subcommand(1);
    bool decimal = false;
    app.add_flag("--decimal", decimal,
                 "append 6-significant-digit decimals to human-readable output");

    EmbedArgs embed_args;
    CLI::App* embed_cmd = app.add_subcommand("embed", "decide an embedding between two spaces");
    embed_cmd->add_option("src", embed_args.src, "source space, e.g. B^{2}_{2,2}")->required();
    embed_cmd->add_option("dst", embed_args.dst, "target space")->required();
    embed_cmd->add_option("--d", embed_args.dim, "ambient dimension")->required();

    InterpolateArgs interp_args;
    CLI::App* interp_cmd =
        app.add_subcommand("interpolate", "complex interpolation of two spaces");
    interp_cmd->add_option("a", interp_args.a, "first endpoint")->required();
    interp_cmd->add_option("b", interp_args.b, "second endpoint")->required();
    interp_cmd->add_option("--theta", interp_args.theta, "parameter in (0,1)")->required();

    ProfileArgs profile_args;
    CLI::App* profile_cmd =
        app.add_subcommand("profile", "answer queries against a regularity profile");
    profile_cmd->add_option("path", profile_args.path, "profile JSON document")->required();
    profile_cmd->add_option("--out", profile_args.out, "write the JSON report here");
    profile_cmd->add_option("--svg", profile_args.svg, "also draw the diagram");

    CLI::App* bound_cmd = app.add_subcommand("bound", "bound computations");
    bound_cmd->require_subcommand(1);
    BoundAlphaArgs ba;
    CLI::App* bound_alpha = bound_cmd->add_subcommand("alpha", "upper bound for the adaptivity limit");
    bound_alpha->add_option("--d", ba.dim)->required();
    bound_alpha->add_option("--p", ba.p)->required();
    bound_alpha->add_option("--sbar", ba.sbar)->required();
    bound_alpha->add_option("--pz", ba.pz)->required();
    bound_alpha->add_option("--z", ba.z)->required();
    bound_alpha->add_option("--shift", ba.shift);
    BoundSLowerArgs bl;
    CLI::App* bound_lower = bound_cmd->add_subcommand("s-lower", "lower bound for the Sobolev limit");
    bound_lower->add_option("--d", bl.dim)->required();
    bound_lower->add_option("--p", bl.p)->required();
    bound_lower->add_option("--pz", bl.pz)->required();
    bound_lower->add_option("--z", bl.z)->required();
    bound_lower->add_option("--alpha", bl.alpha)->required();
    BoundSTransferArgs bt;
    CLI::App* bound_transfer =
        bound_cmd->add_subcommand("s-transfer", "transfer the Sobolev limit to larger p");
    bound_transfer->add_option("--p", bt.p)->required();
    bound_transfer->add_option("--sbar", bt.sbar)->required();
    bound_transfer->add_option("--pz", bt.pz)->required();
    bound_transfer->add_option("--z", bt.z)->required();
    bound_transfer->add_option("--phat", bt.phat)->required();

    CaseArgs case_args;
    CLI::App* case_cmd = app.add_subcommand("case", "run a built-in case study");
    case_cmd->add_option("name", case_args.name, "poisson | ppoisson | stokes")->required();
    case_cmd->add_option("--d", case_args.dim)->required();
    case_cmd->add_option("--p", case_args.p);
    case_cmd->add_option("--sbar", case_args.sbar);
    case_cmd->add_option("--eps", case_args.eps);
    case_cmd->add_option("--sigma", case_args.sigma);
    case_cmd->add_option("--sbar2", case_args.sbar2);
    case_cmd->add_option("--component", case_args.component);
    case_cmd->add_flag("--json", case_args.json, "emit the structured JSON report");
    case_cmd->add_option("--svg", case_args.svg, "draw the case diagram");

    DiagramArgs diagram_args;
    CLI::App* diagram_cmd = app.add_subcommand("diagram", "render a diagram document to SVG");
    diagram_cmd->add_option("path", diagram_args.path, "diagram JSON document")->required();
    diagram_cmd->add_option("--svg", diagram_args.svg, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (embed_cmd->parsed()) return run_embed(embed_args);
        if (interp_cmd->parsed()) return run_interpolate(interp_args);
        if (profile_cmd->parsed()) return run_profile_cmd(profile_args);
        if (bound_cmd->parsed()) {
            if (bound_alpha->parsed()) return run_bound_alpha(ba);
            if (bound_lower->parsed()) return run_bound_s_lower(bl);
            if (bound_transfer->parsed()) return run_bound_s_transfer(bt);
        }
        if (case_cmd->parsed()) {
            case_args.decimal = decimal;
            return run_case(case_args);
        }
        if (diagram_cmd->parsed()) return run_diagram(diagram_args);
    } catch (const inconsistent_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
