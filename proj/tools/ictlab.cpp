#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ictlab/builders.hpp"
#include "ictlab/io.hpp"
#include "ictlab/orbits.hpp"
#include "ictlab/render.hpp"
#include "ictlab/report.hpp"
#include "ictlab/shadowing.hpp"

namespace {

using namespace ictlab;
using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << content;
}

FiniteSystem load_from(const std::string& path) { return load_system(read_file(path)); }

/// Candidate-set file: one set per line, "<name> <id> <id> ...".
std::vector<NamedSet> load_sets(const std::string& path, const FiniteSystem& sys) {
    std::istringstream in(read_file(path));
    std::vector<NamedSet> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        NamedSet ns;
        ns.name = name;
        long long id;
        while (ls >> id) {
            if (id < 0 || id >= sys.size())
                throw std::runtime_error("sets file line " + std::to_string(lineno) + ": id " +
                                         std::to_string(id) + " not in system");
            ns.ids.push_back(static_cast<int>(id));
        }
        if (ns.ids.empty())
            throw std::runtime_error("sets file line " + std::to_string(lineno) + ": empty set");
        ns.ids = make_point_set(std::move(ns.ids));
        out.push_back(std::move(ns));
    }
    return out;
}

json point_json(const FiniteSystem& sys, int id) {
    json coords = json::array();
    for (const Rational& c : sys.point(id)) coords.push_back(c.to_string());
    return coords;
}

int run_gen(const std::string& system, int level, long long grid_q, long long rot_p, int depth,
            int rings, const std::string& out_path) {
    BuildParams p;
    p.level = level;
    p.grid_q = grid_q;
    p.rot_p = rot_p;
    p.depth = depth;
    p.rings = rings;
    BuiltSystem built = build_system(system, p);
    write_file(out_path, save_system(built.system));
    return 0;
}

int run_ict(const std::string& in_path, const std::string& delta_text, bool exhaustive,
            int max_size) {
    FiniteSystem sys = load_from(in_path);
    Rational delta = Rational::parse(delta_text);
    json j;
    j["delta"] = delta.to_string();
    if (exhaustive) {
        SetFamily fam = enumerate_ict(sys, delta, max_size > 0 ? max_size : sys.size());
        json sets = json::array();
        for (const PointSet& s : fam) sets.push_back(s);
        j["ict_sets"] = sets;
        j["count"] = fam.size();
    } else {
        ChainGraph g = build_chain_graph(sys, delta);
        j["edge_count"] = g.edge_count;
        json comps = json::array();
        for (const PointSet& c : chain_components(g)) {
            json e;
            e["size"] = c.size();
            e["ids"] = c;
            comps.push_back(e);
        }
        j["components"] = comps;
        j["count"] = comps.size();
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_limits(const std::string& in_path, int point, bool gamma) {
    FiniteSystem sys = load_from(in_path);
    OrbitSuffix orbit = forward_orbit(sys, point);
    json j;
    j["point"] = point;
    j["coords"] = point_json(sys, point);
    j["forward_tail"] = orbit.tail;
    j["forward_cycle"] = orbit.cycle;
    j["omega"] = omega_limit(sys, point);
    json af = json::array();
    for (const PointSet& s : alpha_family(sys, point)) af.push_back(s);
    j["alpha_family"] = af;
    if (gamma) j["gamma"] = gamma_limit(sys, point);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_shadow(const std::string& in_path, const std::string& direction, const std::string& eps,
               const std::string& delta, int horizon) {
    FiniteSystem sys = load_from(in_path);
    Direction dir;
    if (direction == "forward")
        dir = Direction::forward;
    else if (direction == "backward")
        dir = Direction::backward;
    else if (direction == "two-sided")
        dir = Direction::two_sided;
    else
        throw std::runtime_error("unknown direction \"" + direction + "\"");
    VariantParams params;
    params.epsilon = Rational::parse(eps);
    params.delta = Rational::parse(delta);
    params.horizon = horizon;
    Verdict v = check_shadowing(sys, dir, params.epsilon, params.delta, horizon);
    std::cout << verdict_to_json("shadowing-" + direction, params, v).dump(2) << "\n";
    return v.holds ? 0 : 1;
}

int run_props(const std::string& in_path, const std::string& check, const std::string& delta,
              const std::string& eps, const std::string& tau, const std::string& sets_path) {
    FiniteSystem sys = load_from(in_path);
    VariantParams params;
    params.delta = Rational::parse(delta);
    if (!eps.empty()) params.epsilon = Rational::parse(eps);
    if (!tau.empty()) params.tau = Rational::parse(tau);
    if (!sets_path.empty()) {
        // user-supplied candidates are scanned first, then the default family
        std::vector<NamedSet> family = load_sets(sets_path, sys);
        for (NamedSet& ns : default_candidates(sys, params.delta)) family.push_back(std::move(ns));
        params.candidates = std::move(family);
    }

    Verdict v;
    if (check == "pe")
        v = check_property(sys, PropertyKind::p_e, params);
    else if (check == "pa")
        v = check_property(sys, PropertyKind::p_a, params);
    else if (check == "tols")
        v = check_limit_variant(sys, LimitKind::tols, params);
    else if (check == "dtols")
        v = check_limit_variant(sys, LimitKind::delta_restricted_tols, params);
    else if (check == "gtols")
        v = check_limit_variant(sys, LimitKind::gamma_restricted_tols, params);
    else if (check == "limit")
        v = check_limit_variant(sys, LimitKind::limit_shadowing, params);
    else if (check == "cofinal")
        v = check_cofinal_variant(sys, CofinalKind::cofinal_orbital, params);
    else if (check == "ts-cofinal")
        v = check_cofinal_variant(sys, CofinalKind::two_sided_cofinal, params);
    else if (check == "g-cofinal")
        v = check_cofinal_variant(sys, CofinalKind::gamma_restricted_two_sided_cofinal, params);
    else
        throw std::runtime_error("unknown check \"" + check + "\"");
    std::cout << verdict_to_json(check, params, v).dump(2) << "\n";
    return v.holds ? 0 : 1;
}

int run_render(const std::string& in_path, const std::string& delta, const std::string& format,
               const std::string& out_path) {
    FiniteSystem sys = load_from(in_path);
    std::optional<ChainGraph> graph;
    if (!delta.empty()) graph = build_chain_graph(sys, Rational::parse(delta));
    std::string doc;
    if (format == "dot")
        doc = render_dot(sys, graph ? &*graph : nullptr);
    else if (format == "svg")
        doc = render_svg(sys, graph ? &*graph : nullptr);
    else
        throw std::runtime_error("unknown format \"" + format + "\"");
    write_file(out_path, doc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-resolution limit sets, chain recurrence and shadowing"};
    app.require_subcommand(1);

    std::string system, in_path, out_path, delta, eps, tau, direction, check, format, sets_path;
    int level = 0, depth = 3, rings = 3, horizon = 8, point = 0, max_size = 0;
    long long grid_q = 0, rot_p = 0;
    bool exhaustive = false, gamma = false;

    auto* gen = app.add_subcommand("gen", "generate a built-in system file");
    gen->add_option("--system", system, "square | periodic-cofinal | circle-stack | torus | interval-square | square-sequence")->required();
    gen->add_option("--level", level, "truncation level N (or n_max / k)");
    gen->add_option("--grid-q", grid_q, "circle grid denominator");
    gen->add_option("--rot-p", rot_p, "rotation numerator");
    gen->add_option("--depth", depth, "side depth M (square-sequence)");
    gen->add_option("--rings", rings, "interpolating rings K (square-sequence)");
    gen->add_option("--out", out_path, "output file")->required();

    auto* ict = app.add_subcommand("ict", "chain components / exhaustive ICT sets");
    ict->add_option("--in", in_path)->required();
    ict->add_option("--delta", delta, "jump tolerance, e.g. 1/2^3")->required();
    ict->add_flag("--exhaustive", exhaustive, "enumerate all ICT subsets (exponential)");
    ict->add_option("--max-size", max_size, "size bound for --exhaustive");

    auto* limits = app.add_subcommand("limits", "orbit coding and limit sets of a point");
    limits->add_option("--in", in_path)->required();
    limits->add_option("--point", point, "point id")->required();
    limits->add_flag("--gamma", gamma, "also report the gamma-limit set");

    auto* shadow = app.add_subcommand("shadow", "epsilon-delta shadowing at a finite horizon");
    shadow->add_option("--in", in_path)->required();
    shadow->add_option("--direction", direction, "forward | backward | two-sided")->required();
    shadow->add_option("--eps", eps)->required();
    shadow->add_option("--delta", delta)->required();
    shadow->add_option("--horizon", horizon)->required();

    auto* props = app.add_subcommand("props", "limit-set realization and shadowing variants");
    props->add_option("--in", in_path)->required();
    props->add_option("--check", check, "pe | pa | tols | dtols | gtols | cofinal | ts-cofinal | g-cofinal | limit")->required();
    props->add_option("--delta", delta)->required();
    props->add_option("--eps", eps);
    props->add_option("--tau", tau);
    props->add_option("--sets", sets_path, "extra candidate sets, one \"<name> <id>...\" per line");

    auto* render = app.add_subcommand("render", "export dot or svg");
    render->add_option("--in", in_path)->required();
    render->add_option("--delta", delta, "overlay chain-graph edges at this tolerance");
    render->add_option("--format", format, "dot | svg")->required();
    render->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return run_gen(system, level, grid_q, rot_p, depth, rings, out_path);
        if (ict->parsed()) return run_ict(in_path, delta, exhaustive, max_size);
        if (limits->parsed()) return run_limits(in_path, point, gamma);
        if (shadow->parsed()) return run_shadow(in_path, direction, eps, delta, horizon);
        if (props->parsed()) return run_props(in_path, check, delta, eps, tau, sets_path);
        if (render->parsed()) return run_render(in_path, delta, format, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
