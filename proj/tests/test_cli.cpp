#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ictlab/builders.hpp"
#include "ictlab/io.hpp"
#include "ictlab/shadowing.hpp"

using namespace ictlab;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

std::string temp_dir() {
    static std::string dir = [] {
        std::string d = "/tmp/ictlab_cli_test";
        if (std::system(("mkdir -p " + d).c_str()) != 0) throw std::runtime_error("mkdir failed");
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    std::string out_file = temp_dir() + "/stdout.txt";
    std::string cmd = std::string(ICTLAB_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return {code, buf.str()};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("gen writes byte-identical files on reruns") {
    std::string out = temp_dir() + "/square4.txt";
    REQUIRE(run_cli("gen --system square --level 4 --out " + out).exit_code == 0);
    std::string first = read_file(out);
    REQUIRE(run_cli("gen --system square --level 4 --out " + out).exit_code == 0);
    CHECK(first == read_file(out));
    CHECK(first == save_system(build_square(4).system));

    FiniteSystem loaded = load_system(first);
    CHECK(loaded.size() == build_square(4).system.size());
}

TEST_CASE("usage and file errors exit 2") {
    CHECK(run_cli("props --check pe").exit_code == 2);              // missing required flags
    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("ict --in /nonexistent.txt --delta 1/2^2").exit_code == 2);
    std::string bad = temp_dir() + "/bad.txt";
    {
        std::ofstream f(bad);
        f << "space plane\npoint 0 2/2^1\nmap 0 0\n";
    }
    CHECK(run_cli("ict --in " + bad + " --delta 1/2^2").exit_code == 2);
}

TEST_CASE("props pe on square(4) exits 1 naming the supplied Q candidate") {
    std::string sys_file = temp_dir() + "/sq4.txt";
    REQUIRE(run_cli("gen --system square --level 4 --out " + sys_file).exit_code == 0);

    BuiltSystem bs = build_square(4);
    std::string sets_file = temp_dir() + "/sets.txt";
    {
        std::ofstream f(sets_file);
        for (const NamedSet& ns : bs.sets)
            if (ns.name == "Q") {
                f << "Q_trunc";
                for (int id : ns.ids) f << " " << id;
                f << "\n";
            }
    }
    RunResult r = run_cli("props --in " + sys_file + " --check pe --delta 1/2^3 --tau 0/2^0 --sets " +
                          sets_file);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("\"Q_trunc\"") != std::string::npos);

    // byte-deterministic report
    RunResult again = run_cli("props --in " + sys_file + " --check pe --delta 1/2^3 --tau 0/2^0 --sets " +
                              sets_file);
    CHECK(again.out == r.out);
}

TEST_CASE("props verdict equals the library-level call") {
    std::string sys_file = temp_dir() + "/torus.txt";
    REQUIRE(run_cli("gen --system torus --grid-q 5 --rot-p 2 --out " + sys_file).exit_code == 0);
    RunResult r = run_cli("props --in " + sys_file + " --check pe --delta 1/2^3");
    BuiltSystem bs = build_torus(5, 2);
    VariantParams p;
    p.delta = Rational::dyadic(1, 3);
    Verdict v = check_property(bs.system, PropertyKind::p_e, p);
    CHECK((r.exit_code == 0) == v.holds);
}

TEST_CASE("ict lists components with sizes matching the library") {
    std::string sys_file = temp_dir() + "/stack.txt";
    REQUIRE(run_cli("gen --system circle-stack --level 3 --grid-q 5 --rot-p 2 --out " + sys_file)
                .exit_code == 0);
    RunResult r = run_cli("ict --in " + sys_file + " --delta 1/2^4");
    CHECK(r.exit_code == 0);
    BuiltSystem bs = build_circle_stack(3, 5, 2);
    SetFamily comps = chain_components(build_chain_graph(bs.system, Rational::dyadic(1, 4)));
    CHECK(r.out.find("\"count\": " + std::to_string(comps.size())) != std::string::npos);
}

TEST_CASE("shadow exit codes match the verdict") {
    std::string sys_file = temp_dir() + "/stack48.txt";
    REQUIRE(run_cli("gen --system circle-stack --level 4 --grid-q 8 --rot-p 3 --out " + sys_file)
                .exit_code == 0);
    CHECK(run_cli("shadow --in " + sys_file +
                  " --direction two-sided --eps 1/2^3 --delta 1/3 --horizon 3")
              .exit_code == 1);
    CHECK(run_cli("shadow --in " + sys_file +
                  " --direction forward --eps 1/2^1 --delta 1/2^5 --horizon 6")
              .exit_code == 0);
}

TEST_CASE("limits reports orbit coding and limit sets") {
    std::string sys_file = temp_dir() + "/interval.txt";
    REQUIRE(run_cli("gen --system interval-square --level 4 --out " + sys_file).exit_code == 0);
    RunResult r = run_cli("limits --in " + sys_file + " --point 8 --gamma");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"omega\"") != std::string::npos);
    CHECK(r.out.find("\"gamma\": []") != std::string::npos);  // gamma(1/2) is empty
}

TEST_CASE("render: dot counts and svg error for pure circles") {
    std::string sys_file = temp_dir() + "/torus52.txt";
    REQUIRE(run_cli("gen --system torus --grid-q 5 --rot-p 2 --out " + sys_file).exit_code == 0);
    std::string dot_file = temp_dir() + "/torus.dot";
    REQUIRE(run_cli("render --in " + sys_file + " --format dot --out " + dot_file).exit_code == 0);
    std::string dot = read_file(dot_file);
    std::size_t nodes = 0, edges = 0, pos = 0;
    while ((pos = dot.find("label=", pos)) != std::string::npos) {
        ++nodes;
        ++pos;
    }
    pos = 0;
    while ((pos = dot.find(" -> ", pos)) != std::string::npos) {
        ++edges;
        ++pos;
    }
    CHECK(nodes == 25);
    CHECK(edges == 25);

    // svg for a plane system: one dot per point, one arrow or loop per map edge
    std::string sq_file = temp_dir() + "/sq2.txt";
    REQUIRE(run_cli("gen --system square --level 2 --out " + sq_file).exit_code == 0);
    std::string svg_file = temp_dir() + "/sq2.svg";
    REQUIRE(run_cli("render --in " + sq_file + " --format svg --out " + svg_file).exit_code == 0);
    std::string svg = read_file(svg_file);
    std::size_t lines = 0, loops = 0, markers = 0;
    pos = 0;
    while ((pos = svg.find("<line ", pos)) != std::string::npos) {
        ++lines;
        ++pos;
    }
    pos = 0;
    while ((pos = svg.find("r=\"5\"", pos)) != std::string::npos) {
        ++loops;
        ++pos;
    }
    pos = 0;
    while ((pos = svg.find("r=\"2\"", pos)) != std::string::npos) {
        ++markers;
        ++pos;
    }
    long long n = build_square(2).system.size();
    CHECK(markers == static_cast<std::size_t>(n));
    CHECK(lines + loops == static_cast<std::size_t>(n));

    // chain-graph-only edges render dotted when --delta is given
    std::string dotted_file = temp_dir() + "/torus_delta.dot";
    REQUIRE(run_cli("render --in " + sys_file + " --delta 1/2^1 --format dot --out " + dotted_file)
                .exit_code == 0);
    CHECK(read_file(dotted_file).find("style=dotted") != std::string::npos);

    // a pure circle system has no planar rendering
    std::string circle = temp_dir() + "/circle.txt";
    {
        std::ofstream f(circle);
        f << "space circle q=4\npoint 0 0/2^0\npoint 1 1/2^2\nmap 0 1\nmap 1 0\n";
    }
    CHECK(run_cli("render --in " + circle + " --format svg --out /tmp/x.svg").exit_code == 2);
    CHECK(run_cli("render --in " + circle + " --format dot --out " + temp_dir() + "/c.dot")
              .exit_code == 0);
}
