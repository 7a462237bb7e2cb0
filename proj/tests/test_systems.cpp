#include <catch2/catch_amalgamated.hpp>

#include "ictlab/builders.hpp"
#include "ictlab/io.hpp"
#include "oracle_helpers.hpp"

using namespace ictlab;

namespace {

Rational dy(long long n, int k) { return Rational::dyadic(n, k); }

const NamedSet& named(const BuiltSystem& bs, const std::string& name) {
    for (const NamedSet& ns : bs.sets)
        if (ns.name == name) return ns;
    throw std::runtime_error("no named set " + name);
}

int id_at(const FiniteSystem& sys, Coords c) {
    int id = sys.find(c);
    REQUIRE(id >= 0);
    return id;
}

}  // namespace

TEST_CASE("square: point count matches the independent enumeration") {
    for (int n : {2, 3, 5}) {
        BuiltSystem bs = build_square(n);
        CHECK(bs.system.size() == oracle::square_point_count(n));
        CHECK(bs.system.min_gap() > Rational(0));
        CHECK_FALSE(bs.system.bijective());  // clamping breaks injectivity
    }
    CHECK(oracle::square_point_count(2) == 93);
}

TEST_CASE("square: paper-pinned map values and fixed points") {
    BuiltSystem bs = build_square(4);
    const FiniteSystem& sys = bs.system;

    // f(0,1) = (-1/2, 1); (0,0), the four vertices and (0,2) are fixed
    CHECK(sys.image(id_at(sys, {Rational(0), Rational(1)})) ==
          id_at(sys, {dy(-1, 1), Rational(1)}));
    for (Coords c : std::vector<Coords>{{Rational(0), Rational(0)},
                                        {Rational(1), Rational(1)},
                                        {Rational(-1), Rational(1)},
                                        {Rational(-1), Rational(-1)},
                                        {Rational(1), Rational(-1)},
                                        {Rational(0), Rational(2)}}) {
        int id = id_at(sys, c);
        CHECK(sys.image(id) == id);
    }

    // first inner ring follows the anticlockwise walk
    CHECK(sys.image(id_at(sys, {Rational(0), dy(1, 1)})) == id_at(sys, {dy(-1, 1), dy(1, 1)}));
    CHECK(sys.image(id_at(sys, {dy(-1, 1), dy(1, 1)})) == id_at(sys, {dy(-1, 1), Rational(0)}));
    CHECK(sys.image(id_at(sys, {dy(1, 1), Rational(0)})) == id_at(sys, {dy(1, 1), dy(1, 1)}));
    // inner ring corner exits outward to the next ring
    CHECK(sys.image(id_at(sys, {dy(1, 1), dy(1, 1)})) == id_at(sys, {dy(1, 1), dy(3, 2)}));

    // exterior ring hop: (-1/2, 5/4) -> (-1/2, 3/2), and R_1 walks anticlockwise
    CHECK(sys.image(id_at(sys, {dy(-1, 1), dy(5, 2)})) == id_at(sys, {dy(-1, 1), dy(3, 1)}));
    CHECK(sys.image(id_at(sys, {dy(-1, 1), dy(3, 1)})) == id_at(sys, {dy(-3, 1), dy(3, 1)}));
    CHECK(sys.image(id_at(sys, {dy(3, 1), dy(3, 1)})) == id_at(sys, {dy(1, 1), dy(3, 1)}));
    // (0, 3/2) feeds the apex ladder instead of continuing around R_1
    CHECK(sys.image(id_at(sys, {Rational(0), dy(3, 1)})) == id_at(sys, {Rational(0), dy(7, 2)}));
}

TEST_CASE("square: forward orbits terminate within |points| steps") {
    BuiltSystem bs = build_square(3);
    for (int x = 0; x < bs.system.size(); ++x) {
        int v = x;
        std::vector<bool> seen(bs.system.size(), false);
        int steps = 0;
        while (!seen[v]) {
            seen[v] = true;
            v = bs.system.image(v);
            ++steps;
        }
        CHECK(steps <= bs.system.size());
    }
}

TEST_CASE("circle stack: fibers, bijectivity, cycle structure") {
    BuiltSystem bs = build_circle_stack(3, 5, 2);
    const FiniteSystem& sys = bs.system;
    CHECK(sys.size() == 20);  // 4 fibers x 5 points
    CHECK(sys.bijective());
    int fibers = 0;
    for (const NamedSet& ns : bs.sets)
        if (ns.name.rfind("fiber-", 0) == 0) {
            ++fibers;
            CHECK(ns.ids.size() == 5);
            // each fiber is one 5-cycle: gcd(2,5)=1
            int v = ns.ids[0];
            int steps = 0;
            do {
                v = sys.image(v);
                ++steps;
            } while (v != ns.ids[0]);
            CHECK(steps == 5);
        }
    CHECK(fibers == 4);
    CHECK_THROWS_AS(build_circle_stack(3, 6, 2), std::invalid_argument);  // gcd != 1
}

TEST_CASE("image and preimages reject unknown ids") {
    BuiltSystem bs = build_interval_square(3);
    CHECK_THROWS_AS(bs.system.image(bs.system.size()), std::out_of_range);
    CHECK_THROWS_AS(bs.system.preimages(-1), std::out_of_range);
}

TEST_CASE("torus builder is a permutation with consistent preimages") {
    BuiltSystem bs = build_torus(5, 2);
    const FiniteSystem& sys = bs.system;
    CHECK(sys.size() == 25);
    CHECK(sys.bijective());
    for (int x = 0; x < sys.size(); ++x) {
        CHECK(sys.preimages(x).size() == 1);
        for (int y = 0; y < sys.size(); ++y) {
            bool in_fiber =
                std::binary_search(sys.preimages(x).begin(), sys.preimages(x).end(), y);
            CHECK(in_fiber == (sys.image(y) == x));
        }
    }
    CHECK_THROWS_AS(build_torus(6, 2), std::invalid_argument);
}

TEST_CASE("interval square: exact squares, clamped rounding, fibers") {
    BuiltSystem bs = build_interval_square(4);
    const FiniteSystem& sys = bs.system;
    CHECK(sys.size() == 17);
    CHECK(sys.image(id_at(sys, {dy(1, 1)})) == id_at(sys, {dy(1, 2)}));  // (1/2)^2 = 1/4
    CHECK(sys.image(id_at(sys, {Rational(1)})) == id_at(sys, {Rational(1)}));
    CHECK(sys.image(id_at(sys, {Rational(0)})) == id_at(sys, {Rational(0)}));

    // exhaustive fiber scan: preimages of 0 are the grid points whose square
    // rounds down to 0, i.e. i^2 < 16
    PointSet expect;
    for (int i = 0; i <= 16; ++i)
        if (i * i < 16) expect.push_back(id_at(sys, {Rational::fraction(i, 16)}));
    CHECK(sys.preimages(id_at(sys, {Rational(0)})) == make_point_set(expect));
}

TEST_CASE("periodic cofinal: rings are pure cycles") {
    BuiltSystem bs = build_periodic_cofinal(4);
    const FiniteSystem& sys = bs.system;
    for (int n = 1; n <= 4; ++n) {
        const PointSet& ring = named(bs, "ring-R" + std::to_string(n)).ids;
        int v = ring[0];
        std::size_t steps = 0;
        do {
            v = sys.image(v);
            ++steps;
        } while (v != ring[0]);
        CHECK(steps == ring.size());
    }
}

TEST_CASE("square sequence: validated, squares present, spiral exits wired") {
    BuiltSystem bs = build_square_sequence(3, 3, 2);
    const FiniteSystem& sys = bs.system;
    CHECK(sys.min_gap() > Rational(0));
    int squares = 0;
    for (const NamedSet& ns : bs.sets)
        if (ns.name.rfind("square-", 0) == 0) ++squares;
    CHECK(squares == 7);  // scales 1, 9/8, 5/4, 3/2, 7/4, 15/8, 2
    // every vertex of every square is fixed
    for (const NamedSet& ns : bs.sets) {
        if (ns.name.rfind("square-", 0) != 0) continue;
        for (int id : ns.ids) {
            const Coords& c = sys.point(id);
            if (c[0].abs() == c[1].abs()) CHECK(sys.image(id) == id);
        }
    }
}

TEST_CASE("builder parameter validation") {
    CHECK_THROWS_AS(build_square(1), std::invalid_argument);
    CHECK_THROWS_AS(build_periodic_cofinal(0), std::invalid_argument);
    CHECK_THROWS_AS(build_square_sequence(2, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(build_system("nope", {}), std::invalid_argument);
}

TEST_CASE("save/load round trip is structural identity") {
    for (const BuiltSystem& bs :
         {build_square(4), build_circle_stack(2, 5, 2), build_torus(4, 3), build_interval_square(3)}) {
        std::string text = save_system(bs.system);
        FiniteSystem again = load_system(text);
        REQUIRE(again.size() == bs.system.size());
        CHECK(again.space() == bs.system.space());
        for (int i = 0; i < again.size(); ++i) {
            CHECK(again.point(i) == bs.system.point(i));
            CHECK(again.image(i) == bs.system.image(i));
        }
        CHECK(save_system(again) == text);  // byte-stable
    }
}

TEST_CASE("load rejects malformed input with line numbers") {
    CHECK_THROWS_AS(load_system("space plane\npoint 0 0/2^0 0/2^0\nmap 0 3\n"), FormatError);
    CHECK_THROWS_MATCHES(
        load_system("space plane\npoint 0 2/2^1 0/2^0\nmap 0 0\n"), FormatError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("1/2^0")));
    CHECK_THROWS_AS(load_system("space plane\npoint 0 0/2^0\npoint 0 1/2^0\nmap 0 0\nmap 1 1\n"),
                    FormatError);
    CHECK_THROWS_AS(load_system("space plane\npoint 0 0/2^0\n"), FormatError);  // no map
    CHECK_THROWS_AS(load_system("space circle q=4\npoint 0 1/3\nmap 0 0\n"), FormatError);
    CHECK_THROWS_AS(load_system("point 0 0/2^0\nmap 0 0\n"), FormatError);  // space first
    // duplicate coordinates make the metric degenerate
    CHECK_THROWS_AS(load_system("space plane\npoint 0 1/2^0\npoint 1 1/2^0\nmap 0 1\nmap 1 0\n"),
                    FormatError);
}
