#pragma once

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/metric.hpp"
#include "ictlab/system.hpp"

namespace ictlab {

struct BuiltSystem {
    FiniteSystem system;
    std::vector<NamedSet> sets;  // notable point sets, named
};

namespace detail {

inline Rational dy(long long num, int exp) { return Rational::dyadic(num, exp); }

/// 1 - 1/2^m, the side-offset ladder shared by every square-shaped family.
inline Rational ladder(int m) { return dy((1LL << m) - 1, m); }

/// Shared builder state: exact-coordinate point table plus a map under
/// construction. Overrides must be declared; everything else is set once.
class SystemSketch {
public:
    explicit SystemSketch(SpaceDescriptor space) : space_(space) {}

    int add(Coords c) {
        auto it = index_.find(c);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(points_.size());
        index_.emplace(c, id);
        points_.push_back(std::move(c));
        map_.push_back(-1);
        return id;
    }

    int id_of(const Coords& c) const {
        auto it = index_.find(c);
        if (it == index_.end()) throw std::logic_error("builder: missing point");
        return it->second;
    }

    void set_map(int src, int dst, bool override_ok = false) {
        if (map_.at(src) != -1 && !override_ok) throw std::logic_error("builder: map set twice");
        map_[src] = dst;
    }

    FiniteSystem finish() {
        for (int t : map_)
            if (t == -1) throw std::logic_error("builder: map not total");
        return FiniteSystem::create(space_, std::move(points_), std::move(map_));
    }

private:
    SpaceDescriptor space_;
    std::vector<Coords> points_;
    std::map<Coords, int> index_;
    std::vector<int> map_;
};

/// Anticlockwise cyclic order of a square ring: corners at (+-cs, +-cs),
/// side offsets 0 and +-o for each o in `offsets` (ascending). Starts at the
/// NE corner; the caller wires successors and any exit override.
inline std::vector<int> ring_cycle_points(SystemSketch& b, const Rational& cs,
                                          const std::vector<Rational>& offsets) {
    std::vector<Rational> line;  // -o_d .. -o_1, 0, +o_1 .. +o_d
    for (auto it = offsets.rbegin(); it != offsets.rend(); ++it) line.push_back(-*it);
    line.push_back(Rational(0));
    for (const Rational& o : offsets) line.push_back(o);

    std::vector<int> cyc;
    cyc.push_back(b.add({cs, cs}));                                          // NE
    for (auto it = line.rbegin(); it != line.rend(); ++it) cyc.push_back(b.add({*it, cs}));  // top r->l
    cyc.push_back(b.add({-cs, cs}));                                         // NW
    for (auto it = line.rbegin(); it != line.rend(); ++it) cyc.push_back(b.add({-cs, *it}));  // left t->b
    cyc.push_back(b.add({-cs, -cs}));                                        // SW
    for (const Rational& v : line) cyc.push_back(b.add({v, -cs}));           // bottom l->r
    cyc.push_back(b.add({cs, -cs}));                                         // SE
    for (const Rational& v : line) cyc.push_back(b.add({cs, v}));            // right b->t
    return cyc;
}

inline void wire_cycle(SystemSketch& b, const std::vector<int>& cyc) {
    for (std::size_t i = 0; i < cyc.size(); ++i) b.set_map(cyc[i], cyc[(i + 1) % cyc.size()]);
}

/// Q-style invariant square at scale s: four fixed vertices plus four side
/// chains of depth d flowing anticlockwise, far ends clamped to themselves.
/// Returns all ids (vertices + sides).
inline std::vector<int> square_boundary(SystemSketch& b, const Rational& s, int d) {
    std::vector<int> ids;
    for (auto [sx, sy] : {std::pair{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}) {
        int v = b.add({s * Rational(sx), s * Rational(sy)});
        b.set_map(v, v);
        ids.push_back(v);
    }
    std::vector<Rational> offs;  // flow order: +o_d .. +o_1, 0, -o_1 .. -o_d
    for (int m = d; m >= 1; --m) offs.push_back(s * ladder(m));
    offs.push_back(Rational(0));
    for (int m = 1; m <= d; ++m) offs.push_back(-(s * ladder(m)));

    auto chain = [&](auto point_at) {
        std::vector<int> side;
        for (const Rational& o : offs) side.push_back(b.add(point_at(o)));
        for (std::size_t i = 0; i + 1 < side.size(); ++i) b.set_map(side[i], side[i + 1]);
        b.set_map(side.back(), side.back());  // clamp
        ids.insert(ids.end(), side.begin(), side.end());
    };
    chain([&](const Rational& o) { return Coords{o, s}; });    // top, x decreasing
    chain([&](const Rational& o) { return Coords{-s, o}; });   // left, y decreasing
    chain([&](const Rational& o) { return Coords{-o, -s}; });  // bottom, x increasing
    chain([&](const Rational& o) { return Coords{s, -o}; });   // right, y increasing
    return ids;
}

}  // namespace detail

/// The plane system whose limit square Q attracts an interior spiral fed
/// from the origin and sheds an exterior spiral toward a fixed apex.
/// Truncated at dyadic index N; lost images clamp to their source.
inline BuiltSystem build_square(int level) {
    using namespace detail;
    if (level < 2) throw std::invalid_argument("square: level must be >= 2");
    const int N = level;
    SystemSketch b(SpaceDescriptor::plane(2));
    std::vector<NamedSet> named;

    int origin = b.add({Rational(0), Rational(0)});
    b.set_map(origin, origin);
    named.push_back({"origin", {origin}});

    int apex = b.add({Rational(0), Rational(2)});
    b.set_map(apex, apex);
    named.push_back({"apex", {apex}});

    std::vector<int> q_ids = square_boundary(b, Rational(1), N);
    named.push_back({"Q", make_point_set(q_ids)});

    // interior feeder (0, 1/2^n), n = 2..N, rising toward the first ring
    std::vector<int> feeder;
    for (int n = N; n >= 2; --n) feeder.push_back(b.add({Rational(0), dy(1, n)}));
    named.push_back({"feeder", make_point_set(feeder)});

    // apex feeder (0, 3/2 + (2^n - 1)/2^{n+1}), n = 0..N
    std::vector<int> upper;
    for (int n = 0; n <= N; ++n)
        upper.push_back(b.add({Rational(0), dy(3, 1) + dy((1LL << n) - 1, n + 1)}));
    named.push_back({"upper-feeder", make_point_set(upper)});

    // inner rings Q_n growing toward Q; NE corner exits outward
    std::vector<std::vector<int>> inner(N + 1);
    for (int n = 1; n <= N; ++n) {
        std::vector<Rational> offs;
        for (int m = 1; m < n; ++m) offs.push_back(ladder(m));
        inner[n] = ring_cycle_points(b, ladder(n), offs);
    }
    // outer rings R_n shrinking toward Q; one top-side point hops outward
    std::vector<std::vector<int>> outer(N + 1);
    for (int n = 1; n <= N; ++n) {
        std::vector<Rational> offs;
        for (int m = 1; m <= n; ++m) offs.push_back(ladder(m));
        outer[n] = ring_cycle_points(b, Rational(1) + dy(1, n), offs);
    }

    for (int n = 1; n <= N; ++n) {
        wire_cycle(b, inner[n]);
        int ne = b.id_of({ladder(n), ladder(n)});
        if (n < N)
            b.set_map(ne, b.id_of({ladder(n), ladder(n + 1)}), true);
        else
            b.set_map(ne, ne, true);  // clamp: image would lie on ring N+1
        named.push_back({"ring-Q" + std::to_string(n), make_point_set(inner[n])});
    }
    for (int n = 1; n <= N; ++n) {
        wire_cycle(b, outer[n]);
        if (n >= 2) {
            Rational x = -ladder(n - 1);
            b.set_map(b.id_of({x, Rational(1) + dy(1, n)}),
                      b.id_of({x, Rational(1) + dy(1, n - 1)}), true);
        }
        named.push_back({"ring-R" + std::to_string(n), make_point_set(outer[n])});
    }

    for (int n = N; n >= 2; --n) b.set_map(b.id_of({Rational(0), dy(1, n)}), b.id_of({Rational(0), dy(1, n - 1)}));
    for (int n = 0; n <= N; ++n) {
        int src = upper[n];
        // n = 0 is (0, 3/2), also the center of ring R_1's top side
        b.set_map(src, n < N ? upper[n + 1] : src, /*override_ok=*/n == 0);
    }

    return {b.finish(), std::move(named)};
}

/// Q plus exterior rings R_n realized as pure anticlockwise periodic orbits.
inline BuiltSystem build_periodic_cofinal(int level) {
    using namespace detail;
    if (level < 2) throw std::invalid_argument("periodic-cofinal: level must be >= 2");
    const int N = level;
    SystemSketch b(SpaceDescriptor::plane(2));
    std::vector<NamedSet> named;

    std::vector<int> q_ids = square_boundary(b, Rational(1), N);
    named.push_back({"Q", make_point_set(q_ids)});

    for (int n = 1; n <= N; ++n) {
        std::vector<Rational> offs;
        for (int m = 1; m <= n; ++m) offs.push_back(ladder(m));
        auto ring = ring_cycle_points(b, Rational(1) + dy(1, n), offs);
        wire_cycle(b, ring);
        named.push_back({"ring-R" + std::to_string(n), make_point_set(ring)});
    }
    return {b.finish(), std::move(named)};
}

/// Stacked rotation circles at heights {0} union {1/n}: each fiber is a
/// rigid rotation by p/q on the circle grid. Lives on a cylinder so the
/// height-1 fiber does not wrap onto the limit fiber.
inline BuiltSystem build_circle_stack(int n_max, long long q, long long p) {
    if (n_max < 1) throw std::invalid_argument("circle-stack: n_max must be >= 1");
    if (q < 2 || p < 1 || std::gcd(p, q) != 1)
        throw std::invalid_argument("circle-stack: need q >= 2, p >= 1, gcd(p, q) = 1");
    detail::SystemSketch b(SpaceDescriptor::cylinder(q));
    std::vector<NamedSet> named;

    std::vector<Rational> heights{Rational(0)};
    for (int n = n_max; n >= 1; --n) heights.push_back(Rational::fraction(1, n));

    for (const Rational& h : heights) {
        PointSet fiber;
        for (long long j = 0; j < q; ++j) fiber.push_back(b.add({Rational::fraction(j, q), h}));
        for (long long j = 0; j < q; ++j)
            b.set_map(fiber[j], fiber[(j + p) % q]);
        named.push_back({"fiber-" + h.to_string(), make_point_set(fiber)});
    }
    return {b.finish(), std::move(named)};
}

/// Rotation of the q-grid torus in the first coordinate only.
inline BuiltSystem build_torus(long long q, long long p) {
    if (q < 2 || p < 1 || std::gcd(p, q) != 1)
        throw std::invalid_argument("torus: need q >= 2, p >= 1, gcd(p, q) = 1");
    detail::SystemSketch b(SpaceDescriptor::torus(q));
    std::vector<NamedSet> named;
    for (long long j = 0; j < q; ++j) {
        PointSet fiber;
        for (long long i = 0; i < q; ++i)
            fiber.push_back(b.add({Rational::fraction(i, q), Rational::fraction(j, q)}));
        for (long long i = 0; i < q; ++i) b.set_map(fiber[i], fiber[(i + p) % q]);
        named.push_back({"fiber-" + Rational::fraction(j, q).to_string(), make_point_set(fiber)});
    }
    return {b.finish(), std::move(named)};
}

/// x -> x^2 on the dyadic grid {i/2^k}, rounded down so 0 and 1 stay fixed.
inline BuiltSystem build_interval_square(int k) {
    if (k < 1 || k > 20) throw std::invalid_argument("interval-square: level must be in [1, 20]");
    detail::SystemSketch b(SpaceDescriptor::plane(1));
    long long n = 1LL << k;
    for (long long i = 0; i <= n; ++i) b.add({Rational::fraction(i, n)});
    for (long long i = 0; i <= n; ++i)
        b.set_map(static_cast<int>(i), static_cast<int>((i * i) >> k));
    std::vector<NamedSet> named{{"zero", {0}}, {"one", {static_cast<int>(n)}}};
    return {b.finish(), std::move(named)};
}

/// Nested squares at scales 2 - 1/2^n (rising to 2) and 1 + 1/2^n (falling
/// to 1) plus the limit squares at 1 and 2, linked by outward spiral rings:
/// K interpolating rings per gap, each touring once and exiting at the top
/// of its right side onto the next ring's NE corner.
inline BuiltSystem build_square_sequence(int level, int depth, int rings) {
    using namespace detail;
    if (level < 2) throw std::invalid_argument("square-sequence: level must be >= 2");
    if (depth < 1 || rings < 1)
        throw std::invalid_argument("square-sequence: depth and rings must be >= 1");
    const int N = level, M = depth, K = rings;
    SystemSketch b(SpaceDescriptor::plane(2));
    std::vector<NamedSet> named;

    std::vector<Rational> scales{Rational(1), Rational(2)};
    for (int n = 1; n <= N; ++n) {
        scales.push_back(Rational(1) + dy(1, n));                 // 1 + 1/2^n
        scales.push_back(Rational(2) - dy(1, n));                 // 2 - 1/2^n
    }
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());

    for (const Rational& s : scales)
        named.push_back({"square-" + s.to_string(), make_point_set(square_boundary(b, s, M))});

    auto connect = [&](const Rational& lo, const Rational& hi) {
        int exit_id = -1;
        std::vector<int> all;
        for (int i = 1; i <= K; ++i) {
            Rational r = lo + (hi - lo) * ladder(i);
            std::vector<Rational> offs;
            for (int m = 1; m <= M; ++m) offs.push_back(r * ladder(m));
            auto cyc = ring_cycle_points(b, r, offs);
            wire_cycle(b, cyc);
            if (exit_id != -1) b.set_map(exit_id, cyc.front(), true);  // previous ring exits here
            exit_id = cyc.back();  // top of the right side, cyclic predecessor of NE
            all.insert(all.end(), cyc.begin(), cyc.end());
        }
        b.set_map(exit_id, b.id_of({hi, hi}), true);  // last ring exits onto the target square
        return all;
    };

    for (int n = N; n >= 2; --n) {
        auto ids = connect(Rational(1) + dy(1, n), Rational(1) + dy(1, n - 1));
        named.push_back({"link-inner-" + std::to_string(n), make_point_set(ids)});
    }
    for (int n = 1; n <= N - 1; ++n) {
        auto ids = connect(Rational(2) - dy(1, n), Rational(2) - dy(1, n + 1));
        named.push_back({"link-outer-" + std::to_string(n), make_point_set(ids)});
    }
    return {b.finish(), std::move(named)};
}

struct BuildParams {
    int level = 0;
    long long grid_q = 0;
    long long rot_p = 0;
    int depth = 0;
    int rings = 0;
};

inline BuiltSystem build_system(const std::string& kind, const BuildParams& p) {
    if (kind == "square") return build_square(p.level);
    if (kind == "periodic-cofinal") return build_periodic_cofinal(p.level);
    if (kind == "circle-stack") return build_circle_stack(p.level, p.grid_q, p.rot_p);
    if (kind == "torus") return build_torus(p.grid_q, p.rot_p);
    if (kind == "interval-square") return build_interval_square(p.level);
    if (kind == "square-sequence") return build_square_sequence(p.level, p.depth, p.rings);
    throw std::invalid_argument("unknown system kind \"" + kind + "\"");
}

}  // namespace ictlab
