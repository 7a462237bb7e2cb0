#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/chain_graph.hpp"
#include "ictlab/system.hpp"

namespace ictlab {

/// Eventually-periodic two-sided pseudo-orbit, coded as
///   ... left_cycle left_cycle | left_tail core right_tail | right_cycle ...
/// jump_bound is the max step error d(f(x_i), x_{i+1}) over the decoded
/// sequence; zero iff the orbit is an exact full trajectory. The alpha- and
/// omega-limit sets are the cycle supports (the points visited infinitely
/// often on each side), regardless of step exactness inside the cycles.
struct CodedOrbit {
    std::vector<int> left_cycle;   // nonempty
    std::vector<int> left_tail;
    std::vector<int> core;
    std::vector<int> right_tail;
    std::vector<int> right_cycle;  // nonempty
    Rational jump_bound;

    int mid_length() const {
        return static_cast<int>(left_tail.size() + core.size() + right_tail.size());
    }

    /// Point at position i; positions [0, mid_length) hold the finite middle.
    int decode(long long i) const {
        long long mid = mid_length();
        if (i < 0) {
            long long p = static_cast<long long>(left_cycle.size());
            return left_cycle[static_cast<std::size_t>(((i % p) + p) % p)];
        }
        if (i < mid) {
            auto k = static_cast<std::size_t>(i);
            if (k < left_tail.size()) return left_tail[k];
            k -= left_tail.size();
            if (k < core.size()) return core[k];
            return right_tail[k - core.size()];
        }
        long long p = static_cast<long long>(right_cycle.size());
        return right_cycle[static_cast<std::size_t>((i - mid) % p)];
    }

    PointSet alpha_set() const { return make_point_set(left_cycle); }
    PointSet omega_set() const { return make_point_set(right_cycle); }

    /// Max step error over one full period of structure (all distinct steps
    /// appear within the window [-lc-1, mid+rc]).
    Rational recompute_jump_bound(const FiniteSystem& sys) const {
        Rational worst(0);
        long long lo = -static_cast<long long>(left_cycle.size()) - 1;
        long long hi = mid_length() + static_cast<long long>(right_cycle.size());
        for (long long i = lo; i < hi; ++i)
            worst = max(worst, sys.dist(sys.image(decode(i)), decode(i + 1)));
        return worst;
    }

    void validate(const FiniteSystem& sys) const {
        if (left_cycle.empty() || right_cycle.empty())
            throw std::invalid_argument("coded orbit: cycles must be nonempty");
        if (recompute_jump_bound(sys) != jump_bound)
            throw std::invalid_argument("coded orbit: stored jump bound is wrong");
    }

    std::string to_string() const {
        std::ostringstream out;
        auto list = [&](const std::vector<int>& v) {
            out << "[";
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
            out << "]";
        };
        list(left_cycle);
        out << " ";
        list(left_tail);
        out << " ";
        list(core);
        out << " ";
        list(right_tail);
        out << " ";
        list(right_cycle);
        out << " jump=" << jump_bound.to_string();
        return out.str();
    }
};

/// Exact forward orbit coding: iterate until the first repeat.
/// decode: x, f(x), ... = tail then cycle forever.
struct OrbitSuffix {
    std::vector<int> tail;
    std::vector<int> cycle;  // nonempty, in orbit order
};

inline OrbitSuffix forward_orbit(const FiniteSystem& sys, int x) {
    std::vector<int> walk;
    std::vector<int> position(sys.size(), -1);
    int v = x;
    while (position[v] == -1) {
        position[v] = static_cast<int>(walk.size());
        walk.push_back(v);
        v = sys.image(v);
    }
    OrbitSuffix out;
    out.tail.assign(walk.begin(), walk.begin() + position[v]);
    out.cycle.assign(walk.begin() + position[v], walk.end());
    return out;
}

/// Terminal cycle of x as a set; in a finite system this is omega(x).
inline PointSet omega_limit(const FiniteSystem& sys, int x) {
    return make_point_set(forward_orbit(sys, x).cycle);
}

/// Alpha-limit sets over all backward trajectories of x: exactly the cycles
/// of the map from which x is forward-reachable. Empty iff x has no infinite
/// backward trajectory.
inline SetFamily alpha_family(const FiniteSystem& sys, int x) {
    if (x < 0 || x >= sys.size()) throw std::out_of_range("alpha_family: unknown point id");
    std::vector<bool> reaches_x(sys.size(), false);
    std::vector<int> queue{x};
    reaches_x[x] = true;
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int u : sys.preimages(v))
            if (!reaches_x[u]) {
                reaches_x[u] = true;
                queue.push_back(u);
            }
    }
    SetFamily out;
    for (const PointSet& cycle : cycles_of_map(sys))
        if (reaches_x[cycle.front()]) out.push_back(cycle);
    return canonical_family(std::move(out));
}

/// gamma(x): points y of omega(x) with infinitely many n and y-near sources
/// mapping onto x after n steps. In a finite space that forces x onto its
/// own terminal cycle, so gamma(x) = omega(x) when x is periodic, else empty.
inline PointSet gamma_limit(const FiniteSystem& sys, int x) {
    PointSet omega = omega_limit(sys, x);
    if (std::binary_search(omega.begin(), omega.end(), x)) return omega;
    return {};
}

}  // namespace ictlab
