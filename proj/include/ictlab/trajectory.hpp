#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/chain_graph.hpp"
#include "ictlab/metric.hpp"
#include "ictlab/orbits.hpp"

namespace ictlab {

namespace detail {

/// Cycle of the map as an orbit-ordered list starting at its min id.
inline std::vector<int> cycle_in_orbit_order(const FiniteSystem& sys, const PointSet& cycle) {
    std::vector<int> out{cycle.front()};
    int v = sys.image(cycle.front());
    while (v != cycle.front()) {
        out.push_back(v);
        v = sys.image(v);
        if (out.size() > cycle.size()) throw std::logic_error("not a cycle of the map");
    }
    return out;
}

/// Induced delta-chain subgraph on a sorted point set, with local indices.
struct InducedGraph {
    PointSet nodes;
    std::vector<std::vector<int>> succ, pred;  // local indices

    InducedGraph(const FiniteSystem& sys, const PointSet& set, const Rational& delta) : nodes(set) {
        int k = static_cast<int>(nodes.size());
        succ.resize(k);
        pred.resize(k);
        for (int i = 0; i < k; ++i) {
            int fx = sys.image(nodes[i]);
            for (int j = 0; j < k; ++j)
                if (sys.dist(fx, nodes[j]) < delta) {
                    succ[i].push_back(j);
                    pred[j].push_back(i);
                }
        }
    }

    int local(int id) const {
        return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
    }

    /// Lexicographically smallest shortest chain from `from` to `to` of
    /// length >= 1 (ids), or nullopt when unreachable.
    std::optional<std::vector<int>> shortest_chain(int from, int to) const {
        int k = static_cast<int>(nodes.size());
        int s = local(from), t = local(to);
        std::vector<int> rdist(k, -1);
        std::vector<int> queue{t};
        rdist[t] = 0;
        for (std::size_t qi = 0; qi < queue.size(); ++qi)
            for (int u : pred[queue[qi]])
                if (rdist[u] == -1) {
                    rdist[u] = rdist[queue[qi]] + 1;
                    queue.push_back(u);
                }
        // first step is explicit so that from == to still takes >= 1 step
        int best = -1;
        for (int u : succ[s])
            if (rdist[u] != -1 && (best == -1 || rdist[u] < rdist[best] ||
                                   (rdist[u] == rdist[best] && nodes[u] < nodes[best])))
                best = u;
        if (best == -1) return std::nullopt;
        std::vector<int> chain{nodes[s], nodes[best]};
        int cur = best;
        while (cur != t) {
            int next = -1;
            for (int u : succ[cur])
                if (rdist[u] == rdist[cur] - 1 && (next == -1 || nodes[u] < nodes[next])) next = u;
            cur = next;
            chain.push_back(nodes[cur]);
        }
        return chain;
    }
};

}  // namespace detail

/// Closed delta-chain tour of an internally chain transitive set A, coded as
/// a two-sided pseudo-orbit with alpha = omega = A and every jump < delta.
/// The tour concatenates shortest chains between consecutive points of A in
/// canonical id order; length ties break lexicographically.
inline CodedOrbit weave_pseudo_orbit(const FiniteSystem& sys, const PointSet& a, const Rational& delta) {
    if (a.empty()) throw std::invalid_argument("weave: empty set");
    PointSet s = make_point_set(a);
    detail::InducedGraph induced(sys, s, delta);
    std::vector<int> tour;
    int k = static_cast<int>(s.size());
    for (int i = 0; i < k; ++i) {
        int from = s[i], to = s[(i + 1) % k];
        auto chain = induced.shortest_chain(from, to);
        if (!chain)
            throw std::invalid_argument("weave: set is not internally chain transitive at delta=" +
                                        delta.to_string() + ": no chain from point " +
                                        std::to_string(from) + " to point " + std::to_string(to));
        tour.insert(tour.end(), chain->begin(), chain->end() - 1);
    }
    CodedOrbit orbit;
    orbit.left_cycle = tour;
    orbit.right_cycle = tour;
    orbit.jump_bound = orbit.recompute_jump_bound(sys);
    return orbit;
}

namespace detail {

/// Exact full trajectories in a finite system run from one cycle of the map
/// to a functionally reachable one; search those pairs against the wanted
/// alpha/omega tolerances. strict selects "< tol" over "<= tol".
inline std::optional<CodedOrbit> search_trajectory(const FiniteSystem& sys, const PointSet& alpha_target,
                                                   const PointSet& omega_target, const Rational& tol,
                                                   bool strict) {
    auto matches = [&](const Rational& d) { return strict ? d < tol : d <= tol; };
    SetFamily cycles = cycles_of_map(sys);
    for (const PointSet& c1 : cycles) {
        if (!matches(hausdorff(sys, c1, alpha_target))) continue;
        // functional forward closure of a cycle is the cycle itself, but the
        // walk below stays honest about it
        std::vector<int> order = cycle_in_orbit_order(sys, c1);
        for (const PointSet& c2 : cycles) {
            if (!matches(hausdorff(sys, c2, omega_target))) continue;
            std::optional<std::vector<int>> bridge;  // exact path of >= 1 step, from c1 into c2
            for (int start : order) {
                std::vector<int> walk{start};
                int v = start;
                bool hit = false;
                for (int steps = 0; steps <= sys.size(); ++steps) {
                    v = sys.image(v);
                    walk.push_back(v);
                    if (std::binary_search(c2.begin(), c2.end(), v)) {
                        hit = true;
                        break;
                    }
                }
                if (hit) {
                    bridge = walk;
                    break;
                }
            }
            if (!bridge) continue;
            CodedOrbit orbit;
            std::vector<int> left = order;
            auto at = std::find(left.begin(), left.end(), bridge->front());
            std::rotate(left.begin(), at + 1 == left.end() ? left.begin() : at + 1, left.end());
            orbit.left_cycle = left;  // rotated so left.back() == bridge->front()
            orbit.core.assign(bridge->begin() + 1, bridge->end() - 1);
            std::vector<int> right = cycle_in_orbit_order(sys, c2);
            std::rotate(right.begin(), std::find(right.begin(), right.end(), bridge->back()), right.end());
            orbit.right_cycle = right;
            orbit.jump_bound = orbit.recompute_jump_bound(sys);
            return orbit;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Exact full trajectory whose alpha-limit set is within tau of A and whose
/// omega-limit set is within tau of B (Hausdorff, <= tau). Returns none iff
/// no such trajectory exists; the scan over cycle pairs is exhaustive.
inline std::optional<CodedOrbit> full_trajectory_with(const FiniteSystem& sys, const PointSet& a,
                                                      const PointSet& b, const Rational& tau) {
    if (a.empty() || b.empty()) throw std::invalid_argument("full_trajectory_with: empty set");
    if (tau < Rational(0)) throw std::invalid_argument("full_trajectory_with: tau must be >= 0");
    return detail::search_trajectory(sys, make_point_set(a), make_point_set(b), tau, false);
}

}  // namespace ictlab
