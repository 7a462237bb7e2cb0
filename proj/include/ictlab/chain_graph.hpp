#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/metric.hpp"
#include "ictlab/system.hpp"

namespace ictlab {

/// Directed graph at jump tolerance delta: edge x -> y iff d(f(x), y) < delta
/// (strict, so the boundary case is exact and well-defined).
struct ChainGraph {
    const FiniteSystem* sys = nullptr;
    Rational delta;
    std::vector<std::vector<int>> succ;  // sorted successor ids per point
    long long edge_count = 0;
};

inline ChainGraph build_chain_graph(const FiniteSystem& sys, const Rational& delta) {
    if (!(delta > Rational(0))) throw std::invalid_argument("chain graph: delta must be > 0");
    ChainGraph g;
    g.sys = &sys;
    g.delta = delta;
    int n = sys.size();
    g.succ.assign(n, {});
    for (int x = 0; x < n; ++x) {
        int fx = sys.image(x);
        for (int y = 0; y < n; ++y)
            if (sys.dist(fx, y) < delta) g.succ[x].push_back(y);
        g.edge_count += static_cast<long long>(g.succ[x].size());
    }
    return g;
}

namespace detail {

/// Iterative Tarjan over an arbitrary successor callback.
/// Returns components in reverse topological order of discovery.
template <typename SuccFn>
std::vector<std::vector<int>> strongly_connected(int n, SuccFn succ_of) {
    std::vector<int> number(n, -1), low(n, 0), stack_index(n, -1);
    std::vector<int> stack;
    std::vector<std::vector<int>> sccs;
    int counter = 0;

    struct Frame {
        int v;
        std::size_t next;
    };
    for (int root = 0; root < n; ++root) {
        if (number[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        number[root] = low[root] = counter++;
        stack_index[root] = static_cast<int>(stack.size());
        stack.push_back(root);
        while (!frames.empty()) {
            Frame& fr = frames.back();
            const std::vector<int>& out = succ_of(fr.v);
            if (fr.next < out.size()) {
                int w = out[fr.next++];
                if (number[w] == -1) {
                    number[w] = low[w] = counter++;
                    stack_index[w] = static_cast<int>(stack.size());
                    stack.push_back(w);
                    frames.push_back({w, 0});
                } else if (stack_index[w] != -1) {
                    low[fr.v] = std::min(low[fr.v], number[w]);
                }
            } else {
                if (low[fr.v] == number[fr.v]) {
                    std::vector<int> scc(stack.begin() + stack_index[fr.v], stack.end());
                    for (int w : scc) stack_index[w] = -1;
                    stack.resize(stack.size() - scc.size());
                    sccs.push_back(std::move(scc));
                }
                int v = fr.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return sccs;
}

}  // namespace detail

/// Maximal delta-chain-transitive sets: strongly connected components of the
/// chain graph that contain at least one internal edge. Their union is the
/// chain-recurrent vertex set at this delta.
inline SetFamily chain_components(const ChainGraph& g) {
    int n = static_cast<int>(g.succ.size());
    auto sccs = detail::strongly_connected(n, [&](int v) -> const std::vector<int>& { return g.succ[v]; });
    SetFamily out;
    for (auto& scc : sccs) {
        bool has_edge = scc.size() > 1;
        if (!has_edge) {
            int v = scc[0];
            has_edge = std::binary_search(g.succ[v].begin(), g.succ[v].end(), v);
        }
        if (has_edge) out.push_back(make_point_set(std::move(scc)));
    }
    return canonical_family(std::move(out));
}

/// True iff every ordered pair of points of A (including a = b) is joined by
/// a delta-chain of length >= 1 staying inside A. Computed directly on the
/// induced subgraph, independently of build_chain_graph.
inline bool is_ict(const FiniteSystem& sys, const PointSet& a, const Rational& delta) {
    if (!(delta > Rational(0))) throw std::invalid_argument("is_ict: delta must be > 0");
    if (a.empty()) throw std::invalid_argument("is_ict: empty set");
    for (int id : a)
        if (id < 0 || id >= sys.size()) throw std::out_of_range("is_ict: unknown point id");
    PointSet s = make_point_set(a);
    int k = static_cast<int>(s.size());
    std::vector<std::vector<int>> succ(k);
    for (int i = 0; i < k; ++i) {
        int fx = sys.image(s[i]);
        for (int j = 0; j < k; ++j)
            if (sys.dist(fx, s[j]) < delta) succ[i].push_back(j);
    }
    if (k == 1) return !succ[0].empty();
    auto sccs = detail::strongly_connected(k, [&](int v) -> const std::vector<int>& { return succ[v]; });
    return sccs.size() == 1;
}

/// All cycles of the functional graph x -> f(x); exactly the alpha- and
/// omega-limit sets realizable by exact trajectories.
inline SetFamily cycles_of_map(const FiniteSystem& sys) {
    int n = sys.size();
    std::vector<int> state(n, 0);  // 0 new, 1 on current walk, 2 done
    std::vector<int> position(n, -1);
    SetFamily out;
    for (int start = 0; start < n; ++start) {
        if (state[start] != 0) continue;
        std::vector<int> walk;
        int v = start;
        while (state[v] == 0) {
            state[v] = 1;
            position[v] = static_cast<int>(walk.size());
            walk.push_back(v);
            v = sys.image(v);
        }
        if (state[v] == 1)  // new cycle found on this walk
            out.push_back(make_point_set({walk.begin() + position[v], walk.end()}));
        for (int w : walk) state[w] = 2;
    }
    return canonical_family(std::move(out));
}

/// Exhaustive oracle: every subset A of `superset` with |A| <= size_bound
/// and is_ict(A, delta). Exponential; guarded to desk scale.
inline SetFamily enumerate_ict(const FiniteSystem& sys, const Rational& delta, int size_bound,
                               PointSet superset = {}) {
    if (size_bound < 1) throw std::invalid_argument("enumerate_ict: size_bound must be >= 1");
    if (superset.empty())
        for (int i = 0; i < sys.size(); ++i) superset.push_back(i);
    superset = make_point_set(std::move(superset));
    int n = static_cast<int>(superset.size());
    if (n > 20)
        throw std::invalid_argument("enumerate_ict: refusing full enumeration over " +
                                    std::to_string(n) + " points (guard is 20); pass a superset");
    SetFamily out;
    for (unsigned long long mask = 1; mask < (1ULL << n); ++mask) {
        if (std::popcount(mask) > size_bound) continue;
        PointSet a;
        for (int i = 0; i < n; ++i)
            if (mask & (1ULL << i)) a.push_back(superset[i]);
        if (is_ict(sys, a, delta)) out.push_back(std::move(a));
    }
    return canonical_family(std::move(out));
}

}  // namespace ictlab
