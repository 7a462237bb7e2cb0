#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ictlab/chain_graph.hpp"
#include "ictlab/metric.hpp"
#include "ictlab/trajectory.hpp"

namespace ictlab {

enum class Direction { forward, backward, two_sided };

enum class LimitKind {
    tols,                    // two-sided orbital limit shadowing
    delta_restricted_tols,   // jumps bounded by delta everywhere
    gamma_restricted_tols,   // only pseudo-orbits with alpha = omega
    limit_shadowing,         // pointwise eventual coincidence, forward
    backward_limit_shadowing
};

enum class CofinalKind {
    cofinal_orbital,
    backward_cofinal_orbital,
    two_sided_cofinal,
    gamma_restricted_two_sided_cofinal
};

enum class PropertyKind { p_e, p_a };

struct Witness {
    std::string kind;                // "pseudo-orbit" | "pair" | "candidate"
    std::vector<int> pseudo_orbit;   // shadowing failures
    long long window_start = 0;      // index of pseudo_orbit.front()
    std::string left_name, right_name;
    PointSet left_ids, right_ids;
    std::string nearest_cycle;       // best exact trajectory found
    std::string nearest_distance;    // its worst-side Hausdorff distance
};

struct Verdict {
    bool holds = true;
    std::optional<Witness> witness;
    std::map<std::string, long long> stats;
    std::map<std::string, std::string> notes;
};

struct VariantParams {
    Rational epsilon{0};
    Rational delta{0};
    Rational tau{0};
    int horizon = 8;
    std::optional<std::vector<NamedSet>> candidates;  // nullopt = default family
};

/// Default quantification domain at resolution delta: the maximal
/// delta-chain-transitive sets plus the cycles of the map, canonically
/// ordered. These realize every limit set of coded pseudo-orbits at that
/// resolution.
inline std::vector<NamedSet> default_candidates(const FiniteSystem& sys, const Rational& delta) {
    std::vector<NamedSet> out;
    SetFamily cycles = cycles_of_map(sys);
    for (const PointSet& c : cycles) out.push_back({"cycle-" + std::to_string(c.front()), c});
    ChainGraph g = build_chain_graph(sys, delta);
    for (const PointSet& scc : chain_components(g)) {
        bool dup = false;
        for (const PointSet& c : cycles)
            if (c == scc) {
                dup = true;
                break;
            }
        if (!dup) out.push_back({"scc-" + std::to_string(scc.front()), scc});
    }
    std::sort(out.begin(), out.end(), [](const NamedSet& a, const NamedSet& b) { return a.ids < b.ids; });
    return out;
}

namespace detail {

struct Candidates {
    std::vector<NamedSet> kept;
    long long provided = 0;
    long long skipped_non_ict = 0;
};

inline Candidates resolve_candidates(const FiniteSystem& sys, const VariantParams& p) {
    if (!(p.delta > Rational(0))) throw std::invalid_argument("checker: delta must be > 0");
    std::vector<NamedSet> family =
        p.candidates ? *p.candidates : default_candidates(sys, p.delta);
    if (family.empty()) throw std::invalid_argument("checker: empty candidate family");
    Candidates out;
    out.provided = static_cast<long long>(family.size());
    for (NamedSet& ns : family) {
        ns.ids = make_point_set(std::move(ns.ids));
        if (is_ict(sys, ns.ids, p.delta))
            out.kept.push_back(std::move(ns));
        else
            ++out.skipped_non_ict;
    }
    return out;
}

struct NamedCycles {
    SetFamily sets;
    std::vector<std::string> names;
};

inline NamedCycles named_cycles(const FiniteSystem& sys) {
    NamedCycles out;
    out.sets = cycles_of_map(sys);
    for (const PointSet& c : out.sets) out.names.push_back("cycle-" + std::to_string(c.front()));
    return out;
}

/// Hausdorff distances memoized per unordered pair of structurally distinct
/// sets, so symmetric scans pay for each pair once. Hot loops pre-resolve
/// keys and use by_key.
class DhCache {
public:
    explicit DhCache(const FiniteSystem& sys) : sys_(sys) {}

    int key(const PointSet& s) {
        auto it = index_.find(s);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(sets_.size());
        index_.emplace(s, id);
        sets_.push_back(s);
        return id;
    }

    Rational by_key(int i, int j) {
        if (i > j) std::swap(i, j);
        auto it = memo_.find({i, j});
        if (it != memo_.end()) return it->second;
        Rational d = hausdorff(sys_, sets_[i], sets_[j]);
        memo_.emplace(std::make_pair(i, j), d);
        return d;
    }

    Rational operator()(const PointSet& a, const PointSet& b) { return by_key(key(a), key(b)); }

private:
    const FiniteSystem& sys_;
    std::vector<PointSet> sets_;
    std::map<PointSet, int> index_;
    std::map<std::pair<int, int>, Rational> memo_;
};

/// Forward reachability in the chain graph from a seed set, with parents
/// for chain extraction. Seeds have parent -1 and are themselves reached.
struct ChainReach {
    std::vector<char> reached;
    std::vector<int> parent;
};

inline ChainReach chain_reach(const ChainGraph& g, const PointSet& seeds) {
    int n = static_cast<int>(g.succ.size());
    ChainReach r{std::vector<char>(n, 0), std::vector<int>(n, -1)};
    std::vector<int> queue;
    for (int s : seeds) {
        r.reached[s] = 1;
        queue.push_back(s);
    }
    for (std::size_t qi = 0; qi < queue.size(); ++qi)
        for (int v : g.succ[queue[qi]])
            if (!r.reached[v]) {
                r.reached[v] = 1;
                r.parent[v] = queue[qi];
                queue.push_back(v);
            }
    return r;
}

inline bool reaches(const ChainReach& r, const PointSet& target) {
    for (int v : target)
        if (r.reached[v]) return true;
    return false;
}

/// Delta-chain from a seed to the first (min-id) reached node of target.
inline std::vector<int> extract_chain(const ChainReach& r, const PointSet& target) {
    int hit = -1;
    for (int v : target)
        if (r.reached[v]) {
            hit = v;
            break;
        }
    std::vector<int> path;
    for (int v = hit; v != -1; v = r.parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

/// Coded pseudo-orbit: tour(L) ... delta-bridge ... tour(R) forever.
/// The bridge is extended by one tour step of R so every junction is a
/// delta-edge even when L and R overlap.
inline CodedOrbit weave_pair_orbit(const FiniteSystem& sys, const CodedOrbit& weave_l,
                                   const CodedOrbit& weave_r, std::vector<int> bridge) {
    const std::vector<int>& tour_r = weave_r.right_cycle;
    auto at_r = std::find(tour_r.begin(), tour_r.end(), bridge.back());
    int entry = tour_r[(at_r - tour_r.begin() + 1) % tour_r.size()];

    CodedOrbit orbit;
    std::vector<int> left = weave_l.left_cycle;
    auto at_l = std::find(left.begin(), left.end(), bridge.front());
    std::rotate(left.begin(), at_l + 1 == left.end() ? left.begin() : at_l + 1, left.end());
    orbit.left_cycle = left;  // ends at bridge.front()
    orbit.core.assign(bridge.begin() + 1, bridge.end());
    std::vector<int> right = tour_r;
    auto at_e = std::find(right.begin(), right.end(), entry);
    std::rotate(right.begin(), at_e, right.end());
    orbit.right_cycle = right;  // starts at the tour step after bridge.back()
    orbit.jump_bound = orbit.recompute_jump_bound(sys);
    return orbit;
}

/// Support of the decoded suffix from position n (one full period past the
/// middle) and of the prefix left of position -n.
inline PointSet suffix_support(const CodedOrbit& o, long long n) {
    std::vector<int> pts;
    long long until = std::max(n, static_cast<long long>(o.mid_length())) +
                      static_cast<long long>(o.right_cycle.size());
    for (long long i = n; i < until; ++i) pts.push_back(o.decode(i));
    return make_point_set(std::move(pts));
}

inline PointSet prefix_support(const CodedOrbit& o, long long n) {
    std::vector<int> pts;
    for (long long i = -n - static_cast<long long>(o.left_cycle.size()); i < -n; ++i)
        pts.push_back(o.decode(i));
    return make_point_set(std::move(pts));
}

/// True iff some phase of the cycle pointwise tau-shadows the periodic tour.
inline bool cycle_shadows_tour(const FiniteSystem& sys, const std::vector<int>& cycle,
                               const std::vector<int>& tour, const Rational& tau) {
    long long c = static_cast<long long>(cycle.size()), p = static_cast<long long>(tour.size());
    long long g = std::gcd(c, p), l = std::lcm(c, p);
    for (long long phase = 0; phase < g; ++phase) {
        bool ok = true;
        for (long long i = 0; i < l && ok; ++i)
            ok = sys.dist(cycle[static_cast<std::size_t>((phase + i) % c)],
                          tour[static_cast<std::size_t>(i % p)]) <= tau;
        if (ok) return true;
    }
    return false;
}

inline void fail_pair(Verdict& v, const NamedSet& l, const NamedSet& r, const NamedCycles& cyc,
                      DhCache& dh) {
    Witness w;
    w.kind = "pair";
    w.left_name = l.name;
    w.right_name = r.name;
    w.left_ids = l.ids;
    w.right_ids = r.ids;
    bool first = true;
    Rational best(0);
    for (std::size_t c = 0; c < cyc.sets.size(); ++c) {
        Rational d = max(dh(cyc.sets[c], l.ids), dh(cyc.sets[c], r.ids));
        if (first || d < best) {
            best = d;
            w.nearest_cycle = cyc.names[c];
            first = false;
        }
    }
    if (!first) w.nearest_distance = best.to_string();
    v.holds = false;
    v.witness = std::move(w);
}

}  // namespace detail

/// Finite-resolution orbital-limit shadowing deciders. Quantification runs
/// over coded pseudo-orbits represented by (Lset, Rset) pairs drawn from the
/// candidate family (each member weave-realizable at delta): tols admits all
/// pairs (asymptotic orbits may jump arbitrarily in the middle),
/// delta_restricted requires Rset delta-chain-reachable from Lset,
/// gamma_restricted requires Lset = Rset. The ask is an exact full
/// trajectory whose limit pair matches within tau per side (tau = 0 is
/// equality). limit_shadowing kinds instead demand pointwise eventual
/// coincidence within tau along the periodic tour.
inline Verdict check_limit_variant(const FiniteSystem& sys, LimitKind kind, const VariantParams& p) {
    if (p.tau < Rational(0)) throw std::invalid_argument("checker: tau must be >= 0");
    auto cand = detail::resolve_candidates(sys, p);
    auto cyc = detail::named_cycles(sys);
    detail::DhCache dh(sys);

    Verdict v;
    v.stats["candidates_provided"] = cand.provided;
    v.stats["candidates_kept"] = static_cast<long long>(cand.kept.size());
    v.stats["candidates_skipped_non_ict"] = cand.skipped_non_ict;
    v.stats["cycles"] = static_cast<long long>(cyc.sets.size());

    if (kind == LimitKind::limit_shadowing || kind == LimitKind::backward_limit_shadowing) {
        long long checked = 0;
        for (const NamedSet& ns : cand.kept) {
            CodedOrbit weave = weave_pseudo_orbit(sys, ns.ids, p.delta);
            const std::vector<int>& tour =
                kind == LimitKind::limit_shadowing ? weave.right_cycle : weave.left_cycle;
            bool shadowed = false;
            for (const PointSet& c : cyc.sets) {
                if (detail::cycle_shadows_tour(sys, detail::cycle_in_orbit_order(sys, c), tour, p.tau)) {
                    shadowed = true;
                    break;
                }
            }
            ++checked;
            if (!shadowed) {
                detail::fail_pair(v, ns, ns, cyc, dh);
                v.witness->kind = "candidate";
                break;
            }
        }
        v.stats["candidates_checked"] = checked;
        return v;
    }

    bool need_reach = kind == LimitKind::delta_restricted_tols;
    std::vector<detail::ChainReach> reach;
    if (need_reach) {
        ChainGraph g = build_chain_graph(sys, p.delta);
        v.stats["chain_edges"] = g.edge_count;
        for (const NamedSet& ns : cand.kept) reach.push_back(detail::chain_reach(g, ns.ids));
    }

    long long admitted = 0;
    for (std::size_t i = 0; i < cand.kept.size() && v.holds; ++i) {
        const NamedSet& l = cand.kept[i];
        if (kind == LimitKind::gamma_restricted_tols) {
            // independent code path: realize the pseudo-orbit by weaving,
            // then match the woven limit pair against exact cycles
            CodedOrbit weave = weave_pseudo_orbit(sys, l.ids, p.delta);
            PointSet alpha = weave.alpha_set(), omega = weave.omega_set();
            ++admitted;
            bool found = false;
            for (const PointSet& c : cyc.sets) {
                bool ok = p.tau.is_zero()
                              ? (c == alpha && c == omega)
                              : (hausdorff(sys, c, alpha) <= p.tau && hausdorff(sys, c, omega) <= p.tau);
                if (ok) {
                    found = true;
                    break;
                }
            }
            if (!found) detail::fail_pair(v, l, l, cyc, dh);
            continue;
        }
        for (std::size_t j = 0; j < cand.kept.size(); ++j) {
            const NamedSet& r = cand.kept[j];
            if (need_reach && !detail::reaches(reach[i], r.ids)) continue;
            ++admitted;
            bool found = false;
            for (std::size_t c = 0; c < cyc.sets.size(); ++c)
                if (dh(cyc.sets[c], l.ids) <= p.tau && dh(cyc.sets[c], r.ids) <= p.tau) {
                    found = true;
                    break;
                }
            if (!found) {
                detail::fail_pair(v, l, r, cyc, dh);
                break;
            }
        }
    }
    v.stats["pairs_admitted"] = admitted;
    return v;
}

/// Finite-resolution cofinal orbital shadowing deciders. Same candidate
/// quantification as the limit variants, but every jump is bounded by delta
/// (so Rset must be delta-chain-reachable from Lset) and limit sets need
/// only match within epsilon, strictly. Both the tail-set and the limit-set
/// formulations are evaluated; their agreement is recorded in the notes.
inline Verdict check_cofinal_variant(const FiniteSystem& sys, CofinalKind kind, const VariantParams& p) {
    if (!(p.epsilon > Rational(0))) throw std::invalid_argument("checker: epsilon must be > 0");
    auto cand = detail::resolve_candidates(sys, p);
    auto cyc = detail::named_cycles(sys);
    detail::DhCache dh(sys);

    Verdict v;
    v.stats["candidates_provided"] = cand.provided;
    v.stats["candidates_kept"] = static_cast<long long>(cand.kept.size());
    v.stats["candidates_skipped_non_ict"] = cand.skipped_non_ict;
    v.stats["cycles"] = static_cast<long long>(cyc.sets.size());

    std::vector<CodedOrbit> weaves;
    for (const NamedSet& ns : cand.kept) weaves.push_back(weave_pseudo_orbit(sys, ns.ids, p.delta));

    bool two_sided =
        kind == CofinalKind::two_sided_cofinal || kind == CofinalKind::gamma_restricted_two_sided_cofinal;
    bool gamma = kind == CofinalKind::gamma_restricted_two_sided_cofinal;

    std::vector<detail::ChainReach> reach;
    if (two_sided) {
        ChainGraph g = build_chain_graph(sys, p.delta);
        v.stats["chain_edges"] = g.edge_count;
        for (const NamedSet& ns : cand.kept) reach.push_back(detail::chain_reach(g, ns.ids));
    }

    long long admitted = 0, disagreements = 0;

    std::vector<int> cand_key, cyc_key;
    for (const NamedSet& ns : cand.kept) cand_key.push_back(dh.key(ns.ids));
    for (const PointSet& c : cyc.sets) cyc_key.push_back(dh.key(c));

    auto tail_formulation_one_sided = [&](const CodedOrbit& weave, bool omega_side) {
        PointSet support = omega_side ? detail::suffix_support(weave, weave.mid_length())
                                      : detail::prefix_support(weave, 0);
        int skey = dh.key(support);
        for (int ck : cyc_key)
            if (dh.by_key(ck, skey) < p.epsilon) return true;
        return false;
    };

    if (!two_sided) {
        bool omega_side = kind == CofinalKind::cofinal_orbital;
        long long checked = 0;
        for (std::size_t i = 0; i < cand.kept.size(); ++i) {
            const NamedSet& ns = cand.kept[i];
            ++checked;
            bool limit_form = false;
            for (int ck : cyc_key)
                if (dh.by_key(ck, cand_key[i]) < p.epsilon) {
                    limit_form = true;
                    break;
                }
            bool tail_form = tail_formulation_one_sided(weaves[i], omega_side);
            if (limit_form != tail_form) ++disagreements;
            if (!limit_form) {
                detail::fail_pair(v, ns, ns, cyc, dh);
                v.witness->kind = "candidate";
                break;
            }
        }
        v.stats["candidates_checked"] = checked;
        v.stats["dual_disagreements"] = disagreements;
        v.notes["dual_formulation"] = disagreements == 0 ? "agree" : "disagree";
        return v;
    }

    for (std::size_t i = 0; i < cand.kept.size() && v.holds; ++i) {
        const NamedSet& l = cand.kept[i];
        for (std::size_t j = 0; j < cand.kept.size(); ++j) {
            const NamedSet& r = cand.kept[j];
            if (!detail::reaches(reach[i], r.ids)) continue;
            if (gamma && !(dh.by_key(cand_key[i], cand_key[j]) < p.epsilon)) continue;
            ++admitted;

            bool limit_form = false;
            for (int ck : cyc_key)
                if (dh.by_key(ck, cand_key[i]) < p.epsilon && dh.by_key(ck, cand_key[j]) < p.epsilon) {
                    limit_form = true;
                    break;
                }

            // tail-set formulation: walk the woven pseudo-orbit's actual
            // prefix/suffix supports against each exact cycle's
            std::vector<int> bridge = detail::extract_chain(reach[i], r.ids);
            CodedOrbit pseudo = detail::weave_pair_orbit(sys, weaves[i], weaves[j], std::move(bridge));
            int fwd = dh.key(detail::suffix_support(pseudo, pseudo.mid_length()));
            int back = dh.key(detail::prefix_support(pseudo, 0));
            bool tail_form = false;
            for (int ck : cyc_key)
                if (dh.by_key(ck, back) < p.epsilon && dh.by_key(ck, fwd) < p.epsilon) {
                    tail_form = true;
                    break;
                }
            if (limit_form != tail_form) ++disagreements;

            if (!limit_form) {
                detail::fail_pair(v, l, r, cyc, dh);
                break;
            }
        }
    }
    v.stats["pairs_admitted"] = admitted;
    v.stats["dual_disagreements"] = disagreements;
    v.notes["dual_formulation"] = disagreements == 0 ? "agree" : "disagree";
    return v;
}

/// P_e / P_a: every candidate A that is internally chain transitive at delta
/// must be realized (P_e, exactly) or approximated (P_a, within epsilon,
/// strictly) by the alpha- and omega-limit sets of one exact full
/// trajectory. On success the matching cycle per candidate is recorded in
/// the notes; on failure the witness names the offending candidate and the
/// nearest exact trajectory.
inline Verdict check_property(const FiniteSystem& sys, PropertyKind which, const VariantParams& p) {
    if (which == PropertyKind::p_a && !(p.epsilon > Rational(0)))
        throw std::invalid_argument("checker: P_a needs epsilon > 0");
    auto cand = detail::resolve_candidates(sys, p);
    auto cyc = detail::named_cycles(sys);

    Verdict v;
    v.stats["candidates_provided"] = cand.provided;
    v.stats["candidates_kept"] = static_cast<long long>(cand.kept.size());
    v.stats["candidates_skipped_non_ict"] = cand.skipped_non_ict;
    v.stats["cycles"] = static_cast<long long>(cyc.sets.size());

    long long checked = 0;
    for (const NamedSet& ns : cand.kept) {
        ++checked;
        int matched = -1;
        Rational matched_d(0);
        for (std::size_t c = 0; c < cyc.sets.size(); ++c) {
            if (which == PropertyKind::p_e) {
                if (cyc.sets[c] == ns.ids) {
                    matched = static_cast<int>(c);
                    break;
                }
            } else {
                Rational d = hausdorff(sys, cyc.sets[c], ns.ids);
                if (d < p.epsilon) {
                    matched = static_cast<int>(c);
                    matched_d = d;
                    break;
                }
            }
        }
        if (matched >= 0) {
            v.notes["matched:" + ns.name] =
                cyc.names[matched] + (which == PropertyKind::p_a ? " d_H=" + matched_d.to_string() : "");
            continue;
        }
        Witness w;
        w.kind = "candidate";
        w.left_name = w.right_name = ns.name;
        w.left_ids = w.right_ids = ns.ids;
        bool first = true;
        Rational best(0);
        for (std::size_t c = 0; c < cyc.sets.size(); ++c) {
            Rational d = hausdorff(sys, cyc.sets[c], ns.ids);
            if (first || d < best) {
                best = d;
                w.nearest_cycle = cyc.names[c];
                first = false;
            }
        }
        if (!first) w.nearest_distance = best.to_string();
        v.holds = false;
        v.witness = std::move(w);
        break;
    }
    v.stats["candidates_checked"] = checked;
    return v;
}

namespace detail {

/// Dynamic bitset over point ids with the operations the viable-set walk
/// needs.
struct Bits {
    std::vector<uint64_t> w;

    explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
    void set(int i) { w[i >> 6] |= 1ULL << (i & 63); }
    bool any() const {
        for (uint64_t x : w)
            if (x) return true;
        return false;
    }
    Bits intersect(const Bits& o) const {
        Bits r;
        r.w.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) r.w[i] = w[i] & o.w[i];
        return r;
    }
    bool operator==(const Bits& o) const { return w == o.w; }
    std::size_t hash() const {
        std::size_t h = 1469598103934665603ULL;
        for (uint64_t x : w) {
            h ^= x;
            h *= 1099511628211ULL;
        }
        return h;
    }
    template <typename Fn>
    void for_each(Fn fn) const {
        for (std::size_t wi = 0; wi < w.size(); ++wi) {
            uint64_t x = w[wi];
            while (x) {
                int b = std::countr_zero(x);
                fn(static_cast<int>(wi * 64 + b));
                x &= x - 1;
            }
        }
    }
};

}  // namespace detail

/// Decides whether every delta-pseudo-orbit of length <= L (two-sided:
/// window [-L, L]) is epsilon-shadowed by a true orbit / backward
/// trajectory / full trajectory, by advancing the set of still-feasible
/// shadow states along every chain-graph edge. A pseudo-orbit is
/// unshadowable iff some path empties its viable set; the witness is a
/// shortest such pseudo-orbit (ties broken lexicographically).
inline Verdict check_shadowing(const FiniteSystem& sys, Direction dir, const Rational& epsilon,
                               const Rational& delta, int horizon) {
    if (!(epsilon > Rational(0)) || !(delta > Rational(0)))
        throw std::invalid_argument("shadowing: epsilon and delta must be > 0");
    if (horizon < 1) throw std::invalid_argument("shadowing: horizon must be >= 1");

    ChainGraph g = build_chain_graph(sys, delta);
    int n = sys.size();
    int window = dir == Direction::two_sided ? 2 * horizon : horizon;
    long long start_index = dir == Direction::forward ? 0 : -static_cast<long long>(horizon);

    // backward trajectories and full trajectories live on cycles of the map,
    // so their shadows are constrained to periodic points
    detail::Bits periodic(n);
    bool restrict_start = dir != Direction::forward;
    if (restrict_start)
        for (const PointSet& c : cycles_of_map(sys))
            for (int v : c) periodic.set(v);

    std::vector<detail::Bits> ball_cache(n, detail::Bits(0));
    std::vector<char> ball_ready(n, 0);
    auto ball = [&](int x) -> const detail::Bits& {
        if (!ball_ready[x]) {
            detail::Bits b(n);
            for (int z = 0; z < n; ++z)
                if (sys.dist(z, x) < epsilon) b.set(z);
            ball_cache[x] = std::move(b);
            ball_ready[x] = 1;
        }
        return ball_cache[x];
    };

    struct State {
        int node;
        detail::Bits viable;
        int parent;
        int depth;
    };
    std::vector<State> states;
    struct KeyHash {
        std::size_t operator()(const std::pair<int, std::size_t>& k) const {
            return std::hash<long long>()((static_cast<long long>(k.first) << 32) ^
                                          static_cast<long long>(k.second));
        }
    };
    std::unordered_map<std::pair<int, std::size_t>, std::vector<int>, KeyHash> memo;
    auto seen = [&](int node, const detail::Bits& v) {
        auto& bucket = memo[{node, v.hash()}];
        for (int idx : bucket)
            if (states[idx].node == node && states[idx].viable == v) return true;
        return false;
    };

    Verdict verdict;
    verdict.stats["chain_edges"] = g.edge_count;
    auto fail_with = [&](int state_idx, std::optional<int> extra_node) {
        std::vector<int> path;
        if (extra_node) path.push_back(*extra_node);
        for (int idx = state_idx; idx != -1; idx = states[idx].parent) path.push_back(states[idx].node);
        std::reverse(path.begin(), path.end());
        Witness w;
        w.kind = "pseudo-orbit";
        w.pseudo_orbit = std::move(path);
        w.window_start = start_index;
        verdict.holds = false;
        verdict.witness = std::move(w);
    };

    const long long state_cap = 1LL << 22;
    for (int x0 = 0; x0 < n && verdict.holds; ++x0) {
        detail::Bits v0 = restrict_start ? ball(x0).intersect(periodic) : ball(x0);
        if (!v0.any()) {
            states.push_back({x0, v0, -1, 0});
            fail_with(static_cast<int>(states.size()) - 1, std::nullopt);
            break;
        }
        if (seen(x0, v0)) continue;
        memo[{x0, v0.hash()}].push_back(static_cast<int>(states.size()));
        states.push_back({x0, std::move(v0), -1, 0});
    }

    for (std::size_t qi = 0; qi < states.size() && verdict.holds; ++qi) {
        if (states[qi].depth >= window) continue;
        detail::Bits image(n);
        states[qi].viable.for_each([&](int z) { image.set(sys.image(z)); });
        for (int y : g.succ[states[qi].node]) {
            detail::Bits next = image.intersect(ball(y));
            if (!next.any()) {
                fail_with(static_cast<int>(qi), y);
                break;
            }
            if (seen(y, next)) continue;
            memo[{y, next.hash()}].push_back(static_cast<int>(states.size()));
            states.push_back({y, std::move(next), static_cast<int>(qi), states[qi].depth + 1});
            if (static_cast<long long>(states.size()) > state_cap)
                throw std::runtime_error("shadowing: state cap exceeded; reduce horizon or delta");
        }
    }
    verdict.stats["states_explored"] = static_cast<long long>(states.size());
    return verdict;
}

}  // namespace ictlab
