#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/system.hpp"

namespace ictlab {

using SetFamily = std::vector<PointSet>;

struct NamedSet {
    std::string name;
    PointSet ids;
};

/// Canonical family order: members lexicographic by their sorted id lists
/// (which sorts by min id first). Duplicates removed.
inline SetFamily canonical_family(SetFamily family) {
    for (PointSet& s : family) s = make_point_set(std::move(s));
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    return family;
}

/// Exact Hausdorff distance between nonempty point sets of one system.
inline Rational hausdorff(const FiniteSystem& sys, const PointSet& a, const PointSet& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty set");
    Rational worst(0);
    auto one_sided = [&](const PointSet& from, const PointSet& to) {
        for (int x : from) {
            bool first = true;
            Rational best(0);
            for (int y : to) {
                Rational d = sys.dist(x, y);
                if (first || d < best) {
                    best = d;
                    first = false;
                }
            }
            if (best > worst) worst = best;
        }
    };
    one_sided(a, b);
    one_sided(b, a);
    return worst;
}

/// One-sided family gap: max over A in F of min over B in G of d_H(A, B).
/// Zero iff every member of F appears in G as a set.
inline Rational family_gap(const FiniteSystem& sys, const SetFamily& f, const SetFamily& g) {
    if (f.empty() || g.empty()) throw std::invalid_argument("family_gap: empty family");
    Rational worst(0);
    for (const PointSet& a : f) {
        bool first = true;
        Rational best(0);
        for (const PointSet& b : g) {
            Rational d = hausdorff(sys, a, b);
            if (first || d < best) {
                best = d;
                first = false;
            }
        }
        if (best > worst) worst = best;
    }
    return worst;
}

}  // namespace ictlab
