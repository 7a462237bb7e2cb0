#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/rational.hpp"
#include "ictlab/space.hpp"

namespace ictlab {

using PointSet = std::vector<int>;  // sorted, duplicate-free ids

inline PointSet make_point_set(std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

/// Finite point set with exact coordinates and a total self-map.
/// Immutable after construction; validation happens in create().
class FiniteSystem {
public:
    static FiniteSystem create(SpaceDescriptor space, std::vector<Coords> points,
                               std::vector<int> map) {
        FiniteSystem sys;
        sys.space_ = space;
        sys.points_ = std::move(points);
        sys.map_ = std::move(map);
        sys.validate();
        sys.build_caches();
        return sys;
    }

    const SpaceDescriptor& space() const { return space_; }
    int size() const { return static_cast<int>(points_.size()); }
    bool bijective() const { return bijective_; }

    /// Minimum pairwise distance; computed on first use (single-threaded
    /// initialization), cached afterwards.
    const Rational& min_gap() const {
        if (!min_gap_ready_) {
            Rational best;
            bool have = false;
            for (int i = 0; i < size(); ++i)
                for (int j = i + 1; j < size(); ++j) {
                    Rational d = distance(space_, points_[i], points_[j]);
                    if (!have || d < best) {
                        best = d;
                        have = true;
                    }
                }
            min_gap_ = have ? best : Rational(1);  // single point: conventionally 1
            min_gap_ready_ = true;
        }
        return min_gap_;
    }

    const Coords& point(int id) const {
        check_id(id);
        return points_[id];
    }

    int image(int id) const {
        check_id(id);
        return map_[id];
    }

    const PointSet& preimages(int id) const {
        check_id(id);
        return preimages_[id];
    }

    Rational dist(int a, int b) const {
        check_id(a);
        check_id(b);
        return distance(space_, points_[a], points_[b]);
    }

    /// Id of the point with these exact coordinates, or -1.
    int find(const Coords& coords) const {
        for (int i = 0; i < size(); ++i)
            if (points_[i] == coords) return i;
        return -1;
    }

    const std::vector<int>& map() const { return map_; }

private:
    void check_id(int id) const {
        if (id < 0 || id >= size()) throw std::out_of_range("unknown point id " + std::to_string(id));
    }

    void validate() const {
        if (points_.empty()) throw std::invalid_argument("system: no points");
        if (map_.size() != points_.size()) throw std::invalid_argument("system: map is not total");
        for (const Coords& c : points_) {
            if (static_cast<int>(c.size()) != space_.dims)
                throw std::invalid_argument("system: coordinate arity mismatch");
            for (int axis = 0; axis < space_.dims; ++axis)
                if (!coordinate_in_domain(space_, axis, c[axis]))
                    throw std::invalid_argument("system: coordinate outside fundamental domain");
        }
        for (int target : map_)
            if (target < 0 || target >= static_cast<int>(points_.size()))
                throw std::invalid_argument("system: map target out of range");
    }

    void build_caches() {
        int n = size();
        preimages_.assign(n, {});
        for (int i = 0; i < n; ++i) preimages_[map_[i]].push_back(i);
        std::vector<bool> hit(n, false);
        bijective_ = true;
        for (int t : map_) {
            if (hit[t]) bijective_ = false;
            hit[t] = true;
        }
        // duplicate coordinates would make the metric degenerate; the
        // distance is zero iff the coordinates are structurally equal
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return points_[a] < points_[b]; });
        for (int i = 0; i + 1 < n; ++i)
            if (points_[order[i]] == points_[order[i + 1]])
                throw std::invalid_argument("system: duplicate point coordinates");
    }

    SpaceDescriptor space_;
    std::vector<Coords> points_;
    std::vector<int> map_;
    std::vector<PointSet> preimages_;
    bool bijective_ = false;
    mutable Rational min_gap_;
    mutable bool min_gap_ready_ = false;
};

}  // namespace ictlab
