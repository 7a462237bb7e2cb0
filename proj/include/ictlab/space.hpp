#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/rational.hpp"

namespace ictlab {

/// Ambient spaces. Circle coordinates are residues j/q in [0,1); the grid
/// denominator q lives here. A cylinder is circle(q) x line and hosts
/// stacked-circle systems whose fiber heights do not wrap.
enum class SpaceKind { plane, circle, torus, cylinder };

struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::plane;
    long long q = 0;  // circle grid denominator; 0 for plane
    int dims = 2;     // plane may be 1- or 2-dimensional

    static SpaceDescriptor plane(int dims = 2) {
        if (dims != 1 && dims != 2) throw std::invalid_argument("plane dims must be 1 or 2");
        return {SpaceKind::plane, 0, dims};
    }
    static SpaceDescriptor circle(long long q) {
        check_q(q);
        return {SpaceKind::circle, q, 1};
    }
    static SpaceDescriptor torus(long long q) {
        check_q(q);
        return {SpaceKind::torus, q, 2};
    }
    static SpaceDescriptor cylinder(long long q) {
        check_q(q);
        return {SpaceKind::cylinder, q, 2};
    }

    bool operator==(const SpaceDescriptor&) const = default;

    std::string to_string() const {
        switch (kind) {
            case SpaceKind::plane: return "plane";
            case SpaceKind::circle: return "circle q=" + std::to_string(q);
            case SpaceKind::torus: return "torus q=" + std::to_string(q);
            case SpaceKind::cylinder: return "cylinder q=" + std::to_string(q);
        }
        return "?";
    }

private:
    static void check_q(long long q) {
        if (q < 2) throw std::invalid_argument("circle grid q must be >= 2");
    }
};

using Coords = std::vector<Rational>;

namespace detail {

inline Rational circle_metric(const Rational& a, const Rational& b) {
    Rational d = (a - b).abs();
    return min(d, Rational(1) - d);
}

}  // namespace detail

/// True iff x is a valid coordinate for the given axis of the space:
/// circle axes need residues j/q in [0,1); plane and cylinder-height axes
/// accept any exact value.
inline bool coordinate_in_domain(const SpaceDescriptor& space, int axis, const Rational& x) {
    bool circular = space.kind == SpaceKind::circle || space.kind == SpaceKind::torus ||
                    (space.kind == SpaceKind::cylinder && axis == 0);
    if (!circular) return true;
    if (x.is_negative() || x >= Rational(1)) return false;
    return (x * Rational(space.q)).is_integer();
}

/// Exact metric: L-infinity on the plane, arc distance min(|a-b|, 1-|a-b|)
/// on circle axes, max of the component metrics on products.
inline Rational distance(const SpaceDescriptor& space, std::span<const Rational> a,
                         std::span<const Rational> b) {
    if (a.size() != b.size() || static_cast<int>(a.size()) != space.dims)
        throw std::invalid_argument("distance: coordinate arity mismatch");
    switch (space.kind) {
        case SpaceKind::plane: {
            Rational d = (a[0] - b[0]).abs();
            for (std::size_t i = 1; i < a.size(); ++i) d = max(d, (a[i] - b[i]).abs());
            return d;
        }
        case SpaceKind::circle:
            return detail::circle_metric(a[0], b[0]);
        case SpaceKind::torus:
            return max(detail::circle_metric(a[0], b[0]), detail::circle_metric(a[1], b[1]));
        case SpaceKind::cylinder:
            return max(detail::circle_metric(a[0], b[0]), (a[1] - b[1]).abs());
    }
    throw std::logic_error("unreachable");
}

}  // namespace ictlab
