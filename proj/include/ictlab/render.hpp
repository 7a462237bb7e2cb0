#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ictlab/chain_graph.hpp"
#include "ictlab/system.hpp"

namespace ictlab {

/// Directed-graph export: solid arrows for map edges, dotted for edges that
/// exist only in the chain graph.
inline std::string render_dot(const FiniteSystem& sys, const ChainGraph* graph = nullptr) {
    std::ostringstream out;
    out << "digraph system {\n";
    for (int i = 0; i < sys.size(); ++i) {
        out << "  n" << i << " [label=\"" << i << "\\n(";
        const Coords& c = sys.point(i);
        for (std::size_t k = 0; k < c.size(); ++k) out << (k ? ", " : "") << c[k].to_string();
        out << ")\"];\n";
    }
    for (int i = 0; i < sys.size(); ++i) out << "  n" << i << " -> n" << sys.image(i) << ";\n";
    if (graph) {
        for (int i = 0; i < sys.size(); ++i)
            for (int j : graph->succ[i])
                if (j != sys.image(i)) out << "  n" << i << " -> n" << j << " [style=dotted];\n";
    }
    out << "}\n";
    return out.str();
}

namespace detail {

/// Exact coordinate -> decimal text with 4 fractional digits, floored.
/// Keeps the renderer free of floating point.
inline std::string decimal4(const Rational& x) {
    Rational scaled = x * Rational(10000);
    long long v = scaled.floor();
    bool neg = v < 0;
    long long a = neg ? -v : v;
    std::string frac = std::to_string(a % 10000);
    frac.insert(frac.begin(), 4 - frac.size(), '0');
    return (neg ? "-" : "") + std::to_string(a / 10000) + "." + frac;
}

}  // namespace detail

/// Planar SVG: points at exact (scaled) coordinates, solid arrows for map
/// edges, dotted arrows for chain-graph-only edges, small loops on fixed
/// points. Works for plane, cylinder and torus systems (products unroll to
/// the unit square); pure circle systems have no planar layout.
inline std::string render_svg(const FiniteSystem& sys, const ChainGraph* graph = nullptr,
                              int scale = 160) {
    if (sys.space().kind == SpaceKind::circle)
        throw std::invalid_argument("svg needs a planar or product space; use dot instead");

    auto coord = [&](int id, int axis) {
        Rational v = axis < sys.space().dims ? sys.point(id)[axis] : Rational(0);
        return v * Rational(scale);
    };
    Rational xmin = coord(0, 0), xmax = xmin, ymin = coord(0, 1), ymax = ymin;
    for (int i = 0; i < sys.size(); ++i) {
        xmin = min(xmin, coord(i, 0));
        xmax = max(xmax, coord(i, 0));
        ymin = min(ymin, coord(i, 1));
        ymax = max(ymax, coord(i, 1));
    }
    Rational pad(scale / 8 + 8);
    auto px = [&](int id) { return detail::decimal4(coord(id, 0) - xmin + pad); };
    // svg y grows downward; flip so the plane renders the usual way up
    auto py = [&](int id) { return detail::decimal4(ymax - coord(id, 1) + pad); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
        << detail::decimal4(xmax - xmin + pad * Rational(2)) << "\" height=\""
        << detail::decimal4(ymax - ymin + pad * Rational(2)) << "\">\n";
    out << "  <defs><marker id=\"a\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"3\" "
           "orient=\"auto\"><path d=\"M0,0 L7,3 L0,6 z\"/></marker></defs>\n";

    auto arrow = [&](int i, int j, bool dotted) {
        out << "  <line x1=\"" << px(i) << "\" y1=\"" << py(i) << "\" x2=\"" << px(j) << "\" y2=\""
            << py(j) << "\" stroke=\"black\"" << (dotted ? " stroke-dasharray=\"3 3\"" : "")
            << " marker-end=\"url(#a)\"/>\n";
    };
    for (int i = 0; i < sys.size(); ++i) {
        int j = sys.image(i);
        if (j == i)
            out << "  <circle cx=\"" << px(i) << "\" cy=\"" << py(i)
                << "\" r=\"5\" fill=\"none\" stroke=\"black\"/>\n";
        else
            arrow(i, j, false);
    }
    if (graph) {
        for (int i = 0; i < sys.size(); ++i)
            for (int j : graph->succ[i])
                if (j != sys.image(i) && j != i) arrow(i, j, true);
    }
    for (int i = 0; i < sys.size(); ++i)
        out << "  <circle cx=\"" << px(i) << "\" cy=\"" << py(i) << "\" r=\"2\"/>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace ictlab
