#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ictlab/system.hpp"

namespace ictlab {

struct FormatError : std::runtime_error {
    int line;
    FormatError(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// Line-based, bit-exact system format:
///   space plane | space circle q=<int> | space torus q=<int> | space cylinder q=<int>
///   point <id> <coord> [<coord>]
///   map <src-id> <dst-id>
/// Coordinates use the canonical rational text form; ids are consecutive
/// integers from 0; '#' starts a comment.
inline std::string save_system(const FiniteSystem& sys) {
    std::ostringstream out;
    out << "space " << sys.space().to_string() << "\n";
    for (int i = 0; i < sys.size(); ++i) {
        out << "point " << i;
        for (const Rational& c : sys.point(i)) out << " " << c.to_string();
        out << "\n";
    }
    for (int i = 0; i < sys.size(); ++i) out << "map " << i << " " << sys.image(i) << "\n";
    return out.str();
}

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline long long parse_id(const std::string& tok, int line) {
    for (char c : tok)
        if (c < '0' || c > '9') throw FormatError(line, "bad id \"" + tok + "\"");
    try {
        return std::stoll(tok);
    } catch (const std::exception&) {
        throw FormatError(line, "bad id \"" + tok + "\"");
    }
}

}  // namespace detail

inline FiniteSystem load_system(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_space = false;
    SpaceDescriptor space;
    std::vector<Coords> points;
    std::vector<int> targets;
    std::vector<int> map_src_line;

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;

        if (toks[0] == "space") {
            if (have_space) throw FormatError(lineno, "duplicate space line");
            if (toks.size() == 2 && toks[1] == "plane") {
                space = SpaceDescriptor::plane();
            } else if (toks.size() == 3 && toks[2].rfind("q=", 0) == 0) {
                long long q = detail::parse_id(toks[2].substr(2), lineno);
                if (toks[1] == "circle")
                    space = SpaceDescriptor::circle(q);
                else if (toks[1] == "torus")
                    space = SpaceDescriptor::torus(q);
                else if (toks[1] == "cylinder")
                    space = SpaceDescriptor::cylinder(q);
                else
                    throw FormatError(lineno, "unknown space kind \"" + toks[1] + "\"");
            } else {
                throw FormatError(lineno, "malformed space line");
            }
            have_space = true;
        } else if (toks[0] == "point") {
            if (!have_space) throw FormatError(lineno, "point before space line");
            if (toks.size() < 3 || toks.size() > 4) throw FormatError(lineno, "malformed point line");
            long long id = detail::parse_id(toks[1], lineno);
            if (id != static_cast<long long>(points.size()))
                throw FormatError(lineno, points.size() > 0 && id < static_cast<long long>(points.size())
                                              ? "duplicate or out-of-order id " + std::to_string(id)
                                              : "ids must be consecutive from 0, got " + std::to_string(id));
            Coords c;
            for (std::size_t i = 2; i < toks.size(); ++i) {
                try {
                    c.push_back(Rational::parse(toks[i]));
                } catch (const ParseError& e) {
                    throw FormatError(lineno, e.what());
                }
            }
            if (space.kind == SpaceKind::plane) {
                if (points.empty())
                    space.dims = static_cast<int>(c.size());
                else if (static_cast<int>(c.size()) != space.dims)
                    throw FormatError(lineno, "inconsistent coordinate arity");
            }
            if (static_cast<int>(c.size()) != space.dims)
                throw FormatError(lineno, "expected " + std::to_string(space.dims) + " coordinate(s)");
            for (int axis = 0; axis < space.dims; ++axis)
                if (!coordinate_in_domain(space, axis, c[axis]))
                    throw FormatError(lineno, "coordinate " + c[axis].to_string() +
                                                  " outside the space's fundamental domain");
            points.push_back(std::move(c));
        } else if (toks[0] == "map") {
            if (toks.size() != 3) throw FormatError(lineno, "malformed map line");
            long long src = detail::parse_id(toks[1], lineno);
            long long dst = detail::parse_id(toks[2], lineno);
            if (src != static_cast<long long>(targets.size()))
                throw FormatError(lineno, "map lines must cover ids consecutively from 0, got " +
                                              std::to_string(src));
            targets.push_back(static_cast<int>(dst));
            map_src_line.push_back(lineno);
        } else {
            throw FormatError(lineno, "unknown directive \"" + toks[0] + "\"");
        }
    }
    if (!have_space) throw FormatError(lineno, "missing space line");
    if (points.empty()) throw FormatError(lineno, "no points");
    if (targets.size() != points.size())
        throw FormatError(lineno, "map is not total: " + std::to_string(targets.size()) + " of " +
                                      std::to_string(points.size()) + " ids mapped");
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (targets[i] < 0 || targets[i] >= static_cast<int>(points.size()))
            throw FormatError(map_src_line[i], "map target " + std::to_string(targets[i]) +
                                                   " refers to a missing point");
    try {
        return FiniteSystem::create(space, std::move(points), std::move(targets));
    } catch (const std::invalid_argument& e) {
        throw FormatError(lineno, e.what());
    }
}

}  // namespace ictlab
