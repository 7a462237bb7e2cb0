#pragma once

#include <string>

#include <json.hpp>

#include "ictlab/shadowing.hpp"

namespace ictlab {

/// Deterministic, key-sorted JSON report for a verdict. nlohmann::json keeps
/// object keys sorted; all exact values are emitted as canonical text.
inline nlohmann::json verdict_to_json(const std::string& property, const VariantParams& params,
                                      const Verdict& v) {
    nlohmann::json j;
    j["property"] = property;
    j["holds"] = v.holds;
    nlohmann::json p;
    p["delta"] = params.delta.to_string();
    p["epsilon"] = params.epsilon.to_string();
    p["tau"] = params.tau.to_string();
    p["horizon"] = params.horizon;
    j["params"] = p;
    nlohmann::json stats;
    for (const auto& [k, value] : v.stats) stats[k] = value;
    j["examined_counts"] = stats;
    if (!v.notes.empty()) {
        nlohmann::json notes;
        for (const auto& [k, value] : v.notes) notes[k] = value;
        j["notes"] = notes;
    }
    if (v.witness) {
        nlohmann::json w;
        w["kind"] = v.witness->kind;
        if (!v.witness->pseudo_orbit.empty()) {
            w["pseudo_orbit"] = v.witness->pseudo_orbit;
            w["window_start"] = v.witness->window_start;
        }
        if (!v.witness->left_name.empty()) {
            w["left"] = v.witness->left_name;
            w["left_ids"] = v.witness->left_ids;
            w["right"] = v.witness->right_name;
            w["right_ids"] = v.witness->right_ids;
        }
        if (!v.witness->nearest_cycle.empty()) {
            w["nearest_cycle"] = v.witness->nearest_cycle;
            w["nearest_distance"] = v.witness->nearest_distance;
        }
        j["witness"] = w;
    }
    return j;
}

}  // namespace ictlab
