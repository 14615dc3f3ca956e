// JSON rendering of typicality reports (schema "lzt.report/1").
#pragma once

#include <string>

#include <json.hpp>

#include "lzt/typicality.hpp"

namespace lzt {

inline constexpr const char* kReportSchema = "lzt.report/1";

inline nlohmann::ordered_json label_json(const IrrLabel& l) { return {{"n", l.n}, {"index", l.index}}; }

inline nlohmann::ordered_json class_json(const InertialClassLZ& s) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& c : s.parts) a.push_back(label_json(c));
    return a;
}

inline nlohmann::ordered_json to_json(const TypicalityReport& r) {
    using J = nlohmann::ordered_json;
    J cfg;
    cfg["n"] = r.n;
    cfg["p"] = r.p;
    cfg["M"] = r.M;
    cfg["I"] = r.I.parts;
    J labels = J::array();
    for (const auto& l : r.labels) labels.push_back(l.index);
    cfg["cuspidals"] = labels;
    if (r.kind == "main") cfg["m"] = r.m;
    J cons = J::array();
    for (const auto& c : r.constituents) {
        J e;
        e["irr"] = c.irr;
        e["dimension"] = c.dimension;
        e["multiplicities"] = c.multiplicities;
        if (c.witness) {
            e["witness"] = {{"class", class_json(c.witness->t)}, {"depth", c.witness->mprime}};
        } else {
            e["witness"] = nullptr;
        }
        cons.push_back(e);
    }
    J checks = J::object();
    for (const auto& [k, v] : r.checks) checks[k] = v;
    J out;
    out["schema"] = kReportSchema;
    out["kind"] = r.kind;
    out["configuration"] = cfg;
    out["class"] = class_json(r.inertial);
    out["constituents"] = cons;
    out["checks"] = checks;
    out["verdict"] = r.pass ? "PASS" : "FAIL";
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

}  // namespace lzt
