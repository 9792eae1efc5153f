// Copyright 2026 The Roam Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROAM_JSON_IO_HPP
#define ROAM_JSON_IO_HPP

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "roam/instance.hpp"
#include "roam/ranking.hpp"

namespace roam {

using nlohmann::json;

namespace detail {
inline void reject_unknown_fields(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(ErrorCode::BadInput, "unknown field \"" + it.key() + "\" in " + where);
}
}  // namespace detail

/// Instance schema:
/// {"n": int, "revenues": [num...], "past_assortments": [[int...]...],
///  "sales": [{"assortment": int, "freq": {"<product>": num, ...}}...],
///  "eta": num, "norm": "l1"|"linf"}
inline RawInstance parse_raw_instance(const json& j) {
    if (!j.is_object()) fail(ErrorCode::BadInput, "instance must be a JSON object");
    detail::reject_unknown_fields(j, {"n", "revenues", "past_assortments", "sales", "eta", "norm"}, "instance");
    for (const char* key : {"n", "revenues", "past_assortments", "sales", "eta", "norm"})
        if (!j.contains(key)) fail(ErrorCode::BadInput, std::string("missing field \"") + key + "\"");

    RawInstance raw;
    if (!j["n"].is_number_integer()) fail(ErrorCode::BadInput, "\"n\" must be an integer");
    raw.n = j["n"].get<int>();
    if (!j["revenues"].is_array()) fail(ErrorCode::BadInput, "\"revenues\" must be an array");
    for (const auto& r : j["revenues"]) {
        if (!r.is_number()) fail(ErrorCode::BadInput, "revenues must be numbers");
        raw.revenues.push_back(r.get<double>());
    }
    if (!j["past_assortments"].is_array()) fail(ErrorCode::BadInput, "\"past_assortments\" must be an array");
    for (const auto& a : j["past_assortments"]) {
        if (!a.is_array()) fail(ErrorCode::BadInput, "each past assortment must be an array");
        std::vector<int> members;
        for (const auto& i : a) {
            if (!i.is_number_integer()) fail(ErrorCode::BadInput, "assortment members must be integers");
            members.push_back(i.get<int>());
        }
        raw.past_assortments.push_back(std::move(members));
    }
    if (!j["sales"].is_array()) fail(ErrorCode::BadInput, "\"sales\" must be an array");
    raw.sales.resize(raw.past_assortments.size());
    std::set<int> seen;
    for (const auto& entry : j["sales"]) {
        if (!entry.is_object()) fail(ErrorCode::BadInput, "sales entries must be objects");
        detail::reject_unknown_fields(entry, {"assortment", "freq"}, "sales entry");
        if (!entry.contains("assortment") || !entry.contains("freq"))
            fail(ErrorCode::BadInput, "sales entry needs \"assortment\" and \"freq\"");
        int m = entry["assortment"].get<int>();
        if (m < 0 || m >= static_cast<int>(raw.past_assortments.size()))
            fail(ErrorCode::IndexOutOfRange, "sales assortment index " + std::to_string(m));
        if (seen.count(m)) fail(ErrorCode::BadInput, "duplicate sales entry for assortment " + std::to_string(m));
        seen.insert(m);
        for (auto it = entry["freq"].begin(); it != entry["freq"].end(); ++it) {
            int prod = 0;
            try {
                prod = std::stoi(it.key());
            } catch (const std::exception&) {
                fail(ErrorCode::BadInput, "frequency key \"" + it.key() + "\" is not a product index");
            }
            raw.sales[static_cast<size_t>(m)][prod] = it.value().get<double>();
        }
    }
    if (seen.size() != raw.past_assortments.size())
        fail(ErrorCode::BadInput, "sales must cover every past assortment");
    if (!j["eta"].is_number()) fail(ErrorCode::BadInput, "\"eta\" must be a number");
    raw.eta = j["eta"].get<double>();
    std::string norm = j["norm"].get<std::string>();
    if (norm == "l1")
        raw.norm = Norm::L1;
    else if (norm == "linf")
        raw.norm = Norm::LInf;
    else
        fail(ErrorCode::BadInput, "norm must be \"l1\" or \"linf\"");
    return raw;
}

inline json instance_to_json(const Instance& inst) {
    json j;
    j["n"] = inst.n;
    json revs = json::array();
    for (int i = 1; i <= inst.n; ++i) revs.push_back(inst.revenues[static_cast<size_t>(i)]);
    j["revenues"] = revs;
    json pa = json::array();
    for (const auto& s : inst.past) pa.push_back(s.members());
    j["past_assortments"] = pa;
    json sales = json::array();
    for (int m = 0; m < inst.num_assortments(); ++m) {
        json freq = json::object();
        for (int i : inst.past[static_cast<size_t>(m)].members())
            freq[std::to_string(i)] = inst.v[static_cast<size_t>(m)][static_cast<size_t>(i)];
        sales.push_back({{"assortment", m}, {"freq", freq}});
    }
    j["sales"] = sales;
    j["eta"] = inst.eta;
    j["norm"] = inst.norm == Norm::L1 ? "l1" : "linf";
    return j;
}

inline Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::BadInput, "cannot open " + path);
    json j;
    in >> j;
    return validate_instance(parse_raw_instance(j));
}

inline void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::BadInput, "cannot write " + path);
    out << instance_to_json(inst).dump(2) << "\n";
}

/// RankingModel schema: {"atoms": [{"sigma": [int...], "weight": num}...]}
/// where sigma[i] is the rank of product i.
inline RankingModel parse_ranking_model(const json& j, int n) {
    if (!j.is_object() || !j.contains("atoms")) fail(ErrorCode::BadInput, "ranking model needs \"atoms\"");
    detail::reject_unknown_fields(j, {"atoms"}, "ranking model");
    RankingModel model;
    for (const auto& atom : j["atoms"]) {
        detail::reject_unknown_fields(atom, {"sigma", "weight"}, "atom");
        std::vector<int> sigma = atom["sigma"].get<std::vector<int>>();
        if (static_cast<int>(sigma.size()) != n + 1) fail(ErrorCode::BadInput, "sigma must have length n+1");
        model.atoms.push_back({Ranking(sigma), atom["weight"].get<double>()});
    }
    model.check();
    return model;
}

inline json ranking_model_to_json(const RankingModel& model) {
    json atoms = json::array();
    for (const auto& [sigma, weight] : model.atoms) atoms.push_back({{"sigma", sigma.ranks()}, {"weight", weight}});
    return json{{"atoms", atoms}};
}

}  // namespace roam

#endif  // ROAM_JSON_IO_HPP
