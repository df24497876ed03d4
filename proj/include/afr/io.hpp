#pragma once

#include "afr/afr_model.hpp"
#include "afr/flex_model.hpp"

#include <json.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace afr {

using Json = nlohmann::json;

namespace io_detail {

inline Rat number_field(const Json& j, const std::string& what) {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    throw ParseError(what + ": numbers must be exact strings");
}

inline std::vector<Rat> number_array(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected an array");
    std::vector<Rat> out;
    out.reserve(j.size());
    for (const Json& v : j) out.push_back(number_field(v, what));
    return out;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    return out;
}

}  // namespace io_detail

enum class ResourceFormat { Json, Csv };

// Raw ingestion: exact numbers, dt folded into the power bounds, e0 shifted
// away inside FlexResource. Validation is the caller's next step.
inline std::vector<FlexResource> parse_resources_raw(const std::string& text,
                                                     ResourceFormat format) {
    std::vector<FlexResource> out;
    if (format == ResourceFormat::Json) {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const Json::exception& e) {
            throw ParseError(std::string("resource document: ") + e.what());
        }
        if (!doc.is_object() || !doc.contains("resources"))
            throw ParseError("resource document: missing 'resources'");
        Rat dt = doc.contains("dt") ? io_detail::number_field(doc["dt"], "dt") : Rat(1);
        if (dt <= 0) throw ParseError("dt must be positive");
        for (const Json& rj : doc["resources"]) {
            if (!rj.contains("id")) throw ParseError("resource without 'id'");
            std::string id = rj["id"].get<std::string>();
            auto field = [&](const char* name) {
                if (!rj.contains(name))
                    throw ParseError("resource '" + id + "': missing '" + name + "'");
                return io_detail::number_array(rj[name], "resource '" + id + "' " + name);
            };
            std::vector<Rat> plo = field("p_min"), phi = field("p_max");
            std::vector<Rat> elo = field("e_min"), ehi = field("e_max");
            std::size_t T = plo.size();
            if (phi.size() != T || elo.size() != T || ehi.size() != T || T == 0)
                throw ParseError("resource '" + id + "': bound arrays must share a positive length");
            for (Rat& v : plo) v *= dt;
            for (Rat& v : phi) v *= dt;
            Rat e0 = rj.contains("e0") ? io_detail::number_field(rj["e0"], "e0") : Rat(0);
            out.emplace_back(id, std::move(plo), std::move(phi), std::move(elo), std::move(ehi),
                             std::move(e0));
        }
    } else {
        std::istringstream is(text);
        std::string line;
        bool header = true;
        struct RowsOf {
            std::vector<int> ts;
            std::vector<Rat> plo, phi, elo, ehi;
        };
        std::map<std::string, RowsOf> grouped;
        std::vector<std::string> order;
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto fields = io_detail::split_csv_line(line);
            if (header) {
                header = false;
                if (fields.size() == 6 && fields[0] == "id") continue;  // header row optional
            }
            if (fields.size() != 6)
                throw ParseError("csv: expected id,t,p_min,p_max,e_min,e_max");
            RowsOf& g = grouped[fields[0]];
            if (g.ts.empty()) order.push_back(fields[0]);
            g.ts.push_back(std::stoi(fields[1]));
            g.plo.push_back(rat_parse(fields[2]));
            g.phi.push_back(rat_parse(fields[3]));
            g.elo.push_back(rat_parse(fields[4]));
            g.ehi.push_back(rat_parse(fields[5]));
        }
        for (const std::string& id : order) {
            RowsOf& g = grouped[id];
            std::vector<std::size_t> perm(g.ts.size());
            for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
            std::sort(perm.begin(), perm.end(), [&](auto a, auto b) { return g.ts[a] < g.ts[b]; });
            std::vector<Rat> plo, phi, elo, ehi;
            for (std::size_t i = 0; i < perm.size(); ++i) {
                if (g.ts[perm[i]] != static_cast<int>(i + 1))
                    throw ParseError("csv: resource '" + id + "': intervals must cover 1..T");
                plo.push_back(g.plo[perm[i]]);
                phi.push_back(g.phi[perm[i]]);
                elo.push_back(g.elo[perm[i]]);
                ehi.push_back(g.ehi[perm[i]]);
            }
            out.emplace_back(id, std::move(plo), std::move(phi), std::move(elo), std::move(ehi));
        }
        if (out.empty()) throw ParseError("csv: no resource rows");
    }
    return out;
}

// Parse and validate; with repair set, hypothesis violations are tightened
// away instead of rejected.
inline ResourceSet parse_resources(const std::string& text, ResourceFormat format,
                                   bool repair = false) {
    std::vector<FlexResource> raw = parse_resources_raw(text, format);
    if (repair)
        for (FlexResource& r : raw) r = tighten_bounds(r);
    return ResourceSet(std::move(raw));
}

inline Json resource_to_json(const FlexResource& r) {
    Json rj;
    rj["id"] = r.id;
    rj["e0"] = rat_str(r.e0_shift);
    Json plo = Json::array(), phi = Json::array(), elo = Json::array(), ehi = Json::array();
    for (int t = 1; t <= r.T; ++t) {
        plo.push_back(rat_str(r.plo(t)));
        phi.push_back(rat_str(r.phi(t)));
        elo.push_back(rat_str(r.elo(t) + r.e0_shift));
        ehi.push_back(rat_str(r.ehi(t) + r.e0_shift));
    }
    rj["p_min"] = std::move(plo);
    rj["p_max"] = std::move(phi);
    rj["e_min"] = std::move(elo);
    rj["e_max"] = std::move(ehi);
    return rj;
}

// dt is already folded in, so serialized documents always carry dt = 1;
// parse(serialize(parse(x))) reproduces identical rationals.
inline std::string serialize_resources(const std::vector<FlexResource>& resources) {
    Json doc;
    doc["dt"] = "1";
    Json arr = Json::array();
    for (const FlexResource& r : resources) arr.push_back(resource_to_json(r));
    doc["resources"] = std::move(arr);
    return doc.dump(2) + "\n";
}

inline std::string serialize_resources(const ResourceSet& rs) {
    return serialize_resources(rs.members());
}

// ---------------------------------------------------------------------------
// Aggregated-region documents.
// ---------------------------------------------------------------------------

inline Json afr_to_json(const AfrModel& m, Json stats = Json()) {
    Json doc;
    doc["T"] = m.T;
    Json ids = Json::array();
    for (const std::string& id : m.resource_ids) ids.push_back(id);
    doc["resources"] = std::move(ids);
    doc["e0_total"] = rat_str(m.e0_total);
    Json rows = Json::array();
    for (std::size_t k = 0; k < m.directions.size(); ++k) {
        Json row;
        row["S"] = m.directions[k].S;
        row["lo"] = rat_str(m.lo[k]);
        row["hi"] = rat_str(m.hi[k]);
        rows.push_back(std::move(row));
    }
    doc["constraints"] = std::move(rows);
    if (!m.contributions.empty()) {
        Json contrib;
        for (const auto& [id, c] : m.contributions) {
            Json cj;
            cj["e0"] = rat_str(c.e0_shift);
            Json lo = Json::array(), hi = Json::array();
            for (std::size_t k = 0; k < m.directions.size(); ++k) {
                lo.push_back(rat_str(c.lo[k]));
                hi.push_back(rat_str(c.hi[k]));
            }
            cj["lo"] = std::move(lo);
            cj["hi"] = std::move(hi);
            contrib[id] = std::move(cj);
        }
        doc["contributions"] = std::move(contrib);
    }
    if (!stats.is_null()) doc["stats"] = std::move(stats);
    return doc;
}

inline std::string serialize_afr(const AfrModel& m, Json stats = Json()) {
    return afr_to_json(m, std::move(stats)).dump(2) + "\n";
}

// Constraints may arrive in any order; they are re-aligned to the canonical
// direction order and must cover every nonempty subset exactly once.
inline AfrModel parse_afr(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("afr document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("T") || !doc.contains("constraints"))
        throw ParseError("afr document: missing 'T' or 'constraints'");
    AfrModel m;
    m.T = doc["T"].get<int>();
    if (m.T < 0 || m.T > 62) throw ParseError("afr document: horizon out of range");
    m.e0_total = doc.contains("e0_total")
                     ? io_detail::number_field(doc["e0_total"], "e0_total")
                     : Rat(0);
    if (doc.contains("resources"))
        for (const Json& id : doc["resources"]) m.resource_ids.push_back(id.get<std::string>());
    m.directions = enumerate_directions(m.T);
    std::map<uint64_t, std::size_t> slot;
    for (std::size_t k = 0; k < m.directions.size(); ++k) slot[m.directions[k].mask] = k;
    m.lo.assign(m.directions.size(), Rat(0));
    m.hi.assign(m.directions.size(), Rat(0));
    std::vector<bool> seen(m.directions.size(), false);
    std::vector<std::size_t> doc_to_slot;
    for (const Json& row : doc["constraints"]) {
        uint64_t mask = 0;
        for (const Json& tau : row.at("S")) {
            int x = tau.get<int>();
            if (x < 1 || x > m.T) throw ParseError("afr document: interval out of range in S");
            mask |= uint64_t(1) << (x - 1);
        }
        auto it = slot.find(mask);
        if (it == slot.end() || seen[it->second])
            throw ParseError("afr document: duplicate or invalid subset");
        seen[it->second] = true;
        doc_to_slot.push_back(it->second);
        m.lo[it->second] = io_detail::number_field(row.at("lo"), "lo");
        m.hi[it->second] = io_detail::number_field(row.at("hi"), "hi");
    }
    for (bool b : seen)
        if (!b) throw ParseError("afr document: constraint family is incomplete");
    if (doc.contains("contributions")) {
        for (const auto& [id, cj] : doc["contributions"].items()) {
            ResourceContribution c;
            c.e0_shift = io_detail::number_field(cj.at("e0"), "contribution e0");
            std::vector<Rat> lo = io_detail::number_array(cj.at("lo"), "contribution lo");
            std::vector<Rat> hi = io_detail::number_array(cj.at("hi"), "contribution hi");
            if (lo.size() != m.directions.size() || hi.size() != m.directions.size())
                throw ParseError("afr document: contribution arrays misaligned");
            c.lo.assign(m.directions.size(), Rat(0));
            c.hi.assign(m.directions.size(), Rat(0));
            for (std::size_t j = 0; j < doc_to_slot.size(); ++j) {
                c.lo[doc_to_slot[j]] = lo[j];
                c.hi[doc_to_slot[j]] = hi[j];
            }
            m.contributions[id] = std::move(c);
        }
    }
    return m;
}

inline std::string serialize_afr_csv(const AfrModel& m) {
    std::ostringstream os;
    os << "S,lo,hi\n";
    for (std::size_t k = 0; k < m.directions.size(); ++k) {
        const auto& S = m.directions[k].S;
        for (std::size_t i = 0; i < S.size(); ++i) {
            if (i) os << ";";
            os << S[i];
        }
        os << "," << rat_str(m.lo[k]) << "," << rat_str(m.hi[k]) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Profiles and allocations.
// ---------------------------------------------------------------------------

inline std::vector<Rat> parse_profile(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ParseError(std::string("profile: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("E")) throw ParseError("profile: missing 'E'");
    return io_detail::number_array(doc["E"], "profile E");
}

inline std::string serialize_profile(const std::vector<Rat>& profile) {
    Json doc;
    Json arr = Json::array();
    for (const Rat& v : profile) arr.push_back(rat_str(v));
    doc["E"] = std::move(arr);
    return doc.dump(2) + "\n";
}

inline std::string serialize_allocation(const Allocation& alloc) {
    Json doc;
    Json inner;
    for (const auto& [id, traj] : alloc) {
        Json arr = Json::array();
        for (const Rat& v : traj) arr.push_back(rat_str(v));
        inner[id] = std::move(arr);
    }
    doc["allocations"] = std::move(inner);
    return doc.dump(2) + "\n";
}

inline Allocation parse_allocation(const std::string& text) {
    Json doc = Json::parse(text);
    Allocation out;
    for (const auto& [id, arr] : doc.at("allocations").items())
        out[id] = io_detail::number_array(arr, "allocation " + id);
    return out;
}

}  // namespace afr
