#ifndef CHAINORDER_IO_HPP
#define CHAINORDER_IO_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "face_lattice.hpp"
#include "normal_form.hpp"
#include "polytope.hpp"
#include "poset.hpp"

namespace chainorder {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline Json to_json(const Poset& p) {
    Json covers = Json::array();
    for (auto [a, b] : p.covers()) covers.push_back({p.element(a), p.element(b)});
    return Json{{"elements", p.elements()}, {"covers", covers}};
}

/// {"elements": [ids], "covers": [[lo, hi], ...]}
inline Poset poset_from_json(const Json& j) {
    try {
        auto ids = j.at("elements").get<std::vector<std::string>>();
        std::unordered_map<std::string, int> index;
        for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<int>(i));
        std::vector<std::pair<int, int>> covers;
        for (const auto& c : j.at("covers")) {
            if (!c.is_array() || c.size() != 2) throw FormatError("poset: each cover must be a pair");
            auto lo = c[0].get<std::string>(), hi = c[1].get<std::string>();
            if (!index.count(lo) || !index.count(hi)) throw FormatError("poset: cover mentions unknown element");
            covers.emplace_back(index[lo], index[hi]);
        }
        return Poset::make(std::move(ids), std::move(covers));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("poset: ") + e.what());
    }
}

inline Json to_json(const LinearRow& r) { return Json{{"coeffs", r.coeffs}, {"rhs", r.rhs}}; }

inline Json to_json(const HRep& h) {
    Json ineqs = Json::array(), eqs = Json::array();
    for (const auto& r : h.ineqs) ineqs.push_back(to_json(r));
    for (const auto& r : h.eqs) eqs.push_back(to_json(r));
    return Json{{"vars", h.vars}, {"ineqs", ineqs}, {"eqs", eqs}};
}

inline HRep hrep_from_json(const Json& j) {
    try {
        HRep h;
        h.vars = j.at("vars").get<std::vector<std::string>>();
        auto rows = [&](const char* key, std::vector<LinearRow>& out) {
            if (!j.contains(key)) return;
            for (const auto& r : j.at(key)) {
                LinearRow row{r.at("coeffs").get<std::vector<std::int64_t>>(), r.at("rhs").get<std::int64_t>()};
                if (row.coeffs.size() != h.vars.size()) throw FormatError("hrep: row length differs from vars");
                out.push_back(std::move(row));
            }
        };
        rows("ineqs", h.ineqs);
        rows("eqs", h.eqs);
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("hrep: ") + e.what());
    }
}

inline Json to_json(const VRep& v) { return Json{{"vertices", v.vertices}}; }

inline VRep vrep_from_json(const Json& j) {
    try {
        VRep v{j.at("vertices").get<std::vector<Point>>()};
        return v.canonicalize();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("vrep: ") + e.what());
    }
}

inline Json to_json(const FaceLattice& fl) {
    Json faces = Json::array();
    for (std::size_t i = 0; i < fl.size(); ++i)
        faces.push_back(Json{{"id", i}, {"dim", fl.dim[i]}, {"vertices", fl.faces[i].indices()}});
    Json covers = Json::array();
    for (auto [a, b] : fl.covers) covers.push_back({a, b});
    return Json{{"dim", fl.dimension()}, {"f_vector", f_vector(fl)}, {"faces", faces}, {"covers", covers}};
}

inline Json to_json(const FaceNormalForm& nf, const Tau& tau, int k) {
    detail::NfShape s(tau, k);
    Json blocks = Json::array();
    for (const auto& b : nf.pi.blocks) {
        Json ids = Json::array();
        for (int x : b) ids.push_back(s.id(x));
        blocks.push_back(ids);
    }
    auto sets = [&](const std::vector<std::uint64_t>& masks) {
        Json out = Json::array();
        for (std::size_t i = 0; i < masks.size(); ++i) {
            Json ids = Json::array();
            for (int x : s.elements(static_cast<int>(i) + 1, masks[i])) ids.push_back(s.id(x));
            out.push_back(ids);
        }
        return out;
    };
    return Json{{"pi", blocks},
                {"zero_sets", sets(nf.zero_sets)},
                {"eq_sets", sets(nf.eq_sets)},
                {"chain_tight", nf.chain_tight},
                {"codimension", codimension(nf, tau, k)}};
}

inline Json to_json(const InjectionReport& r) {
    return Json{{"tau", r.tau.parts},          {"k", r.k},
                {"source_counts", r.source_counts}, {"image_counts", r.image_counts},
                {"target_counts", r.target_counts}, {"injective", r.injective},
                {"codim_preserved", r.codim_preserved}, {"images_valid", r.images_valid},
                {"inverse_ok", r.inverse_ok},       {"failures", r.failures}};
}

inline Json to_json(const MonotoneReport& r) {
    return Json{{"tau", r.tau.parts}, {"f_vectors", r.f}, {"monotone", r.monotone}, {"failures", r.failures}};
}

/// Name of the polytope at split k: order at k = 0, chain at k = l, chain-order otherwise.
inline std::string polytope_name(const Tau& tau, int k) {
    if (k == 0) return "order";
    if (k == tau.length()) return "chain";
    return "chain-order";
}

/// "tau",k,polytope,f_0,...,f_{n-1}
inline std::string csv_row(const std::string& label, const std::string& k, const std::string& polytope,
                           const std::vector<std::uint64_t>& f) {
    std::ostringstream os;
    os << '"' << label << "\"," << k << ',' << polytope;
    for (auto x : f) os << ',' << x;
    return os.str();
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

}  // namespace chainorder

#endif  // CHAINORDER_IO_HPP
