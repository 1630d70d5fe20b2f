#pragma once

/*
 * Machine-readable reports.  One envelope for every command: the command
 * echo, the input file with a content hash, the window and word cap, a
 * result object, and the warnings collected along the way.  Dimension
 * vectors serialize as sorted {degree, dim} pairs under their window
 * bounds; a degree that failed certification lands in "uncertified" and
 * never as a number.  Key order is fixed, so identical inputs produce
 * byte-identical output.
 */

#include "gorlab/invariants.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace gorlab::report {

using Json = nlohmann::ordered_json;

// FNV-1a, 64 bit, of the raw file bytes
inline std::string fnv1a64(const std::string& bytes) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

inline Json dims_json(const GradedDims& v) {
    Json out;
    out["window"] = Json{{"lo", v.lo}, {"hi", v.hi}};
    Json entries = Json::array();
    for (const auto& [n, d] : v.dims)
        if (d != 0 && !v.uncertified.count(n))
            entries.push_back(Json{{"degree", n}, {"dim", d}});
    out["dims"] = entries;
    out["uncertified"] = std::vector<int>(v.uncertified.begin(), v.uncertified.end());
    return out;
}

inline Json pd_json(const PDReport& rep) {
    Json out;
    out["verdict"] = rep.verdict;
    out["formal_dim"] = rep.formal_dim;
    if (!rep.fundamental_class.empty()) out["fundamental_class"] = rep.fundamental_class;
    Json ranks = Json::array();
    for (const auto& [k, r] : rep.pairing_ranks)
        ranks.push_back(Json{{"degree", k}, {"rank", r}});
    out["pairing_ranks"] = ranks;
    return out;
}

inline Json tor_routes_json(const TorRoutes& tr) {
    Json out;
    out["dims"] = dims_json(tr.agreed);
    Json routes = Json::array();
    if (tr.closure) routes.push_back("closure");
    if (tr.resolution) routes.push_back("resolution");
    out["routes"] = routes;
    return out;
}

inline Json ext_routes_json(const ExtRoutes& gr) {
    Json out;
    out["dims"] = dims_json(gr.agreed);
    Json routes = Json::array();
    if (gr.closure) routes.push_back("closure");
    if (gr.resolution) routes.push_back("resolution");
    if (gr.reflected) routes.push_back("reflected");
    out["routes"] = routes;
    return out;
}

inline Json gorenstein_json(const GorensteinReport& rep) {
    Json out;
    out["t"] = dims_json(rep.t);
    out["g"] = dims_json(rep.g);
    if (rep.gorenstein)
        out["gorenstein"] = *rep.gorenstein;
    else
        out["gorenstein"] = "undecided";
    if (rep.degree) out["degree"] = *rep.degree;
    return out;
}

inline Json equivalence_json(const EquivalenceReport& rep) {
    Json out;
    out["t_algebra"] = dims_json(rep.t_algebra);
    out["t_homology"] = dims_json(rep.t_homology);
    out["pd"] = pd_json(rep.pd);
    out["gorenstein"] = rep.gorenstein;
    out["agreement"] = true;  // a mismatch throws before a report exists
    return out;
}

inline Json product_json(const ProductReport& rep) {
    Json out;
    out["t_base"] = dims_json(rep.t_base);
    out["t_fiber"] = dims_json(rep.t_fiber);
    out["t_total"] = dims_json(rep.t_total);
    out["convolution"] = rep.convolution;
    auto verdict = [](const std::optional<bool>& v) -> Json {
        if (!v) return "undecided";
        return *v;
    };
    out["base_gorenstein"] = verdict(rep.base_gorenstein);
    out["fiber_gorenstein"] = verdict(rep.fiber_gorenstein);
    out["total_gorenstein"] = verdict(rep.total_gorenstein);
    return out;
}

inline Json fiber_json(const FiberHomologyReport& rep) {
    Json out;
    out["word_cap"] = rep.word_cap;
    out["dims"] = dims_json(rep.dims);
    Json classes = Json::array();
    for (const auto& [n, reps] : rep.classes) {
        Json entry;
        entry["degree"] = n;
        entry["classes"] = reps;
        classes.push_back(entry);
    }
    out["classes"] = classes;
    return out;
}

inline Json cohomology_json(const CohomologyResult& H, bool with_bases) {
    Json out;
    out["dims"] = dims_json(H.dims);
    if (with_bases) {
        Json reps = Json::array();
        for (const auto& [n, elems] : H.reps) {
            // representatives at uncertified degrees are band-capped
            // candidates; listing them would overstate what is known
            if (elems.empty() || H.dims.uncertified.count(n)) continue;
            Json entry;
            entry["degree"] = n;
            std::vector<std::string> labels;
            for (const Element& e : elems) labels.push_back(e.str());
            entry["classes"] = labels;
            reps.push_back(entry);
        }
        out["classes"] = reps;
    }
    return out;
}

inline Json model_json(const MinimalModel& mm) {
    Json out;
    Json gens = Json::array();
    for (int i = 0; i < mm.model.size(); ++i) {
        const Generator& g = mm.model.generator(i);
        Json entry;
        entry["name"] = g.name;
        entry["degree"] = g.degree;
        std::string dv = mm.model.from_terms(mm.model.d_of_gen(i)).str();
        entry["d"] = dv;
        gens.push_back(entry);
    }
    out["generators"] = gens;
    return out;
}

inline Json closure_json(const AcyclicClosure& cl) {
    Json out;
    Json gens = Json::array();
    const Cdga& T = cl.ext.total;
    for (int i = cl.ext.n_base; i < T.size(); ++i) {
        Json entry;
        entry["name"] = T.generator(i).name;
        entry["degree"] = T.generator(i).degree;
        entry["d"] = T.from_terms(T.d_of_gen(i)).str();
        gens.push_back(entry);
    }
    out["closure_generators"] = gens;
    out["word_cap"] = cl.cap;
    out["verified_through"] = cl.verified_through;
    return out;
}

struct Meta {
    std::string command;
    std::string input_path;
    std::string input_hash;
    int window = 0;
    int word_cap = 0;
};

inline Json envelope(const Meta& m, Json result, const std::vector<std::string>& warnings) {
    Json j;
    j["command"] = m.command;
    j["input"] = Json{{"path", m.input_path}, {"hash", m.input_hash}};
    j["window"] = m.window;
    j["word_cap"] = m.word_cap;
    j["result"] = std::move(result);
    j["warnings"] = warnings;
    return j;
}

inline Json error_json(const Meta& m, const std::string& kind, const std::string& what) {
    Json j;
    j["command"] = m.command;
    j["input"] = Json{{"path", m.input_path}, {"hash", m.input_hash}};
    j["error"] = Json{{"kind", kind}, {"message", what}};
    return j;
}

}  // namespace gorlab::report
