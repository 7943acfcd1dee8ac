#include "zxwring/json_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

namespace zxw {

using nlohmann::json;

namespace {

json complex_entry(std::complex<double> z) {
    if (z.imag() == 0.0) return json(z.real());
    return json::array({z.real(), z.imag()});
}

std::complex<double> entry_complex(const json& e, const std::string& where) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    throw JsonError(where + ": expected number or [re, im]");
}

const std::map<std::string, VertexKind>& kind_table() {
    static const std::map<std::string, VertexKind> t = {
        {"Z", VertexKind::Z},           {"X", VertexKind::X},
        {"W", VertexKind::W},           {"coW", VertexKind::CoW},
        {"H", VertexKind::H},           {"identity", VertexKind::Identity},
        {"swap", VertexKind::Swap},     {"cup", VertexKind::Cup},
        {"cap", VertexKind::Cap},       {"numstate", VertexKind::NumState},
        {"numgate", VertexKind::NumGate}, {"box", VertexKind::Box},
        {"ctrlbox", VertexKind::CtrlBox},
    };
    return t;
}

int fixed_arity(VertexKind k) {
    switch (k) {
        case VertexKind::H:
        case VertexKind::Identity:
        case VertexKind::NumGate:
        case VertexKind::Cup:
        case VertexKind::Cap: return 2;
        case VertexKind::NumState: return 1;
        case VertexKind::Swap: return 4;
        default: return -1;
    }
}

PortRef parse_ref(const json& e, const std::string& where) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw JsonError(where + ": expected [vertex_id, port]");
    return {e[0].get<int>(), e[1].get<int>()};
}

}  // namespace

std::string matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows; ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(complex_entry(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return rows.dump();
}

namespace {

CMatrix matrix_from(const json& rows, const std::string& where) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
        throw JsonError(where + ": expected an array of rows");
    int nr = static_cast<int>(rows.size());
    int nc = static_cast<int>(rows[0].size());
    CMatrix m(nr, nc);
    for (int r = 0; r < nr; ++r) {
        if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != nc)
            throw JsonError(where + ": ragged rows");
        for (int c = 0; c < nc; ++c)
            m.at(r, c) = entry_complex(rows[r][c], where);
    }
    return m;
}

}  // namespace

CMatrix matrix_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw JsonError(std::string("matrix JSON: ") + e.what());
    }
    return matrix_from(j, "matrix");
}

std::string diagram_to_json(const Diagram& d) {
    json j;
    json vs = json::array();
    for (const auto& [id, v] : d.verts) {
        json jv;
        jv["id"] = id;
        jv["kind"] = kind_name(v.kind);
        json params = json::array();
        switch (v.kind) {
            case VertexKind::Z:
            case VertexKind::NumState:
            case VertexKind::NumGate: {
                auto z = v.param.to_complex();
                params = json::array({z.real(), z.imag()});
                break;
            }
            case VertexKind::X: params = json::array({v.k}); break;
            case VertexKind::Box:
            case VertexKind::CtrlBox: params = json::array({v.name}); break;
            default: break;
        }
        jv["params"] = std::move(params);
        if (v.kind == VertexKind::W || v.kind == VertexKind::CoW) jv["w_input"] = v.w_in;
        vs.push_back(std::move(jv));
    }
    j["vertices"] = std::move(vs);

    json es = json::array();
    for (const auto& [a, b] : d.edges)
        es.push_back(json::array({json::array({a.v, a.p}), json::array({b.v, b.p})}));
    j["edges"] = std::move(es);

    auto refs = [](const std::vector<PortRef>& rs) {
        json arr = json::array();
        for (const auto& r : rs) arr.push_back(json::array({r.v, r.p}));
        return arr;
    };
    j["inputs"] = refs(d.inputs);
    j["outputs"] = refs(d.outputs);

    json mats = json::object();
    for (const auto& [name, m] : d.matrices) mats[name] = json::parse(matrix_to_json(m));
    j["matrices"] = std::move(mats);

    return j.dump(2) + "\n";
}

namespace {

json matpoly_json(const MatPoly& p) {
    json j;
    json vars = json::array();
    for (const auto& v : p.vars) {
        json jv;
        jv["name"] = v.name;
        jv["dim"] = p.d;
        if (v.blackbox) jv["entries"] = "blackbox";
        else jv["entries"] = json::parse(matrix_to_json(v.M));
        vars.push_back(std::move(jv));
    }
    j["vars"] = std::move(vars);

    const int n = p.n_vars();
    json cs = json::array();
    for (const auto& [mask, c] : p.coeffs.coeffs) {
        json jc;
        json subset = json::array();
        for (int jvar = 1; jvar <= n; ++jvar)
            if (mask >> (n - jvar) & 1u) subset.push_back(p.vars[jvar - 1].name);
        jc["subset"] = std::move(subset);
        jc["c"] = complex_entry(c.to_complex());
        cs.push_back(std::move(jc));
    }
    j["coeffs"] = std::move(cs);
    return j;
}

MatPoly matpoly_from(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("vars") || !j["vars"].is_array() ||
        !j.contains("coeffs") || !j["coeffs"].is_array())
        throw JsonError(where + ": expected {vars: [...], coeffs: [...]}");

    std::vector<MatVar> vars;
    int d = 0;
    for (const auto& jv : j["vars"]) {
        if (!jv.is_object() || !jv.contains("name") || !jv["name"].is_string())
            throw JsonError(where + ": each var needs a name");
        MatVar v;
        v.name = jv["name"].get<std::string>();
        int vd = jv.contains("dim") ? jv["dim"].get<int>() : 0;
        if (jv.contains("entries") && jv["entries"].is_string()) {
            if (jv["entries"].get<std::string>() != "blackbox")
                throw JsonError(where + ": entries must be rows or \"blackbox\"");
            v.blackbox = true;
            if (vd <= 0) throw JsonError(where + ": black box '" + v.name + "' needs a dim");
            v.M = CMatrix::identity(vd);
        } else if (jv.contains("entries")) {
            v.M = matrix_from(jv["entries"], where + ": var '" + v.name + "'");
            if (vd > 0 && (v.M.rows != vd || v.M.cols != vd))
                throw JsonError(where + ": var '" + v.name + "' entries disagree with dim");
            vd = v.M.rows;
        } else {
            throw JsonError(where + ": var '" + v.name + "' needs entries");
        }
        if (d == 0) d = vd;
        else if (d != vd) throw JsonError(where + ": mixed matrix dimensions");
        vars.push_back(std::move(v));
    }
    if (d == 0) d = 1;

    std::map<std::string, int> pos;  // 1-based
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!pos.emplace(vars[i].name, static_cast<int>(i) + 1).second)
            throw JsonError(where + ": duplicate variable '" + vars[i].name + "'");
    }

    const int n = static_cast<int>(vars.size());
    MultilinearPoly coeffs(n);
    for (const auto& jc : j["coeffs"]) {
        if (!jc.is_object() || !jc.contains("subset") || !jc["subset"].is_array() ||
            !jc.contains("c"))
            throw JsonError(where + ": each coeff needs {subset, c}");
        unsigned mask = 0;
        for (const auto& nm : jc["subset"]) {
            if (!nm.is_string()) throw JsonError(where + ": subset entries are names");
            auto it = pos.find(nm.get<std::string>());
            if (it == pos.end())
                throw JsonError(where + ": subset names unknown variable '" +
                                nm.get<std::string>() + "'");
            unsigned bit = 1u << (n - it->second);
            if (mask & bit)
                throw JsonError(where + ": variable '" + nm.get<std::string>() +
                                "' repeated in one subset");
            mask |= bit;
        }
        coeffs.add_to(mask, GaussianRational::from(entry_complex(jc["c"], where + ": coeff")));
    }
    return make_matpoly(d, std::move(vars), std::move(coeffs));
}

}  // namespace

std::string matpoly_to_json(const MatPoly& p) { return matpoly_json(p).dump(2) + "\n"; }

MatPoly matpoly_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw JsonError(std::string("matpoly JSON: ") + e.what());
    }
    return matpoly_from(j, "matpoly");
}

std::string factorlist_to_json(const FactorList& f) {
    json j;
    j["scalar"] = json::array({f.scalar.real(), f.scalar.imag()});
    json fs = json::array();
    for (const auto& p : f.factors) fs.push_back(matpoly_json(p));
    j["factors"] = std::move(fs);
    return j.dump(2) + "\n";
}

Diagram diagram_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw JsonError(std::string("diagram JSON: ") + e.what());
    }
    if (!j.is_object()) throw JsonError("diagram JSON: top level must be an object");
    for (const char* key : {"vertices", "edges", "inputs", "outputs"})
        if (!j.contains(key) || !j[key].is_array())
            throw JsonError(std::string("diagram JSON: missing array field '") + key + "'");

    Diagram d;
    if (j.contains("matrices")) {
        if (!j["matrices"].is_object()) throw JsonError("diagram JSON: 'matrices' must be an object");
        for (auto& [name, rows] : j["matrices"].items())
            d.matrices[name] = matrix_from(rows, "matrix '" + name + "'");
    }

    for (const auto& jv : j["vertices"]) {
        if (!jv.is_object() || !jv.contains("id") || !jv.contains("kind"))
            throw JsonError("vertex: needs 'id' and 'kind'");
        int id = jv["id"].get<int>();
        std::string ks = jv["kind"].get<std::string>();
        auto kit = kind_table().find(ks);
        if (kit == kind_table().end())
            throw JsonError("vertex " + std::to_string(id) + ": unknown kind '" + ks + "'");
        Vertex v;
        v.kind = kit->second;
        json params = jv.contains("params") ? jv["params"] : json::array();
        switch (v.kind) {
            case VertexKind::Z:
            case VertexKind::NumState:
            case VertexKind::NumGate: {
                std::complex<double> c{0.0, 0.0};
                if (params.is_number()) c = {params.get<double>(), 0.0};
                else if (params.is_array() && params.size() >= 1) {
                    c = {params[0].get<double>(),
                         params.size() >= 2 ? params[1].get<double>() : 0.0};
                } else if (!params.is_array() || !params.empty()) {
                    throw JsonError("vertex " + std::to_string(id) + ": bad params");
                }
                v.param = GaussianRational::from(c);
                break;
            }
            case VertexKind::X:
                if (!params.is_array() || params.size() != 1 || !params[0].is_number_integer())
                    throw JsonError("vertex " + std::to_string(id) + ": X needs params [k]");
                v.k = params[0].get<int>();
                if (v.k != 0 && v.k != 1)
                    throw JsonError("vertex " + std::to_string(id) + ": X k must be 0 or 1");
                break;
            case VertexKind::Box:
            case VertexKind::CtrlBox:
                if (!params.is_array() || params.size() != 1 || !params[0].is_string())
                    throw JsonError("vertex " + std::to_string(id) +
                                    ": box needs params [matrix_name]");
                v.name = params[0].get<std::string>();
                if (!d.matrices.count(v.name))
                    throw JsonError("vertex " + std::to_string(id) + ": matrix '" + v.name +
                                    "' not in the matrices table");
                break;
            default: break;
        }
        if (v.kind == VertexKind::W || v.kind == VertexKind::CoW) {
            if (!jv.contains("w_input") || !jv["w_input"].is_number_integer())
                throw JsonError("vertex " + std::to_string(id) + ": missing w_input");
            v.w_in = jv["w_input"].get<int>();
        }
        if (d.verts.count(id)) throw JsonError("vertex " + std::to_string(id) + ": duplicate id");
        d.verts.emplace(id, std::move(v));
        d.next_id = std::max(d.next_id, id + 1);
    }

    auto note_ref = [&](const PortRef& r, std::map<int, int>& max_port, const std::string& where) {
        if (!d.verts.count(r.v))
            throw JsonError(where + ": reference to unknown vertex " + std::to_string(r.v));
        if (r.p < 0) throw JsonError(where + ": negative port");
        auto& mp = max_port[r.v];
        mp = std::max(mp, r.p + 1);
    };
    std::map<int, int> max_port;
    for (const auto& je : j["edges"]) {
        if (!je.is_array() || je.size() != 2) throw JsonError("edge: expected a pair of refs");
        PortRef a = parse_ref(je[0], "edge"), b = parse_ref(je[1], "edge");
        note_ref(a, max_port, "edge");
        note_ref(b, max_port, "edge");
        d.edges.emplace_back(a, b);
    }
    for (const auto& jr : j["inputs"]) {
        PortRef r = parse_ref(jr, "inputs");
        note_ref(r, max_port, "inputs");
        d.inputs.push_back(r);
    }
    for (const auto& jr : j["outputs"]) {
        PortRef r = parse_ref(jr, "outputs");
        note_ref(r, max_port, "outputs");
        d.outputs.push_back(r);
    }

    // Arity: fixed by kind where the kind fixes it, from the matrix for boxes,
    // otherwise from the port references (validate() will catch gaps).
    for (auto& [id, v] : d.verts) {
        int fa = fixed_arity(v.kind);
        if (fa >= 0) {
            v.legs = fa;
        } else if (v.kind == VertexKind::Box || v.kind == VertexKind::CtrlBox) {
            const CMatrix& m = d.matrices.at(v.name);
            int p = log2_exact(m.rows), q = log2_exact(m.cols);
            if (p < 0 || q < 0)
                throw JsonError("matrix '" + v.name + "': dims must be powers of two");
            if (v.kind == VertexKind::CtrlBox && m.rows != m.cols)
                throw JsonError("matrix '" + v.name + "': ctrlbox needs a square matrix");
            v.legs = v.kind == VertexKind::Box ? p + q : 2 * p + 1;
        } else {
            auto it = max_port.find(id);
            v.legs = it == max_port.end() ? 0 : it->second;
        }
    }
    d.touch();
    return d;
}

}  // namespace zxw
