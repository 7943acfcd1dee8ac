#include "zxwring/diagram.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace zxw {

const char* kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::Z: return "Z";
        case VertexKind::X: return "X";
        case VertexKind::W: return "W";
        case VertexKind::CoW: return "coW";
        case VertexKind::H: return "H";
        case VertexKind::Identity: return "identity";
        case VertexKind::Swap: return "swap";
        case VertexKind::Cup: return "cup";
        case VertexKind::Cap: return "cap";
        case VertexKind::NumState: return "numstate";
        case VertexKind::NumGate: return "numgate";
        case VertexKind::Box: return "box";
        case VertexKind::CtrlBox: return "ctrlbox";
    }
    return "?";
}

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

int log2_exact(int n) {
    if (n < 1) return -1;
    int e = 0;
    while ((1 << e) < n) ++e;
    return (1 << e) == n ? e : -1;
}

int Diagram::add_vertex(Vertex v) {
    int id = next_id++;
    verts.emplace(id, std::move(v));
    touch();
    return id;
}

int Diagram::add_z(int m, int n, GaussianRational c) {
    Vertex v;
    v.kind = VertexKind::Z;
    v.legs = m + n;
    v.param = std::move(c);
    return add_vertex(std::move(v));
}

int Diagram::add_x(int m, int n, int k) {
    if (k != 0 && k != 1) throw std::invalid_argument("X spider: k must be 0 or 1");
    Vertex v;
    v.kind = VertexKind::X;
    v.legs = m + n;
    v.k = k;
    return add_vertex(std::move(v));
}

int Diagram::add_w(int fanout) {
    if (fanout < 1) throw std::invalid_argument("W: fanout must be >= 1");
    Vertex v;
    v.kind = VertexKind::W;
    v.legs = fanout + 1;
    v.w_in = 0;
    return add_vertex(std::move(v));
}

int Diagram::add_cow(int fanin) {
    if (fanin < 1) throw std::invalid_argument("coW: fanin must be >= 1");
    Vertex v;
    v.kind = VertexKind::CoW;
    v.legs = fanin + 1;
    v.w_in = 0;
    return add_vertex(std::move(v));
}

int Diagram::add_h() {
    Vertex v;
    v.kind = VertexKind::H;
    v.legs = 2;
    return add_vertex(std::move(v));
}

int Diagram::add_identity() {
    Vertex v;
    v.kind = VertexKind::Identity;
    v.legs = 2;
    return add_vertex(std::move(v));
}

int Diagram::add_swap() {
    Vertex v;
    v.kind = VertexKind::Swap;
    v.legs = 4;
    return add_vertex(std::move(v));
}

int Diagram::add_cup() {
    Vertex v;
    v.kind = VertexKind::Cup;
    v.legs = 2;
    return add_vertex(std::move(v));
}

int Diagram::add_cap() {
    Vertex v;
    v.kind = VertexKind::Cap;
    v.legs = 2;
    return add_vertex(std::move(v));
}

int Diagram::add_numstate(GaussianRational a) {
    Vertex v;
    v.kind = VertexKind::NumState;
    v.legs = 1;
    v.param = std::move(a);
    return add_vertex(std::move(v));
}

int Diagram::add_numgate(GaussianRational a) {
    Vertex v;
    v.kind = VertexKind::NumGate;
    v.legs = 2;
    v.param = std::move(a);
    return add_vertex(std::move(v));
}

int Diagram::add_box(const std::string& name) {
    auto it = matrices.find(name);
    if (it == matrices.end()) throw std::invalid_argument("box: unregistered matrix " + name);
    int p = log2_exact(it->second.rows), q = log2_exact(it->second.cols);
    if (p < 0 || q < 0)
        throw std::invalid_argument("box: matrix dims must be powers of two for wires: " + name);
    Vertex v;
    v.kind = VertexKind::Box;
    v.legs = p + q;
    v.name = name;
    return add_vertex(std::move(v));
}

int Diagram::add_ctrlbox(const std::string& name) {
    auto it = matrices.find(name);
    if (it == matrices.end()) throw std::invalid_argument("ctrlbox: unregistered matrix " + name);
    if (it->second.rows != it->second.cols)
        throw std::invalid_argument("ctrlbox: matrix must be square: " + name);
    int t = log2_exact(it->second.rows);
    if (t < 0)
        throw std::invalid_argument("ctrlbox: dimension must be a power of two: " + name);
    Vertex v;
    v.kind = VertexKind::CtrlBox;
    v.legs = 2 * t + 1;
    v.name = name;
    return add_vertex(std::move(v));
}

void Diagram::set_matrix(const std::string& name, CMatrix m) {
    matrices[name] = std::move(m);
    touch();
}

void Diagram::connect(PortRef a, PortRef b) {
    if (a == b) throw std::invalid_argument("connect: port paired with itself");
    edges.emplace_back(a, b);
    touch();
}

const Vertex& Diagram::vertex(int id) const {
    auto it = verts.find(id);
    if (it == verts.end()) throw std::invalid_argument("vertex: unknown id");
    return it->second;
}

Vertex& Diagram::vertex(int id) {
    auto it = verts.find(id);
    if (it == verts.end()) throw std::invalid_argument("vertex: unknown id");
    return it->second;
}

int Diagram::box_out_ports(const Vertex& v) const {
    auto it = matrices.find(v.name);
    if (it == matrices.end()) throw std::invalid_argument("box: unregistered matrix " + v.name);
    return log2_exact(it->second.rows);
}

int Diagram::box_in_ports(const Vertex& v) const {
    auto it = matrices.find(v.name);
    if (it == matrices.end()) throw std::invalid_argument("box: unregistered matrix " + v.name);
    return log2_exact(it->second.cols);
}

namespace {

void check_fixed_arity(const Diagram& d, int id, const Vertex& v, std::vector<Violation>& out) {
    auto want = [&](int n) {
        if (v.legs != n) {
            std::ostringstream os;
            os << "vertex " << id << " (" << kind_name(v.kind) << "): expected " << n
               << " legs, has " << v.legs;
            out.push_back({os.str()});
        }
    };
    switch (v.kind) {
        case VertexKind::H:
        case VertexKind::Identity:
        case VertexKind::NumGate:
        case VertexKind::Cup:
        case VertexKind::Cap: want(2); break;
        case VertexKind::NumState: want(1); break;
        case VertexKind::Swap: want(4); break;
        case VertexKind::W:
        case VertexKind::CoW:
            if (v.legs < 2) {
                std::ostringstream os;
                os << "vertex " << id << " (" << kind_name(v.kind) << "): needs >= 2 legs";
                out.push_back({os.str()});
            }
            if (v.w_in < 0 || v.w_in >= v.legs) {
                std::ostringstream os;
                os << "vertex " << id << ": missing W input designation";
                out.push_back({os.str()});
            }
            break;
        case VertexKind::X:
            if (v.k != 0 && v.k != 1) {
                std::ostringstream os;
                os << "vertex " << id << " (X): k must be 0 or 1";
                out.push_back({os.str()});
            }
            break;
        case VertexKind::Box:
        case VertexKind::CtrlBox: {
            auto it = d.matrices.find(v.name);
            if (it == d.matrices.end()) {
                std::ostringstream os;
                os << "vertex " << id << ": matrix '" << v.name << "' not registered";
                out.push_back({os.str()});
                break;
            }
            const CMatrix& m = it->second;
            int p = log2_exact(m.rows), q = log2_exact(m.cols);
            if (p < 0 || q < 0) {
                std::ostringstream os;
                os << "vertex " << id << ": matrix '" << v.name << "' dims not powers of two";
                out.push_back({os.str()});
                break;
            }
            if (v.kind == VertexKind::CtrlBox && m.rows != m.cols) {
                std::ostringstream os;
                os << "vertex " << id << ": ctrlbox matrix '" << v.name << "' not square";
                out.push_back({os.str()});
                break;
            }
            int expect = v.kind == VertexKind::Box ? p + q : 2 * p + 1;
            want(expect);
            break;
        }
        case VertexKind::Z: break;  // any arity, including 0-leg scalars
    }
}

}  // namespace

std::vector<Violation> validate(const Diagram& d) {
    std::vector<Violation> out;
    auto bad_ref = [&](const PortRef& r) {
        auto it = d.verts.find(r.v);
        if (it == d.verts.end()) {
            std::ostringstream os;
            os << "reference to unknown vertex " << r.v;
            out.push_back({os.str()});
            return true;
        }
        if (r.p < 0 || r.p >= it->second.legs) {
            std::ostringstream os;
            os << "vertex " << r.v << ": port " << r.p << " out of range (legs="
               << it->second.legs << ")";
            out.push_back({os.str()});
            return true;
        }
        return false;
    };

    std::map<PortRef, int> uses;
    for (const auto& [a, b] : d.edges) {
        if (!bad_ref(a)) ++uses[a];
        if (!bad_ref(b)) ++uses[b];
        if (a == b) {
            std::ostringstream os;
            os << "edge joins vertex " << a.v << " port " << a.p << " to itself";
            out.push_back({os.str()});
        }
    }
    for (const auto& r : d.inputs)
        if (!bad_ref(r)) ++uses[r];
    for (const auto& r : d.outputs)
        if (!bad_ref(r)) ++uses[r];

    for (const auto& [id, v] : d.verts) {
        check_fixed_arity(d, id, v, out);
        for (int p = 0; p < v.legs; ++p) {
            auto it = uses.find({id, p});
            int n = it == uses.end() ? 0 : it->second;
            if (n == 0) {
                std::ostringstream os;
                os << "vertex " << id << " port " << p << " dangling";
                out.push_back({os.str()});
            } else if (n > 1) {
                std::ostringstream os;
                os << "vertex " << id << " port " << p << " multiply used";
                out.push_back({os.str()});
            }
        }
    }
    return out;
}

void require_valid(const Diagram& d) {
    auto vs = validate(d);
    if (vs.empty()) return;
    std::ostringstream os;
    os << "invalid diagram:";
    for (const auto& v : vs) os << "\n  " << v.message;
    throw std::invalid_argument(os.str());
}

std::map<int, int> merge_into(Diagram& dst, const Diagram& src) {
    std::map<int, int> remap;
    for (const auto& [id, v] : src.verts) remap[id] = dst.add_vertex(v);
    for (const auto& [a, b] : src.edges)
        dst.edges.emplace_back(PortRef{remap[a.v], a.p}, PortRef{remap[b.v], b.p});
    for (const auto& [name, m] : src.matrices) {
        auto it = dst.matrices.find(name);
        if (it != dst.matrices.end()) {
            if (!(it->second == m))
                throw std::invalid_argument("merge: conflicting matrices named '" + name + "'");
        } else {
            dst.matrices.emplace(name, m);
        }
    }
    dst.touch();
    return remap;
}

Diagram compose_seq(const Diagram& d1, const Diagram& d2) {
    if (d1.outputs.size() != d2.inputs.size())
        throw std::invalid_argument("compose_seq: boundary arity mismatch");
    Diagram out = d1;
    auto remap = merge_into(out, d2);
    for (std::size_t i = 0; i < d1.outputs.size(); ++i) {
        PortRef a = d1.outputs[i];
        PortRef b{remap[d2.inputs[i].v], d2.inputs[i].p};
        out.edges.emplace_back(a, b);
    }
    out.outputs.clear();
    for (const auto& r : d2.outputs) out.outputs.push_back({remap[r.v], r.p});
    out.touch();
    return out;
}

Diagram compose_par(const Diagram& d1, const Diagram& d2) {
    Diagram out = d1;
    auto remap = merge_into(out, d2);
    for (const auto& r : d2.inputs) out.inputs.push_back({remap[r.v], r.p});
    for (const auto& r : d2.outputs) out.outputs.push_back({remap[r.v], r.p});
    out.touch();
    return out;
}

}  // namespace zxw
