#include "zxwring/rules.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace zxw {

namespace {

struct Attachment {
    enum Kind { None, Edge, In, Out } kind = None;
    PortRef peer{};
    int idx = -1;
};

Attachment attachment_of(const Diagram& d, PortRef p) {
    for (const auto& e : d.edges) {
        if (e.first == p) return {Attachment::Edge, e.second, -1};
        if (e.second == p) return {Attachment::Edge, e.first, -1};
    }
    for (std::size_t i = 0; i < d.inputs.size(); ++i)
        if (d.inputs[i] == p) return {Attachment::In, {}, (int)i};
    for (std::size_t i = 0; i < d.outputs.size(); ++i)
        if (d.outputs[i] == p) return {Attachment::Out, {}, (int)i};
    return {};
}

struct PortIndex {
    std::map<PortRef, PortRef> peers;
    explicit PortIndex(const Diagram& d) {
        for (const auto& e : d.edges) {
            peers[e.first] = e.second;
            peers[e.second] = e.first;
        }
    }
    std::optional<PortRef> peer(PortRef p) const {
        auto it = peers.find(p);
        if (it == peers.end()) return std::nullopt;
        return it->second;
    }
};

void detach(Diagram& d, PortRef p) {
    std::erase_if(d.edges, [&](const auto& e) { return e.first == p || e.second == p; });
    d.touch();
}

void drop_edges_touching(Diagram& d, int v) {
    std::erase_if(d.edges, [v](const auto& e) { return e.first.v == v || e.second.v == v; });
    d.touch();
}

// Hook whatever `att` describes onto `port`.
void attach(Diagram& d, PortRef port, const Attachment& att) {
    switch (att.kind) {
        case Attachment::Edge: d.edges.push_back({port, att.peer}); break;
        case Attachment::In: d.inputs[att.idx] = port; break;
        case Attachment::Out: d.outputs[att.idx] = port; break;
        default: throw std::logic_error("attach: dangling attachment");
    }
    d.touch();
}

// Remove a two-port pass-through vertex, joining what sat on either side.
void splice_out(Diagram& d, int v, PortRef pa, PortRef pb) {
    Attachment a = attachment_of(d, pa);
    Attachment b = attachment_of(d, pb);
    if (a.kind == Attachment::Edge && a.peer == pb) {
        // closed loop through the vertex: a traced wire, scalar 2
        drop_edges_touching(d, v);
        d.verts.erase(v);
        d.add_z(0, 0, GaussianRational(1));
        d.touch();
        return;
    }
    detach(d, pa);
    detach(d, pb);
    d.verts.erase(v);
    d.touch();
    if (a.kind == Attachment::Edge && b.kind == Attachment::Edge) {
        d.edges.push_back({a.peer, b.peer});
    } else if (a.kind == Attachment::Edge) {
        attach(d, a.peer, b);
    } else if (b.kind == Attachment::Edge) {
        attach(d, b.peer, a);
    } else if (a.kind == Attachment::In && b.kind == Attachment::Out) {
        int id = d.add_identity();
        d.inputs[a.idx] = {id, 0};
        d.outputs[b.idx] = {id, 1};
    } else if (a.kind == Attachment::Out && b.kind == Attachment::In) {
        int id = d.add_identity();
        d.outputs[a.idx] = {id, 1};
        d.inputs[b.idx] = {id, 0};
    } else if (a.kind == Attachment::In && b.kind == Attachment::In) {
        int cap = d.add_cap();
        d.inputs[a.idx] = {cap, 0};
        d.inputs[b.idx] = {cap, 1};
    } else if (a.kind == Attachment::Out && b.kind == Attachment::Out) {
        int cup = d.add_cup();
        d.outputs[a.idx] = {cup, 0};
        d.outputs[b.idx] = {cup, 1};
    } else {
        throw std::logic_error("splice_out: dangling port");
    }
    d.touch();
}

bool z_family(const Vertex& v) {
    return v.kind == VertexKind::Z || v.kind == VertexKind::NumState ||
           v.kind == VertexKind::NumGate;
}

bool one_leg_state(const Vertex& v) {
    return v.kind == VertexKind::NumState || (v.kind == VertexKind::Z && v.legs == 1);
}

bool is_two_leg_passthrough(const Vertex& v) {
    // Everything of shape diag(1, c) or the plain wire: safe hops for the
    // square-killing chase (the |1> branch scale is irrelevant there).
    switch (v.kind) {
        case VertexKind::NumGate:
        case VertexKind::Identity: return true;
        case VertexKind::Z: return v.legs == 2;
        case VertexKind::CoW:
        case VertexKind::W: return v.legs == 2;
        default: return false;
    }
}

GaussianRational one() { return GaussianRational(1); }

// ---- individual matchers -------------------------------------------------

void match_s1(const Diagram& d, std::vector<Match>& ms) {
    std::set<std::pair<int, int>> seen;
    for (const auto& e : d.edges) {
        int a = e.first.v, b = e.second.v;
        if (a == b) continue;
        if (!z_family(d.vertex(a)) || !z_family(d.vertex(b))) continue;
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second) continue;
        Match m;
        m.anchor = key.first;
        m.binding.nums = {key.first, key.second};
        ms.push_back(std::move(m));
    }
}

Diagram apply_s1(const Diagram& d, const Match& m) {
    int va = (int)m.binding.nums[0], vb = (int)m.binding.nums[1];
    Diagram out = d;
    GaussianRational c = out.vertex(va).param * out.vertex(vb).param;
    std::vector<std::pair<PortRef, Attachment>> keep;
    for (int v : {va, vb})
        for (int p = 0; p < out.vertex(v).legs; ++p) {
            PortRef pr{v, p};
            Attachment att = attachment_of(out, pr);
            if (att.kind == Attachment::Edge && (att.peer.v == va || att.peer.v == vb))
                continue;  // internal wire, absorbed by the fusion
            keep.push_back({pr, att});
        }
    int nz = out.add_z(0, (int)keep.size(), c);
    int np = 0;
    for (auto& [pr, att] : keep) {
        PortRef tgt{nz, np++};
        if (att.kind == Attachment::Edge) {
            for (auto& e : out.edges) {
                if (e.first == pr) e.first = tgt;
                else if (e.second == pr) e.second = tgt;
            }
        } else if (att.kind == Attachment::In) {
            out.inputs[att.idx] = tgt;
        } else if (att.kind == Attachment::Out) {
            out.outputs[att.idx] = tgt;
        } else {
            throw std::logic_error("fuse: dangling port");
        }
    }
    drop_edges_touching(out, va);
    drop_edges_touching(out, vb);
    out.verts.erase(va);
    out.verts.erase(vb);
    out.touch();
    return out;
}

void match_s2(const Diagram& d, std::vector<Match>& ms) {
    for (const auto& [id, v] : d.verts) {
        bool hit = (v.kind == VertexKind::Z && v.legs == 2 && v.param == one()) ||
                   (v.kind == VertexKind::NumGate && v.param == one()) ||
                   (v.kind == VertexKind::X && v.legs == 2 && v.k == 0) ||
                   v.kind == VertexKind::Identity;
        if (!hit) continue;
        Match m;
        m.anchor = id;
        m.binding.nums = {id};
        ms.push_back(std::move(m));
    }
}

void match_wid(const Diagram& d, std::vector<Match>& ms) {
    for (const auto& [id, v] : d.verts) {
        if ((v.kind == VertexKind::W || v.kind == VertexKind::CoW) && v.legs == 2) {
            Match m;
            m.anchor = id;
            m.binding.nums = {id};
            ms.push_back(std::move(m));
        }
    }
}

Diagram apply_splice(const Diagram& d, const Match& m) {
    int v = (int)m.binding.nums[0];
    Diagram out = d;
    splice_out(out, v, {v, 0}, {v, 1});
    return out;
}

void match_ept(const Diagram& d, std::vector<Match>& ms) {
    for (const auto& e : d.edges) {
        int a = e.first.v, b = e.second.v;
        if (a == b) continue;
        const Vertex& va = d.vertex(a);
        const Vertex& vb = d.vertex(b);
        if (!one_leg_state(va) && !(va.kind == VertexKind::Z && va.legs == 1)) continue;
        if (!one_leg_state(vb) && !(vb.kind == VertexKind::Z && vb.legs == 1)) continue;
        if (va.legs != 1 || vb.legs != 1) continue;
        if (!va.param.is_zero() && !vb.param.is_zero()) continue;  // value 1 + ca*cb
        Match m;
        m.anchor = std::min(a, b);
        m.binding.nums = {std::min(a, b), std::max(a, b)};
        ms.push_back(std::move(m));
    }
}

Diagram apply_ept(const Diagram& d, const Match& m) {
    Diagram out = d;
    for (long v : m.binding.nums) {
        drop_edges_touching(out, (int)v);
        out.verts.erase((int)v);
    }
    out.touch();
    return out;
}

void match_add(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    for (const auto& [id, v] : d.verts) {
        if (v.kind != VertexKind::CoW || v.legs != 3) continue;
        auto p1 = idx.peer({id, 1});
        auto p2 = idx.peer({id, 2});
        if (!p1 || !p2) continue;
        if (!one_leg_state(d.vertex(p1->v)) || !one_leg_state(d.vertex(p2->v))) continue;
        if (p1->v == p2->v || p1->v == id || p2->v == id) continue;
        Match m;
        m.anchor = id;
        m.binding.nums = {id, p1->v, p2->v};
        ms.push_back(std::move(m));
    }
}

Diagram apply_add(const Diagram& d, const Match& m) {
    int cw = (int)m.binding.nums[0], s1 = (int)m.binding.nums[1], s2 = (int)m.binding.nums[2];
    Diagram out = d;
    GaussianRational sum = out.vertex(s1).param + out.vertex(s2).param;
    Attachment att0 = attachment_of(out, {cw, 0});
    for (int v : {cw, s1, s2}) {
        drop_edges_touching(out, v);
        out.verts.erase(v);
    }
    int ns = out.add_numstate(sum);
    attach(out, {ns, 0}, att0);
    return out;
}

void match_pcpy(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    for (const auto& [id, v] : d.verts) {
        if (v.kind != VertexKind::NumGate) continue;
        for (int gp : {0, 1}) {
            auto pw = idx.peer({id, gp});
            if (!pw || pw->p != 0 || d.vertex(pw->v).kind != VertexKind::W) continue;
            auto up = idx.peer({id, 1 - gp});
            if (up && up->v == pw->v) continue;  // gate inside a loop with the fan-out
            Match m;
            m.anchor = id;
            m.binding.nums = {id, pw->v, gp};
            ms.push_back(std::move(m));
            break;
        }
    }
}

Diagram apply_pcpy(const Diagram& d, const Match& m) {
    int g = (int)m.binding.nums[0], w = (int)m.binding.nums[1], gp = (int)m.binding.nums[2];
    Diagram out = d;
    GaussianRational a = out.vertex(g).param;
    int k = out.vertex(w).legs - 1;
    Attachment up = attachment_of(out, {g, 1 - gp});
    drop_edges_touching(out, g);
    out.verts.erase(g);
    attach(out, {w, 0}, up);
    for (int i = 1; i <= k; ++i) {
        Attachment att = attachment_of(out, {w, i});
        detach(out, {w, i});
        int gi = out.add_numgate(a);
        out.connect({w, i}, {gi, 0});
        attach(out, {gi, 1}, att);
    }
    return out;
}

void match_aso(const Diagram& d, std::vector<Match>& ms) {
    for (const auto& e : d.edges) {
        for (auto [p, q] : {std::pair{e.first, e.second}, std::pair{e.second, e.first}}) {
            if (p.v == q.v) continue;
            const Vertex& outer = d.vertex(p.v);
            const Vertex& inner = d.vertex(q.v);
            if (outer.kind == VertexKind::W && inner.kind == VertexKind::W && p.p >= 1 &&
                q.p == 0) {
                Match m;
                m.anchor = std::min(p.v, q.v);
                m.binding.nums = {p.v, q.v, p.p, 0};
                ms.push_back(std::move(m));
            } else if (outer.kind == VertexKind::CoW && inner.kind == VertexKind::CoW &&
                       p.p >= 1 && q.p == 0) {
                Match m;
                m.anchor = std::min(p.v, q.v);
                m.binding.nums = {p.v, q.v, p.p, 1};
                ms.push_back(std::move(m));
            }
        }
    }
}

Diagram apply_aso(const Diagram& d, const Match& m) {
    int vo = (int)m.binding.nums[0], vi = (int)m.binding.nums[1];
    int leg = (int)m.binding.nums[2];
    bool cow = m.binding.nums[3] != 0;
    Diagram out = d;
    int ko = out.vertex(vo).legs - 1, ki = out.vertex(vi).legs - 1;
    std::vector<std::pair<PortRef, Attachment>> keep;
    keep.push_back({{vo, 0}, attachment_of(out, {vo, 0})});  // designated side
    for (int p = 1; p <= ko; ++p)
        if (p != leg) keep.push_back({{vo, p}, attachment_of(out, {vo, p})});
    for (int p = 1; p <= ki; ++p) keep.push_back({{vi, p}, attachment_of(out, {vi, p})});
    int nv = cow ? out.add_cow(ko - 1 + ki) : out.add_w(ko - 1 + ki);
    int np = 0;
    for (auto& [pr, att] : keep) {
        PortRef tgt{nv, np++};
        if (att.kind == Attachment::Edge) {
            for (auto& ed : out.edges) {
                if (ed.first == pr) ed.first = tgt;
                else if (ed.second == pr) ed.second = tgt;
            }
        } else if (att.kind == Attachment::In) {
            out.inputs[att.idx] = tgt;
        } else if (att.kind == Attachment::Out) {
            out.outputs[att.idx] = tgt;
        } else {
            throw std::logic_error("flatten: dangling port");
        }
    }
    drop_edges_touching(out, vo);
    drop_edges_touching(out, vi);
    out.verts.erase(vo);
    out.verts.erase(vi);
    out.touch();
    return out;
}

void match_bzw(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    // primary form: collector output into a parameter-1 Z spider
    for (const auto& e : d.edges) {
        for (auto [cp, zp] : {std::pair{e.first, e.second}, std::pair{e.second, e.first}}) {
            if (cp.v == zp.v) continue;
            const Vertex& cw = d.vertex(cp.v);
            const Vertex& z = d.vertex(zp.v);
            if (cw.kind != VertexKind::CoW || cp.p != 0) continue;
            if (z.kind != VertexKind::Z || !(z.param == one()) || z.legs < 2) continue;
            bool degenerate = false;
            for (int p = 1; p < cw.legs; ++p) {
                auto pr = idx.peer({cp.v, p});
                if (pr && (pr->v == cp.v || pr->v == zp.v)) degenerate = true;
            }
            for (int p = 0; p < z.legs; ++p) {
                if (p == zp.p) continue;
                auto pr = idx.peer({zp.v, p});
                if (pr && (pr->v == cp.v || pr->v == zp.v)) degenerate = true;
            }
            if (degenerate) continue;
            Match m;
            m.anchor = cp.v;
            m.binding.nums = {0, cp.v, zp.v, zp.p};
            ms.push_back(std::move(m));
        }
    }
    // transposed form: parameter-1 copy with a 2-leg fan-out on one branch
    for (const auto& [id, v] : d.verts) {
        if (v.kind != VertexKind::Z || v.legs != 3 || !(v.param == one())) continue;
        for (int u = 0; u < 3; ++u) {
            auto pw = idx.peer({id, u});
            if (!pw || pw->p != 0) continue;
            const Vertex& w = d.vertex(pw->v);
            if (w.kind != VertexKind::W || w.legs != 3) continue;
            bool degenerate = false;
            for (int p : {1, 2}) {
                auto pr = idx.peer({pw->v, p});
                if (pr && (pr->v == id || pr->v == pw->v)) degenerate = true;
            }
            for (int p = 0; p < 3; ++p) {
                if (p == u) continue;
                auto pr = idx.peer({id, p});
                if (pr && (pr->v == id || pr->v == pw->v)) degenerate = true;
            }
            if (degenerate) continue;
            Match m;
            m.anchor = id;
            m.binding.nums = {1, id, pw->v, u};
            ms.push_back(std::move(m));
        }
    }
}

Diagram apply_bzw(const Diagram& d, const Match& m) {
    Diagram out = d;
    if (m.binding.nums[0] == 0) {
        int cwv = (int)m.binding.nums[1], zv = (int)m.binding.nums[2];
        int zport = (int)m.binding.nums[3];
        int k = out.vertex(cwv).legs - 1;
        int j = out.vertex(zv).legs - 1;
        std::vector<Attachment> a_in(k), b_out(j);
        for (int i = 0; i < k; ++i) a_in[i] = attachment_of(out, {cwv, 1 + i});
        int t = 0;
        for (int p = 0; p < out.vertex(zv).legs; ++p)
            if (p != zport) b_out[t++] = attachment_of(out, {zv, p});
        drop_edges_touching(out, cwv);
        drop_edges_touching(out, zv);
        out.verts.erase(cwv);
        out.verts.erase(zv);
        std::vector<int> zi(k), ct(j);
        for (int i = 0; i < k; ++i) {
            zi[i] = out.add_z(1, j, one());
            attach(out, {zi[i], 0}, a_in[i]);
        }
        for (int s = 0; s < j; ++s) {
            ct[s] = out.add_cow(k);
            attach(out, {ct[s], 0}, b_out[s]);
        }
        for (int i = 0; i < k; ++i)
            for (int s = 0; s < j; ++s) out.connect({zi[i], 1 + s}, {ct[s], 1 + i});
        out.touch();
        return out;
    }
    // transposed: copy-then-fan becomes fan, two copies, and a collector
    int zv = (int)m.binding.nums[1], wv = (int)m.binding.nums[2];
    int u = (int)m.binding.nums[3];
    std::vector<int> others;
    for (int p = 0; p < 3; ++p)
        if (p != u) others.push_back(p);
    Attachment x_att = attachment_of(out, {zv, others[0]});
    Attachment v_att = attachment_of(out, {zv, others[1]});
    Attachment p_att = attachment_of(out, {wv, 1});
    Attachment q_att = attachment_of(out, {wv, 2});
    drop_edges_touching(out, zv);
    drop_edges_touching(out, wv);
    out.verts.erase(zv);
    out.verts.erase(wv);
    int nw = out.add_w(2);
    attach(out, {nw, 0}, x_att);
    int zp = out.add_z(1, 2, one());
    int zq = out.add_z(1, 2, one());
    out.connect({nw, 1}, {zp, 0});
    out.connect({nw, 2}, {zq, 0});
    attach(out, {zp, 1}, p_att);
    attach(out, {zq, 1}, q_att);
    int cw = out.add_cow(2);
    out.connect({zp, 2}, {cw, 1});
    out.connect({zq, 2}, {cw, 2});
    attach(out, {cw, 0}, v_att);
    return out;
}

// Follows a wire through diag(1,c)-shaped vertices until it lands somewhere
// interesting; used by the square-killing matcher.
std::optional<PortRef> chase(const Diagram& d, const PortIndex& idx, PortRef from,
                             std::vector<int>& hops) {
    auto cur = idx.peer(from);
    while (cur) {
        const Vertex& v = d.vertex(cur->v);
        if (v.kind == VertexKind::CoW && v.legs == 3 && cur->p >= 1) return cur;
        if (!is_two_leg_passthrough(v)) return std::nullopt;
        hops.push_back(cur->v);
        cur = idx.peer({cur->v, 1 - cur->p});
    }
    return std::nullopt;
}

void match_kill_quad(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    for (const auto& [id, v] : d.verts) {
        if (v.kind != VertexKind::Z || v.legs != 3 || !(v.param == one())) continue;
        const std::pair<int, int> pairs[] = {{1, 2}, {0, 1}, {0, 2}};
        for (auto [i, j] : pairs) {
            std::vector<int> h1, h2;
            auto e1 = chase(d, idx, {id, i}, h1);
            auto e2 = chase(d, idx, {id, j}, h2);
            if (!e1 || !e2 || e1->v != e2->v || e1->p == e2->p) continue;
            int r = 3 - i - j;  // remaining port feeds the rewrite's input
            // the surrounding wires must leave the matched cluster
            std::set<int> cluster{id, e1->v};
            cluster.insert(h1.begin(), h1.end());
            cluster.insert(h2.begin(), h2.end());
            auto in_p = idx.peer({id, r});
            auto out_p = idx.peer({e1->v, 0});
            if (in_p && cluster.count(in_p->v)) continue;
            if (out_p && cluster.count(out_p->v)) continue;
            Match m;
            m.anchor = id;
            m.binding.nums = {id, e1->v, i, j};
            ms.push_back(std::move(m));
            break;
        }
    }
}

Diagram apply_kill_quad(const Diagram& d, const Match& m) {
    int zv = (int)m.binding.nums[0], cwv = (int)m.binding.nums[1];
    int i = (int)m.binding.nums[2], j = (int)m.binding.nums[3];
    Diagram out = d;
    PortIndex idx(out);
    std::vector<int> h1, h2;
    chase(out, idx, {zv, i}, h1);
    chase(out, idx, {zv, j}, h2);
    int r = 3 - i - j;
    Attachment in_att = attachment_of(out, {zv, r});
    Attachment out_att = attachment_of(out, {cwv, 0});
    std::set<int> cluster{zv, cwv};
    cluster.insert(h1.begin(), h1.end());
    cluster.insert(h2.begin(), h2.end());
    for (int v : cluster) {
        drop_edges_touching(out, v);
        out.verts.erase(v);
    }
    int g = out.add_numgate(GaussianRational(0));
    attach(out, {g, 0}, in_att);
    attach(out, {g, 1}, out_att);
    return out;
}

void match_cmcpy(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    for (const auto& [id, v] : d.verts) {
        if (v.kind != VertexKind::CoW || v.legs != 3) continue;
        auto c0 = idx.peer({id, 0});
        if (!c0) continue;
        const Vertex& bx = d.vertex(c0->v);
        if (bx.kind != VertexKind::CtrlBox || c0->p != bx.legs - 1) continue;
        auto p1 = idx.peer({id, 1});
        auto p2 = idx.peer({id, 2});
        if (!p1 || !p2) continue;
        if (p1->v != p2->v || p1->p == p2->p || p1->p < 1 || p2->p < 1) continue;
        if (d.vertex(p1->v).kind != VertexKind::W) continue;
        Match m;
        m.anchor = id;
        m.binding.nums = {id, c0->v, p1->v, p1->p, p2->p};
        ms.push_back(std::move(m));
    }
}

Diagram apply_cmcpy(const Diagram& d, const Match& m) {
    int cw = (int)m.binding.nums[0], bx = (int)m.binding.nums[1], w = (int)m.binding.nums[2];
    int leg1 = (int)m.binding.nums[3], leg2 = (int)m.binding.nums[4];
    Diagram out = d;
    int t = (out.vertex(bx).legs - 1) / 2;
    std::string name = out.vertex(bx).name;
    drop_edges_touching(out, cw);
    out.verts.erase(cw);
    int b2 = out.add_ctrlbox(name);
    out.connect({w, leg1}, {bx, 2 * t});
    out.connect({w, leg2}, {b2, 2 * t});
    for (int i = 0; i < t; ++i) {
        Attachment att = attachment_of(out, {bx, i});
        detach(out, {bx, i});
        out.connect({bx, i}, {b2, t + i});
        attach(out, {b2, i}, att);
    }
    return out;
}

void match_cmcom(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    for (const auto& [id1, v1] : d.verts) {
        if (v1.kind != VertexKind::CtrlBox) continue;
        int t = (v1.legs - 1) / 2;
        // chained register: every out of id1 feeds the matching in of one box
        auto first_peer = idx.peer({id1, 0});
        if (!first_peer) continue;
        int id2 = first_peer->v;
        if (id2 == id1) continue;
        const Vertex& v2 = d.vertex(id2);
        if (v2.kind != VertexKind::CtrlBox || v2.legs != v1.legs) continue;
        bool chained = true;
        for (int i = 0; i < t; ++i) {
            auto pr = idx.peer({id1, i});
            if (!pr || pr->v != id2 || pr->p != t + i) chained = false;
        }
        if (!chained) continue;
        auto c1 = idx.peer({id1, 2 * t});
        auto c2 = idx.peer({id2, 2 * t});
        if (!c1 || !c2 || c1->v != c2->v || c1->p == c2->p) continue;
        if (c1->p < 1 || c2->p < 1) continue;
        if (d.vertex(c1->v).kind != VertexKind::W) continue;
        bool degenerate = false;
        for (int i = 0; i < t; ++i) {
            auto in_att = idx.peer({id1, t + i});
            auto out_att = idx.peer({id2, i});
            if (in_att && (in_att->v == id1 || in_att->v == id2)) degenerate = true;
            if (out_att && (out_att->v == id1 || out_att->v == id2)) degenerate = true;
        }
        if (degenerate) continue;
        Match m;
        m.anchor = std::min(id1, id2);
        m.binding.nums = {id1, id2};
        ms.push_back(std::move(m));
    }
}

Diagram apply_cmcom(const Diagram& d, const Match& m) {
    int b1 = (int)m.binding.nums[0], b2 = (int)m.binding.nums[1];
    Diagram out = d;
    int t = (out.vertex(b1).legs - 1) / 2;
    std::vector<Attachment> ins(t), outs(t);
    for (int i = 0; i < t; ++i) ins[i] = attachment_of(out, {b1, t + i});
    for (int i = 0; i < t; ++i) outs[i] = attachment_of(out, {b2, i});
    for (int i = 0; i < t; ++i) {
        detach(out, {b1, t + i});
        detach(out, {b1, i});
        detach(out, {b2, t + i});
        detach(out, {b2, i});
    }
    for (int i = 0; i < t; ++i) {
        attach(out, {b2, t + i}, ins[i]);
        out.connect({b2, i}, {b1, t + i});
        attach(out, {b1, i}, outs[i]);
    }
    return out;
}

void match_sym(const Diagram& d, std::vector<Match>& ms) {
    for (const auto& [id, v] : d.verts) {
        int first = -1, second = -1;
        if (v.kind == VertexKind::Z || v.kind == VertexKind::X) {
            if (v.legs >= 2) first = 0, second = 1;
        } else if (v.kind == VertexKind::W || v.kind == VertexKind::CoW) {
            if (v.legs >= 3) first = 1, second = 2;
        }
        if (first < 0) continue;
        Match m;
        m.anchor = id;
        m.binding.nums = {id, first, second};
        ms.push_back(std::move(m));
    }
}

Diagram apply_sym(const Diagram& d, const Match& m) {
    int v = (int)m.binding.nums[0];
    int pa = (int)m.binding.nums[1], pb = (int)m.binding.nums[2];
    Diagram out = d;
    Attachment aa = attachment_of(out, {v, pa});
    Attachment ab = attachment_of(out, {v, pb});
    if (aa.kind == Attachment::Edge && aa.peer == PortRef{v, pb}) return out;  // mutual wire
    detach(out, {v, pa});
    detach(out, {v, pb});
    attach(out, {v, pa}, ab);
    attach(out, {v, pb}, aa);
    return out;
}

void match_cs0(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    for (const auto& [id, v] : d.verts) {
        if (v.kind != VertexKind::NumState || !v.param.is_zero()) continue;
        auto pw = idx.peer({id, 0});
        if (!pw || pw->p != 0 || d.vertex(pw->v).kind != VertexKind::W) continue;
        bool degenerate = false;
        for (int p = 1; p < d.vertex(pw->v).legs; ++p) {
            auto pr = idx.peer({pw->v, p});
            if (pr && (pr->v == pw->v || pr->v == id)) degenerate = true;
        }
        if (degenerate) continue;
        Match m;
        m.anchor = id;
        m.binding.nums = {id, pw->v};
        ms.push_back(std::move(m));
    }
}

Diagram apply_cs0(const Diagram& d, const Match& m) {
    int ns = (int)m.binding.nums[0], w = (int)m.binding.nums[1];
    Diagram out = d;
    int k = out.vertex(w).legs - 1;
    std::vector<Attachment> legs(k);
    for (int i = 0; i < k; ++i) legs[i] = attachment_of(out, {w, 1 + i});
    drop_edges_touching(out, ns);
    drop_edges_touching(out, w);
    out.verts.erase(ns);
    out.verts.erase(w);
    for (int i = 0; i < k; ++i) {
        int nsi = out.add_numstate(GaussianRational(0));
        attach(out, {nsi, 0}, legs[i]);
    }
    return out;
}

// ---- duplicating distribution rewrite ------------------------------------
//
// The cell shape: an input copied by a parameter-1 Z spider whose one branch
// feeds a sub-state A and whose other branch feeds a 2-leg W fan splitting
// into two sub-circuits; A's and the branches' outputs meet pairwise at
// 2-ary collectors. The rewrite duplicates A per branch. Port directions are
// read off the builder conventions, so this only fires on combinator-shaped
// hosts; anything unrecognized simply fails to match.

std::optional<std::vector<bool>> port_in_flags(const Vertex& v) {
    std::vector<bool> in(static_cast<std::size_t>(v.legs), false);
    switch (v.kind) {
        case VertexKind::Z:
        case VertexKind::NumGate:
        case VertexKind::Identity:
            if (v.legs >= 1) in[0] = true;
            break;
        case VertexKind::W: in[0] = true; break;
        case VertexKind::CoW:
            for (int i = 1; i < v.legs; ++i) in[(std::size_t)i] = true;
            break;
        case VertexKind::NumState: break;
        default: return std::nullopt;
    }
    return in;
}

std::optional<std::set<int>> flood_down(const Diagram& d, const PortIndex& idx, PortRef entry) {
    std::set<int> seen;
    std::vector<PortRef> stack{entry};
    while (!stack.empty()) {
        PortRef p = stack.back();
        stack.pop_back();
        auto flags = port_in_flags(d.vertex(p.v));
        if (!flags || p.p >= (int)flags->size() || !(*flags)[(std::size_t)p.p])
            return std::nullopt;  // flow ran into an output-side port
        if (!seen.insert(p.v).second) continue;
        for (int q = 0; q < d.vertex(p.v).legs; ++q) {
            if ((*flags)[(std::size_t)q]) continue;
            auto pr = idx.peer({p.v, q});
            if (pr) stack.push_back(*pr);
        }
    }
    return seen;
}

struct DistCollector {
    int c = -1;
    int port_a = -1, port_b = -1;
    PortRef feed_a{}, feed_b{};
    int branch = 0;
};

struct DistPlan {
    int z = -1, w = -1;
    PortRef a_entry{}, b1_entry{}, b2_entry{};
    std::set<int> ra, rb, br1, br2;  // proper sides and the two branch floods
    std::vector<DistCollector> colls;
};

std::optional<DistPlan> analyze_dist(const Diagram& d, int z, int aport, int bport) {
    PortIndex idx(d);
    auto wp = idx.peer({z, bport});
    if (!wp || wp->p != 0) return std::nullopt;
    const Vertex& wv = d.vertex(wp->v);
    if (wv.kind != VertexKind::W || wv.legs != 3) return std::nullopt;
    int w = wp->v;
    auto ap = idx.peer({z, aport});
    if (!ap) return std::nullopt;
    auto b1p = idx.peer({w, 1});
    auto b2p = idx.peer({w, 2});
    if (!b1p || !b2p) return std::nullopt;

    auto fa = flood_down(d, idx, *ap);
    auto f1 = flood_down(d, idx, *b1p);
    auto f2 = flood_down(d, idx, *b2p);
    if (!fa || !f1 || !f2) return std::nullopt;
    std::set<int> rb_all;
    rb_all.insert(f1->begin(), f1->end());
    rb_all.insert(f2->begin(), f2->end());
    if (fa->count(z) || fa->count(w) || rb_all.count(z) || rb_all.count(w)) return std::nullopt;

    DistPlan plan;
    plan.z = z;
    plan.w = w;
    plan.a_entry = *ap;
    plan.b1_entry = *b1p;
    plan.b2_entry = *b2p;
    for (int u : *fa)
        if (!rb_all.count(u)) plan.ra.insert(u);
    for (int u : rb_all)
        if (!fa->count(u)) plan.rb.insert(u);
    for (int u : plan.rb) {
        if (f1->count(u)) plan.br1.insert(u);
        if (f2->count(u)) plan.br2.insert(u);
    }
    for (int u : plan.br1)
        if (plan.br2.count(u)) return std::nullopt;  // branches reconverge before merging
    if (!plan.ra.count(ap->v)) return std::nullopt;
    if (!plan.rb.count(b1p->v) || !plan.rb.count(b2p->v)) return std::nullopt;

    auto side = [&](int u) {
        if (plan.ra.count(u)) return 'A';
        if (plan.rb.count(u)) return 'B';
        return (u == z) ? 'z' : (u == w) ? 'w' : 'S';  // S: shared suffix
    };

    // Scan the proper sides: inputs only from inside (or the copy spider),
    // outputs only inward or onto shared 2-ary collectors.
    std::set<int> coll_ids;
    for (char want : {'A', 'B'}) {
        const std::set<int>& region = want == 'A' ? plan.ra : plan.rb;
        for (int u : region) {
            auto flags = port_in_flags(d.vertex(u));
            if (!flags) return std::nullopt;
            for (int q = 0; q < d.vertex(u).legs; ++q) {
                auto pr = idx.peer({u, q});
                if ((*flags)[(std::size_t)q]) {
                    if (!pr) return std::nullopt;  // boundary feeds the region
                    char s = side(pr->v);
                    bool from_top = (want == 'A' && pr->v == z) || (want == 'B' && pr->v == w);
                    if (!from_top && s != want) return std::nullopt;
                } else {
                    if (!pr) return std::nullopt;  // region output escapes to boundary
                    char s = side(pr->v);
                    if (s == want) continue;
                    const Vertex& cv = d.vertex(pr->v);
                    if (s == 'S' && cv.kind == VertexKind::CoW && cv.legs == 3 && pr->p >= 1) {
                        coll_ids.insert(pr->v);
                        continue;
                    }
                    return std::nullopt;
                }
            }
        }
    }
    for (int c : coll_ids) {
        auto p1 = idx.peer({c, 1});
        auto p2 = idx.peer({c, 2});
        if (!p1 || !p2) return std::nullopt;
        char s1 = side(p1->v), s2 = side(p2->v);
        DistCollector dc;
        dc.c = c;
        if (s1 == 'A' && s2 == 'B') {
            dc.port_a = 1, dc.port_b = 2, dc.feed_a = *p1, dc.feed_b = *p2;
        } else if (s1 == 'B' && s2 == 'A') {
            dc.port_a = 2, dc.port_b = 1, dc.feed_a = *p2, dc.feed_b = *p1;
        } else {
            return std::nullopt;
        }
        dc.branch = plan.br1.count(dc.feed_b.v) ? 1 : 2;
        plan.colls.push_back(dc);
    }
    std::sort(plan.colls.begin(), plan.colls.end(),
              [](const DistCollector& a, const DistCollector& b) { return a.c < b.c; });
    return plan;
}

void match_dist(const Diagram& d, std::vector<Match>& ms) {
    PortIndex idx(d);
    for (const auto& [id, v] : d.verts) {
        if (v.kind != VertexKind::Z || v.legs != 3 || !(v.param == one())) continue;
        for (auto [aport, bport] : {std::pair{1, 2}, std::pair{2, 1}}) {
            if (analyze_dist(d, id, aport, bport)) {
                Match m;
                m.anchor = id;
                m.binding.nums = {id, aport, bport};
                ms.push_back(std::move(m));
            }
        }
    }
}

Diagram apply_dist(const Diagram& d, const Match& m) {
    int z = (int)m.binding.nums[0];
    int aport = (int)m.binding.nums[1], bport = (int)m.binding.nums[2];
    auto plan_opt = analyze_dist(d, z, aport, bport);
    if (!plan_opt) throw std::logic_error("distribution cell vanished between match and apply");
    const DistPlan& plan = *plan_opt;
    Diagram out = d;

    // clone the A side
    std::map<int, int> cl;
    for (int u : plan.ra) cl[u] = out.add_vertex(out.vertex(u));
    for (const auto& e : d.edges)
        if (plan.ra.count(e.first.v) && plan.ra.count(e.second.v))
            out.connect({cl[e.first.v], e.first.p}, {cl[e.second.v], e.second.p});

    Attachment x_att = attachment_of(out, {z, 3 - aport - bport});
    drop_edges_touching(out, z);
    drop_edges_touching(out, plan.w);
    out.verts.erase(z);
    out.verts.erase(plan.w);

    int nw = out.add_w(2);
    attach(out, {nw, 0}, x_att);
    int z1 = out.add_z(1, 2, one());
    int z2 = out.add_z(1, 2, one());
    out.connect({nw, 1}, {z1, 0});
    out.connect({nw, 2}, {z2, 0});
    out.connect({z1, 1}, plan.a_entry);
    out.connect({z1, 2}, plan.b1_entry);
    out.connect({z2, 1}, {cl.at(plan.a_entry.v), plan.a_entry.p});
    out.connect({z2, 2}, plan.b2_entry);

    for (const auto& dc : plan.colls) {
        if (dc.branch == 1) {
            // cell 1 = original A with branch 1; the clone feeds the other slot
            detach(out, {dc.c, dc.port_a});
            detach(out, {dc.c, dc.port_b});
            int mg = out.add_cow(2);
            out.connect(dc.feed_a, {mg, 1});
            out.connect(dc.feed_b, {mg, 2});
            out.connect({mg, 0}, {dc.c, dc.port_a});
            out.connect({cl.at(dc.feed_a.v), dc.feed_a.p}, {dc.c, dc.port_b});
        } else {
            // original A edge into port_a stays; cell 2 merges clone with branch 2
            detach(out, {dc.c, dc.port_b});
            int mg = out.add_cow(2);
            out.connect({cl.at(dc.feed_a.v), dc.feed_a.p}, {mg, 1});
            out.connect(dc.feed_b, {mg, 2});
            out.connect({mg, 0}, {dc.c, dc.port_b});
        }
    }
    out.touch();
    return out;
}

}  // namespace

std::vector<Match> find_matches(const Diagram& d, const std::string& rule) {
    if (!find_rule(rule)) throw std::invalid_argument("unknown rule: " + rule);
    std::vector<Match> ms;
    if (rule == "S1") match_s1(d, ms);
    else if (rule == "S2") match_s2(d, ms);
    else if (rule == "wid") match_wid(d, ms);
    else if (rule == "Ept") match_ept(d, ms);
    else if (rule == "Add") match_add(d, ms);
    else if (rule == "Pcpy") match_pcpy(d, ms);
    else if (rule == "Aso") match_aso(d, ms);
    else if (rule == "BZW") match_bzw(d, ms);
    else if (rule == "kill_quad") match_kill_quad(d, ms);
    else if (rule == "CMcpy") match_cmcpy(d, ms);
    else if (rule == "CMcom") match_cmcom(d, ms);
    else if (rule == "Sym") match_sym(d, ms);
    else if (rule == "CS0") match_cs0(d, ms);
    else if (rule == "dist_circ") match_dist(d, ms);
    else return {};  // schematic rule: soundness-checked but not matched
    std::stable_sort(ms.begin(), ms.end(),
                     [](const Match& a, const Match& b) { return a.anchor < b.anchor; });
    for (auto& m : ms) {
        m.rule = rule;
        m.host_rev = d.rev;
    }
    return ms;
}

Diagram apply(const Diagram& d, const Match& m, Direction dir) {
    if (m.host_rev != d.rev)
        throw std::runtime_error("apply: match is stale, diagram changed since find_matches");
    if (dir == Direction::R2L)
        throw std::invalid_argument("apply: reverse application not supported for " + m.rule);
    Diagram out;
    if (m.rule == "S1") out = apply_s1(d, m);
    else if (m.rule == "S2" || m.rule == "wid") out = apply_splice(d, m);
    else if (m.rule == "Ept") out = apply_ept(d, m);
    else if (m.rule == "Add") out = apply_add(d, m);
    else if (m.rule == "Pcpy") out = apply_pcpy(d, m);
    else if (m.rule == "Aso") out = apply_aso(d, m);
    else if (m.rule == "BZW") out = apply_bzw(d, m);
    else if (m.rule == "kill_quad") out = apply_kill_quad(d, m);
    else if (m.rule == "CMcpy") out = apply_cmcpy(d, m);
    else if (m.rule == "CMcom") out = apply_cmcom(d, m);
    else if (m.rule == "Sym") out = apply_sym(d, m);
    else if (m.rule == "CS0") out = apply_cs0(d, m);
    else if (m.rule == "dist_circ") out = apply_dist(d, m);
    else throw std::invalid_argument("apply: no rewrite procedure for " + m.rule);
    require_valid(out);
    return out;
}

}  // namespace zxw
