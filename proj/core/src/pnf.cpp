#include "zxwring/pnf.hpp"

#include "zxwring/semantics.hpp"

#include <bit>
#include <stdexcept>

namespace zxw {

bool is_arithmetic(const Diagram& d) {
    if (d.inputs.size() != 1) return false;
    for (const auto& [id, v] : d.verts) {
        switch (v.kind) {
            case VertexKind::Z:
            case VertexKind::W:
            case VertexKind::CoW:
            case VertexKind::NumState:
            case VertexKind::NumGate:
            case VertexKind::Identity:
            case VertexKind::Swap:
                break;
            default:
                return false;
        }
    }
    return true;
}

Diagram pnf_to_diagram(const MultilinearPoly& p) {
    Diagram d;
    const int n = p.n_vars;
    if (n == 0) {
        int v = d.add_numstate(p.get(0));
        d.inputs.push_back({v, 0});
        return d;
    }
    const unsigned legs = 1u << n;
    int wtop = d.add_w(static_cast<int>(legs));
    d.inputs.push_back({wtop, 0});

    std::vector<int> zs(legs);
    for (unsigned mask = 0; mask < legs; ++mask) {
        zs[mask] = d.add_z(1, std::popcount(mask), p.get(mask));
        d.connect(wtop, static_cast<int>(1 + mask), zs[mask], 0);
    }

    const int fanin = 1 << (n - 1);
    std::vector<int> cows(n);
    std::vector<int> next_slot(n, 1);
    for (int j = 0; j < n; ++j) {
        cows[j] = d.add_cow(fanin);
        d.outputs.push_back({cows[j], 0});
    }
    for (unsigned mask = 0; mask < legs; ++mask) {
        int t = 1;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << (n - 1 - j)))
                d.connect(zs[mask], t++, cows[j], next_slot[j]++);
    }
    return d;
}

std::optional<MultilinearPoly> read_pnf(const Diagram& d) {
    const int n = static_cast<int>(d.outputs.size());
    if (d.inputs.size() != 1) return std::nullopt;

    if (n == 0) {
        if (d.verts.size() != 1 || !d.edges.empty()) return std::nullopt;
        const auto& [id, v] = *d.verts.begin();
        if (v.kind != VertexKind::NumState) return std::nullopt;
        if (d.inputs[0].v != id || d.inputs[0].p != 0) return std::nullopt;
        MultilinearPoly p(0);
        p.set(0, v.param);
        return p;
    }

    const unsigned legs = 1u << n;
    if (d.verts.size() != 1 + legs + static_cast<unsigned>(n)) return std::nullopt;

    // Resolve the counterpart of every port through the edge list.
    std::map<PortRef, PortRef> peer;
    for (const auto& e : d.edges) {
        peer[e.first] = e.second;
        peer[e.second] = e.first;
    }
    auto peer_of = [&](int v, int p) -> std::optional<PortRef> {
        auto it = peer.find({v, p});
        if (it == peer.end()) return std::nullopt;
        return it->second;
    };

    int wtop = d.inputs[0].v;
    auto wit = d.verts.find(wtop);
    if (wit == d.verts.end()) return std::nullopt;
    const Vertex& wv = wit->second;
    if (wv.kind != VertexKind::W || wv.legs != static_cast<int>(legs) + 1 ||
        wv.w_in != 0 || d.inputs[0].p != 0)
        return std::nullopt;

    std::vector<int> cows(n, -1);
    for (int j = 0; j < n; ++j) {
        PortRef o = d.outputs[j];
        auto cit = d.verts.find(o.v);
        if (cit == d.verts.end()) return std::nullopt;
        const Vertex& cv = cit->second;
        if (cv.kind != VertexKind::CoW || cv.legs != (1 << (n - 1)) + 1 ||
            cv.w_in != 0 || o.p != 0)
            return std::nullopt;
        cows[j] = o.v;
    }

    MultilinearPoly poly(n);
    std::vector<int> expect_slot(n, 1);
    for (unsigned mask = 0; mask < legs; ++mask) {
        auto zp = peer_of(wtop, static_cast<int>(1 + mask));
        if (!zp || zp->p != 0) return std::nullopt;
        auto zit = d.verts.find(zp->v);
        if (zit == d.verts.end()) return std::nullopt;
        const Vertex& zv = zit->second;
        if (zv.kind != VertexKind::Z || zv.legs != 1 + std::popcount(mask))
            return std::nullopt;
        int t = 1;
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1u << (n - 1 - j)))) continue;
            auto cp = peer_of(zp->v, t++);
            if (!cp || cp->v != cows[j] || cp->p != expect_slot[j]) return std::nullopt;
            ++expect_slot[j];
        }
        poly.set(mask, zv.param);
    }
    return poly;
}

MultilinearPoly poly_of_diagram(const Diagram& d) {
    if (!is_arithmetic(d))
        throw std::invalid_argument("poly_of_diagram: non-arithmetic input");
    const int n = static_cast<int>(d.outputs.size());
    Tensor<GaussianRational> t = evaluate<GaussianRational>(d);

    // Axes: outputs first, then the single input.
    std::vector<int> idx(n + 1, 0);
    MultilinearPoly p(n);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        for (int j = 0; j < n; ++j) idx[j] = (mask >> (n - 1 - j)) & 1u;
        idx[n] = 0;
        GaussianRational zero_col = t.at(idx);
        bool want_one = (mask == 0);
        if (zero_col != GaussianRational(want_one ? 1 : 0))
            throw std::invalid_argument("poly_of_diagram: not a controlled state");
        idx[n] = 1;
        p.set(mask, t.at(idx));
    }
    return p;
}

namespace {

// Shared shape of the two ring combinators: fan the control out with `top`,
// feed both operands, then merge their output wires pairwise with coWs.
Diagram box_combine(const Diagram& a, const Diagram& b, bool sum) {
    if (a.outputs.size() != b.outputs.size())
        throw std::invalid_argument("box combinators need equal output counts");
    if (a.inputs.size() != 1 || b.inputs.size() != 1)
        throw std::invalid_argument("box combinators need single-input operands");
    const int n = static_cast<int>(a.outputs.size());

    Diagram d;
    // W and Z both expose the input at port 0 and the two fan-out legs at 1, 2.
    int top = sum ? d.add_w(2) : d.add_z(1, 2, GaussianRational(1));
    d.inputs.push_back({top, 0});

    auto ma = merge_into(d, a);
    auto mb = merge_into(d, b);
    d.connect(top, 1, ma[a.inputs[0].v], a.inputs[0].p);
    d.connect(top, 2, mb[b.inputs[0].v], b.inputs[0].p);
    for (int j = 0; j < n; ++j) {
        int cw = d.add_cow(2);
        d.connect(cw, 1, ma[a.outputs[j].v], a.outputs[j].p);
        d.connect(cw, 2, mb[b.outputs[j].v], b.outputs[j].p);
        d.outputs.push_back({cw, 0});
    }
    require_valid(d);
    return d;
}

}  // namespace

Diagram box_plus(const Diagram& a, const Diagram& b) { return box_combine(a, b, true); }
Diagram box_times(const Diagram& a, const Diagram& b) { return box_combine(a, b, false); }

}  // namespace zxw
