#include "zxwring/controlled.hpp"

#include "zxwring/linalg.hpp"
#include "zxwring/poly.hpp"

#include <stdexcept>

namespace zxw {

namespace {

PortRef mapped(const std::map<int, int>& rm, PortRef p) { return {rm.at(p.v), p.p}; }

}  // namespace

ControlledState ctrl_state_of(const std::vector<std::complex<double>>& psi) {
    int n = log2_exact(static_cast<int>(psi.size()));
    if (n < 1)
        throw std::invalid_argument(
            "ctrl_state_of: vector length must be a power of two, at least 2");
    MultilinearPoly p(n);
    for (std::size_t mask = 0; mask < psi.size(); ++mask)
        p.set(static_cast<unsigned>(mask), GaussianRational::from(psi[mask]));
    ControlledState cs;
    cs.n = n;
    cs.diagram = pnf_to_diagram(p);
    return cs;
}

ControlledMatrix ctrl_matrix_of(const CMatrix& M, const std::string& name) {
    if (M.rows != M.cols || M.rows < 1)
        throw std::invalid_argument("ctrl_matrix_of: matrix must be square");
    ControlledMatrix cm;
    cm.d = M.rows;
    cm.name = name;
    cm.M = M;
    int t = log2_exact(cm.d);
    if (t < 0) return cm;  // ring operations still work on the matrix alone
    cm.has_diagram = true;
    Diagram& dg = cm.diagram;
    dg.set_matrix(name, M);
    int b = dg.add_ctrlbox(name);
    for (int i = 0; i < t; ++i) dg.inputs.push_back({b, t + i});
    dg.inputs.push_back({b, 2 * t});  // control is the last input
    for (int i = 0; i < t; ++i) dg.outputs.push_back({b, i});
    require_valid(dg);
    return cm;
}

ControlledMatrix ctrl_blackbox(const std::string& name, int d) {
    ControlledMatrix cm = ctrl_matrix_of(CMatrix::identity(d), name);
    cm.blackbox = true;
    return cm;
}

ControlledMatrix cm_sum(
    const std::vector<std::pair<std::complex<double>, ControlledMatrix>>& terms) {
    if (terms.empty()) throw std::invalid_argument("cm_sum: empty term list");
    const int d = terms.front().second.d;
    ControlledMatrix out;
    out.d = d;
    out.M = CMatrix(d, d);
    bool diagrams = true;
    for (const auto& [c, t] : terms) {
        if (t.d != d) throw std::invalid_argument("cm_sum: dimension mismatch");
        out.M = mat_add(out.M, mat_scale(t.M, c));
        out.blackbox = out.blackbox || t.blackbox;
        diagrams = diagrams && t.has_diagram;
    }
    if (!diagrams) return out;

    const int n = log2_exact(d);
    Diagram& dg = out.diagram;
    const int k = static_cast<int>(terms.size());
    int w = dg.add_w(k);
    std::vector<PortRef> head, cur;
    for (int i = 0; i < k; ++i) {
        const auto& [c, t] = terms[static_cast<std::size_t>(i)];
        auto rm = merge_into(dg, t.diagram);
        int ng = dg.add_numgate(GaussianRational::from(c));
        dg.connect({w, 1 + i}, {ng, 0});
        dg.connect({ng, 1}, mapped(rm, t.diagram.inputs[static_cast<std::size_t>(n)]));
        for (int j = 0; j < n; ++j) {
            PortRef tin = mapped(rm, t.diagram.inputs[static_cast<std::size_t>(j)]);
            if (i == 0)
                head.push_back(tin);
            else
                dg.connect(cur[static_cast<std::size_t>(j)], tin);
        }
        cur.clear();
        for (const auto& o : t.diagram.outputs) cur.push_back(mapped(rm, o));
    }
    dg.inputs = head;
    dg.inputs.push_back({w, 0});
    dg.outputs = cur;
    require_valid(dg);
    out.has_diagram = true;
    return out;
}

ControlledMatrix cm_prod(const std::vector<ControlledMatrix>& factors) {
    if (factors.empty()) throw std::invalid_argument("cm_prod: empty factor list");
    const int d = factors.front().d;
    ControlledMatrix out;
    out.d = d;
    out.M = CMatrix::identity(d);
    bool diagrams = true;
    for (const auto& f : factors) {
        if (f.d != d) throw std::invalid_argument("cm_prod: dimension mismatch");
        out.M = mat_mul(f.M, out.M);  // list order is application order
        out.blackbox = out.blackbox || f.blackbox;
        diagrams = diagrams && f.has_diagram;
    }
    if (!diagrams) return out;

    const int n = log2_exact(d);
    Diagram& dg = out.diagram;
    const int k = static_cast<int>(factors.size());
    int z = dg.add_z(1, k, GaussianRational(1));
    std::vector<PortRef> head, cur;
    for (int i = 0; i < k; ++i) {
        const auto& f = factors[static_cast<std::size_t>(i)];
        auto rm = merge_into(dg, f.diagram);
        dg.connect({z, 1 + i}, mapped(rm, f.diagram.inputs[static_cast<std::size_t>(n)]));
        for (int j = 0; j < n; ++j) {
            PortRef tin = mapped(rm, f.diagram.inputs[static_cast<std::size_t>(j)]);
            if (i == 0)
                head.push_back(tin);
            else
                dg.connect(cur[static_cast<std::size_t>(j)], tin);
        }
        cur.clear();
        for (const auto& o : f.diagram.outputs) cur.push_back(mapped(rm, o));
    }
    dg.inputs = head;
    dg.inputs.push_back({z, 0});
    dg.outputs = cur;
    require_valid(dg);
    out.has_diagram = true;
    return out;
}

ControlledMatrix cm_neg(const ControlledMatrix& cm) {
    ControlledMatrix out;
    out.d = cm.d;
    out.M = mat_scale(cm.M, {-1.0, 0.0});
    out.blackbox = cm.blackbox;
    if (!cm.has_diagram) return out;
    Diagram& dg = out.diagram;
    auto rm = merge_into(dg, cm.diagram);
    int ng = dg.add_numgate(GaussianRational{-1});
    const int n = log2_exact(cm.d);
    for (int j = 0; j < n; ++j)
        dg.inputs.push_back(mapped(rm, cm.diagram.inputs[static_cast<std::size_t>(j)]));
    dg.inputs.push_back({ng, 0});
    dg.connect({ng, 1}, mapped(rm, cm.diagram.inputs[static_cast<std::size_t>(n)]));
    for (const auto& o : cm.diagram.outputs) dg.outputs.push_back(mapped(rm, o));
    require_valid(dg);
    out.has_diagram = true;
    return out;
}

CtrlResult ctrl(const ControlledMatrix& cm) {
    if (!cm.has_diagram)
        throw std::invalid_argument("ctrl: dimension must be a power of two");
    const int d = cm.d;
    const int n = log2_exact(d);
    CtrlResult r;
    r.matrix = CMatrix(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
        r.matrix.at(i, i) = 1.0;
        for (int j = 0; j < d; ++j) r.matrix.at(d + i, d + j) = cm.M.at(i, j);
    }
    Diagram& dg = r.diagram;
    auto rm = merge_into(dg, cm.diagram);
    int z = dg.add_z(1, 2, GaussianRational(1));
    dg.inputs.push_back({z, 0});  // control rides the most significant wire
    for (int j = 0; j < n; ++j)
        dg.inputs.push_back(mapped(rm, cm.diagram.inputs[static_cast<std::size_t>(j)]));
    dg.connect({z, 2}, mapped(rm, cm.diagram.inputs[static_cast<std::size_t>(n)]));
    dg.outputs.push_back({z, 1});
    for (const auto& o : cm.diagram.outputs) dg.outputs.push_back(mapped(rm, o));
    require_valid(dg);
    return r;
}

CtrlResult ctrl(const CMatrix& M, const std::string& name) {
    return ctrl(ctrl_matrix_of(M, name));
}

CtrlResult ctrl_parallel(const CMatrix& M1, const CMatrix& M2, const std::string& name1,
                         const std::string& name2) {
    if (M1.rows != M1.cols || M2.rows != M2.cols)
        throw std::invalid_argument("ctrl_parallel: matrices must be square");
    int t1 = log2_exact(M1.rows), t2 = log2_exact(M2.rows);
    if (t1 < 0 || t2 < 0)
        throw std::invalid_argument("ctrl_parallel: dimensions must be powers of two");
    if (name1 == name2 && !(M1 == M2))
        throw std::invalid_argument("ctrl_parallel: duplicate box name for distinct matrices");

    CMatrix prod = kron(M1, M2);
    CtrlResult r;
    const int d = prod.rows;
    r.matrix = CMatrix(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
        r.matrix.at(i, i) = 1.0;
        for (int j = 0; j < d; ++j) r.matrix.at(d + i, d + j) = prod.at(i, j);
    }

    // Fused form of the mediator construction: both boxes share one copied
    // control, which is what permuting the controls together and fusing their
    // Z copies yields.
    Diagram& dg = r.diagram;
    dg.set_matrix(name1, M1);
    dg.set_matrix(name2, M2);
    int b1 = dg.add_ctrlbox(name1);
    int b2 = dg.add_ctrlbox(name2);
    int z = dg.add_z(1, 3, GaussianRational(1));
    dg.connect({z, 2}, {b1, 2 * t1});
    dg.connect({z, 3}, {b2, 2 * t2});
    dg.inputs.push_back({z, 0});
    for (int i = 0; i < t1; ++i) dg.inputs.push_back({b1, t1 + i});
    for (int i = 0; i < t2; ++i) dg.inputs.push_back({b2, t2 + i});
    dg.outputs.push_back({z, 1});
    for (int i = 0; i < t1; ++i) dg.outputs.push_back({b1, i});
    for (int i = 0; i < t2; ++i) dg.outputs.push_back({b2, i});
    require_valid(dg);
    return r;
}

CtrlResult multi_ctrl(const CMatrix& M, int k, const std::string& name) {
    if (k < 1) throw std::invalid_argument("multi_ctrl: need at least one control");
    CtrlResult r = ctrl(M, name);
    for (int i = 2; i <= k; ++i)
        r = ctrl(r.matrix, "ctrl^" + std::to_string(i - 1) + "_" + name);
    return r;
}

Diagram and_gate() {
    // OR gate first: transpose of the controlled state of x1 + x2 + x1x2.
    // Every arithmetic generator is direction-blind, so exchanging the
    // boundary lists transposes the semantics.
    MultilinearPoly orp(2);
    orp.set(0b01, GaussianRational(1));
    orp.set(0b10, GaussianRational(1));
    orp.set(0b11, GaussianRational(1));
    Diagram orD = pnf_to_diagram(orp);
    std::swap(orD.inputs, orD.outputs);

    // AND(a, b) = NOT(OR(NOT a, NOT b)).
    Diagram d;
    auto rm = merge_into(d, orD);
    int na = d.add_x(1, 1, 1);
    int nb = d.add_x(1, 1, 1);
    int nc = d.add_x(1, 1, 1);
    d.inputs = {{na, 0}, {nb, 0}};
    d.connect({na, 1}, mapped(rm, orD.inputs[0]));
    d.connect({nb, 1}, mapped(rm, orD.inputs[1]));
    d.connect(mapped(rm, orD.outputs[0]), {nc, 0});
    d.outputs = {{nc, 1}};
    require_valid(d);
    return d;
}

}  // namespace zxw
