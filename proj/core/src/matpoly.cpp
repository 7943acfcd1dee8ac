#include "zxwring/matpoly.hpp"

#include "zxwring/linalg.hpp"
#include "zxwring/pnf.hpp"

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace zxw {

namespace {

unsigned support_of(const MultilinearPoly& p) {
    unsigned s = 0;
    for (const auto& [mask, c] : p.coeffs) s |= mask;
    return s;
}

}  // namespace

MatPoly make_matpoly(int d, std::vector<MatVar> vars, MultilinearPoly coeffs) {
    if (d < 1) throw std::invalid_argument("make_matpoly: dimension must be positive");
    if (coeffs.n_vars != static_cast<int>(vars.size()))
        throw std::invalid_argument("make_matpoly: coefficient polynomial has " +
                                    std::to_string(coeffs.n_vars) + " variables for " +
                                    std::to_string(vars.size()) + " matrices");
    std::set<std::string> seen;
    for (auto& v : vars) {
        if (v.name.empty()) throw std::invalid_argument("make_matpoly: empty variable name");
        if (!seen.insert(v.name).second)
            throw std::invalid_argument("make_matpoly: duplicate variable " + v.name);
        if (v.blackbox && v.M.rows == 0) v.M = CMatrix::identity(d);
        if (v.M.rows != d || v.M.cols != d)
            throw std::invalid_argument("make_matpoly: matrix for " + v.name + " is not " +
                                        std::to_string(d) + " x " + std::to_string(d));
    }
    MatPoly p;
    p.d = d;
    p.vars = std::move(vars);
    p.coeffs = std::move(coeffs);
    return p;
}

CMatrix matpoly_eval(const MatPoly& p) {
    for (const auto& v : p.vars)
        if (v.blackbox)
            throw std::invalid_argument("matpoly_eval: variable " + v.name + " is a black box");
    const int n = p.n_vars();
    CMatrix r(p.d, p.d);
    for (const auto& [mask, c] : p.coeffs.coeffs) {
        CMatrix acc = CMatrix::identity(p.d);
        for (int j = 1; j <= n; ++j)
            if (mask >> (n - j) & 1u) acc = mat_mul(acc, p.vars[j - 1].M);
        r = mat_add(r, mat_scale(acc, c.to_complex()));
    }
    return r;
}

Diagram matpoly_to_diagram(const MatPoly& p) {
    const int t = log2_exact(p.d);
    if (t < 0)
        throw std::invalid_argument("matpoly_to_diagram: dimension is not a power of two");
    (void)make_matpoly(p.d, p.vars, p.coeffs);  // shape check only
    const int n = p.n_vars();

    Diagram dg;
    Diagram scalar = pnf_to_diagram(p.coeffs);
    auto rm = merge_into(dg, scalar);
    for (const auto& v : p.vars)
        dg.set_matrix(v.name, v.M.rows == 0 ? CMatrix::identity(p.d) : v.M);

    std::vector<PortRef> reg_in, reg_out;
    if (n == 0) {
        for (int i = 0; i < t; ++i) {
            int id = dg.add_identity();
            reg_in.push_back({id, 0});
            reg_out.push_back({id, 1});
        }
    } else {
        // The last variable's box sits first on the register, so a monomial
        // acts as its ascending product (x1's matrix leftmost), matching
        // matpoly_eval.
        int prev = -1;
        for (int j = n; j >= 1; --j) {
            int b = dg.add_ctrlbox(p.vars[j - 1].name);
            PortRef so = scalar.outputs[j - 1];
            dg.connect(PortRef{b, 2 * t}, PortRef{rm.at(so.v), so.p});
            if (prev < 0)
                for (int i = 0; i < t; ++i) reg_in.push_back({b, t + i});
            else
                for (int i = 0; i < t; ++i) dg.connect(prev, i, b, t + i);
            prev = b;
        }
        for (int i = 0; i < t; ++i) reg_out.push_back({prev, i});
    }

    dg.inputs = reg_in;
    dg.inputs.push_back({rm.at(scalar.inputs[0].v), scalar.inputs[0].p});
    dg.outputs = reg_out;
    require_valid(dg);
    return dg;
}

namespace {

bool is_box_port(const std::set<int>& boxes, const PortRef& pr) {
    return boxes.count(pr.v) != 0;
}

}  // namespace

MatPolyReadResult diagram_to_matpoly(const Diagram& d) {
    require_valid(d);
    const int t = static_cast<int>(d.outputs.size());
    if (d.inputs.size() != static_cast<std::size_t>(t) + 1)
        throw std::invalid_argument(
            "diagram_to_matpoly: expected the target inputs plus one control input");

    std::map<PortRef, PortRef> peer;
    for (const auto& [a, b] : d.edges) {
        peer[a] = b;
        peer[b] = a;
    }
    std::set<int> boxes;
    for (const auto& [id, v] : d.verts)
        if (v.kind == VertexKind::CtrlBox) boxes.insert(id);
    const int k = static_cast<int>(boxes.size());

    // Walk the target register front to back and note each box's control feed.
    std::vector<int> chain;
    std::vector<PortRef> ctl_feed;  // {-1,-1} when the control is the diagram input
    std::set<int> reg_ids;          // register furniture to drop from the scalar part
    if (k == 0) {
        for (int i = 0; i < t; ++i) {
            PortRef in = d.inputs[i];
            if (d.vertex(in.v).kind != VertexKind::Identity || in.p != 0 ||
                !(d.outputs[i] == PortRef{in.v, 1}))
                throw std::invalid_argument("diagram_to_matpoly: target wire " +
                                            std::to_string(i) + " is not a plain pass-through");
            reg_ids.insert(in.v);
        }
    } else {
        int cur = d.inputs[0].v;
        for (;;) {
            const Vertex& bv = d.vertex(cur);
            if (bv.kind != VertexKind::CtrlBox)
                throw std::invalid_argument(
                    "diagram_to_matpoly: target register runs through vertex " +
                    std::to_string(cur) + ", not a controlled box");
            if (bv.legs != 2 * t + 1)
                throw std::invalid_argument("diagram_to_matpoly: box " + bv.name +
                                            " does not act on the full target register");
            if (chain.empty()) {
                for (int i = 0; i < t; ++i)
                    if (!(d.inputs[i] == PortRef{cur, t + i}))
                        throw std::invalid_argument(
                            "diagram_to_matpoly: target inputs do not enter one box in order");
            }
            chain.push_back(cur);
            PortRef cp{cur, 2 * t};
            auto pit = peer.find(cp);
            if (pit != peer.end())
                ctl_feed.push_back(pit->second);
            else if (d.inputs[t] == cp)
                ctl_feed.push_back({-1, -1});
            else
                throw std::invalid_argument("diagram_to_matpoly: box " + bv.name +
                                            " has an unconnected control");
            if (d.outputs[0] == PortRef{cur, 0}) {
                for (int i = 0; i < t; ++i)
                    if (!(d.outputs[i] == PortRef{cur, i}))
                        throw std::invalid_argument(
                            "diagram_to_matpoly: target outputs do not leave one box in order");
                break;
            }
            auto nit = peer.find({cur, 0});
            if (nit == peer.end())
                throw std::invalid_argument("diagram_to_matpoly: broken target register");
            int nxt = nit->second.v;
            for (int i = 0; i < t; ++i) {
                auto eit = peer.find({cur, i});
                if (eit == peer.end() || eit->second.v != nxt || eit->second.p != t + i)
                    throw std::invalid_argument(
                        "diagram_to_matpoly: target register wires cross between boxes");
            }
            cur = nxt;
        }
        if (static_cast<int>(chain.size()) != k)
            throw std::invalid_argument(
                "diagram_to_matpoly: some controlled boxes are off the target register");
    }

    // Scalar part: everything but the boxes, with one output per control feed
    // in reverse register order, so the first-applied box reads the last
    // output (the canonical builder's layout).
    Diagram s;
    s.verts = d.verts;
    s.matrices = d.matrices;
    s.next_id = d.next_id;
    for (int id : boxes) s.verts.erase(id);
    for (int id : reg_ids) s.verts.erase(id);
    for (const auto& [a, b] : d.edges)
        if (!is_box_port(boxes, a) && !is_box_port(boxes, b)) s.edges.push_back({a, b});
    s.inputs = {d.inputs[t]};
    for (int i = k - 1; i >= 0; --i) {
        if (ctl_feed[i].v < 0) {
            int idv = s.add_identity();
            s.inputs[0] = {idv, 0};
            s.outputs.push_back({idv, 1});
        } else {
            s.outputs.push_back(ctl_feed[i]);
        }
    }
    NormalizeResult nr = normalize_to_pnf(s);

    // q's variable j belongs to the box at register position k+1-j; merge
    // repeated names and move every box to its slot in name order. Both moves
    // are the copy and commute laws, so they must never pair two boxes inside
    // one monomial.
    std::vector<std::string> names;
    for (int j = 1; j <= k; ++j) names.push_back(d.vertex(chain[k - j]).name);
    std::vector<std::string> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const int m = static_cast<int>(sorted.size());
    std::vector<int> sigma(k + 1, 0);  // 1-based
    for (int j = 1; j <= k; ++j)
        sigma[j] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(),
                                                     names[j - 1]) -
                                    sorted.begin()) +
                   1;

    MultilinearPoly out(m);
    for (const auto& [mask, c] : nr.poly.coeffs) {
        unsigned om = 0;
        int last = 0;
        for (int j = 1; j <= k; ++j) {
            if (!(mask >> (k - j) & 1u)) continue;
            const int v = sigma[j];
            const unsigned bit = 1u << (m - v);
            if (om & bit)
                throw std::invalid_argument("diagram_to_matpoly: " + sorted[v - 1] +
                                            " is applied twice in one monomial");
            if (v < last)
                throw std::invalid_argument(
                    "diagram_to_matpoly: boxes inside one monomial are out of order (" +
                    sorted[v - 1] + ")");
            last = v;
            om |= bit;
        }
        out.add_to(om, c);
    }

    const int dim = 1 << t;
    std::vector<MatVar> vars;
    for (const auto& nm : sorted) {
        const CMatrix& M = d.matrices.at(nm);
        if (M.rows != dim || M.cols != dim)
            throw std::invalid_argument("diagram_to_matpoly: matrix " + nm +
                                        " does not match the register size");
        vars.push_back({nm, M, false});
    }

    MatPolyReadResult res;
    res.poly = make_matpoly(dim, std::move(vars), std::move(out));
    res.trace = std::move(nr.trace);
    for (int extra = k - m; extra > 0; --extra) res.trace.push_back("CMcpy");
    for (int j = 1; j <= k; ++j)
        for (int jj = j + 1; jj <= k; ++jj)
            if (sigma[j] > sigma[jj]) res.trace.push_back("CMcom");
    return res;
}

namespace {

constexpr double kRankTol = 1e-9;
constexpr double kExpandTol = 1e-8;

// All submasks of s, ascending (starts at 0, ends at s).
std::vector<unsigned> submasks_of(unsigned s) {
    std::vector<unsigned> r;
    for (unsigned sub = s;; sub = (sub - 1) & s) {
        r.push_back(sub);
        if (sub == 0) break;
    }
    std::reverse(r.begin(), r.end());
    return r;
}

bool rank1_within_tol(const std::vector<std::vector<std::complex<double>>>& A) {
    const int r = static_cast<int>(A.size());
    const int c = static_cast<int>(A[0].size());
    Eigen::MatrixXcd M(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) M(i, j) = A[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() < 2) return true;
    return sv(1) <= kRankTol * sv(0);
}

// Recursive bipartition search. q is nonzero with support S; factors are
// appended to out. The candidate side containing the most significant
// variable is enumerated, which visits each unordered bipartition once.
void split_support(const MultilinearPoly& q, unsigned S, std::vector<MultilinearPoly>& out) {
    if (S == 0 || (S & (S - 1)) == 0) {
        out.push_back(q);
        return;
    }
    unsigned anchor = S;
    while (anchor & (anchor - 1)) anchor &= anchor - 1;
    for (unsigned u = (S - 1) & S; u; u = (u - 1) & S) {
        if (!(u & anchor)) continue;
        const unsigned v = S & ~u;
        const auto us = submasks_of(u);
        const auto vs = submasks_of(v);
        std::vector<std::vector<std::complex<double>>> A(
            us.size(), std::vector<std::complex<double>>(vs.size()));
        for (std::size_t i = 0; i < us.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j)
                A[i][j] = q.get(us[i] | vs[j]).to_complex();
        if (!rank1_within_tol(A)) continue;

        std::size_t pr = 0, pc = 0;
        double best = -1;
        for (std::size_t i = 0; i < us.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j)
                if (std::abs(A[i][j]) > best) {
                    best = std::abs(A[i][j]);
                    pr = i;
                    pc = j;
                }
        if (best <= 0) continue;

        // Cross-ratio extraction keeps rational coefficients exact; the SVD
        // above only decides whether the block splits.
        const GaussianRational piv = q.get(us[pr] | vs[pc]);
        MultilinearPoly qu(q.n_vars), qv(q.n_vars);
        for (std::size_t i = 0; i < us.size(); ++i) qu.set(us[i], q.get(us[i] | vs[pc]));
        for (std::size_t j = 0; j < vs.size(); ++j)
            qv.set(vs[j], q.get(us[pr] | vs[j]) / piv);
        split_support(qu, support_of(qu), out);
        split_support(qv, support_of(qv), out);
        return;
    }
    out.push_back(q);
}

// Scale so the constant term is 1, or the leading coefficient when the
// constant term vanishes; returns the factor pulled out.
GaussianRational normalize_factor(MultilinearPoly& f) {
    GaussianRational c = f.get(0);
    if (c.is_zero()) c = f.coeffs.rbegin()->second;
    f = poly_scale(f, GaussianRational(1) / c);
    return c;
}

}  // namespace

PolyFactors factor_disjoint(const MultilinearPoly& p) {
    PolyFactors out;
    if (p.is_zero()) {
        out.scalar = GaussianRational(0);
        return out;
    }
    const unsigned S = support_of(p);
    if (S == 0) {
        out.scalar = p.get(0);
        return out;
    }

    std::vector<MultilinearPoly> fs;
    split_support(p, S, fs);
    for (auto& f : fs) out.scalar *= normalize_factor(f);
    std::sort(fs.begin(), fs.end(), [](const MultilinearPoly& a, const MultilinearPoly& b) {
        return support_of(a) > support_of(b);
    });

    MultilinearPoly prod = MultilinearPoly::constant(p.n_vars, out.scalar);
    for (const auto& f : fs) prod = poly_mul(prod, f);
    if (!(prod == p)) {
        double dev = 0;
        for (const auto& [mask, c] : p.coeffs)
            dev = std::max(dev, std::abs(c.to_complex() - prod.get(mask).to_complex()));
        for (const auto& [mask, c] : prod.coeffs)
            dev = std::max(dev, std::abs(c.to_complex() - p.get(mask).to_complex()));
        if (dev > kExpandTol) {
            // A split passed the rank test but not the product check; report
            // the input as a single factor rather than a wrong factorization.
            fs = {p};
            out.scalar = normalize_factor(fs[0]);
        }
    }
    out.factors = std::move(fs);
    return out;
}

FactorList matpoly_factor(const MatPoly& p) {
    PolyFactors pf = factor_disjoint(p.coeffs);
    FactorList out;
    out.scalar = pf.scalar.to_complex();
    const int n = p.n_vars();
    for (const auto& f : pf.factors) {
        const unsigned sup = support_of(f);
        if (sup == 0) {
            out.scalar *= f.get(0).to_complex();
            continue;
        }
        std::vector<int> js;
        for (int j = 1; j <= n; ++j)
            if (sup >> (n - j) & 1u) js.push_back(j);
        const int m = static_cast<int>(js.size());
        std::vector<MatVar> vars;
        for (int j : js) vars.push_back(p.vars[j - 1]);
        MultilinearPoly c(m);
        for (const auto& [mask, coef] : f.coeffs) {
            unsigned om = 0;
            for (int i = 0; i < m; ++i)
                if (mask >> (n - js[i]) & 1u) om |= 1u << (m - 1 - i);
            c.set(om, coef);
        }
        out.factors.push_back(make_matpoly(p.d, std::move(vars), std::move(c)));
    }
    return out;
}

MatPoly matpoly_expand(const FactorList& f) {
    std::map<std::string, MatVar> by_name;
    int d = 0;
    for (const auto& fac : f.factors) {
        if (d == 0)
            d = fac.d;
        else if (d != fac.d)
            throw std::invalid_argument("matpoly_expand: factors have mixed dimensions");
        for (const auto& v : fac.vars)
            if (!by_name.emplace(v.name, v).second)
                throw std::invalid_argument("matpoly_expand: variable " + v.name +
                                            " appears in two factors");
    }
    if (d == 0) d = 1;

    std::vector<MatVar> vars;
    std::map<std::string, int> pos;  // 1-based variable index in the union
    for (const auto& [nm, v] : by_name) {
        vars.push_back(v);
        pos[nm] = static_cast<int>(vars.size());
    }
    const int m = static_cast<int>(vars.size());

    MultilinearPoly acc = MultilinearPoly::constant(m, GaussianRational::from(f.scalar));
    for (const auto& fac : f.factors) {
        const int kk = fac.n_vars();
        MultilinearPoly lifted(m);
        for (const auto& [mask, c] : fac.coeffs.coeffs) {
            unsigned om = 0;
            for (int j = 1; j <= kk; ++j)
                if (mask >> (kk - j) & 1u) om |= 1u << (m - pos.at(fac.vars[j - 1].name));
            lifted.set(om, c);
        }
        acc = poly_mul(acc, lifted);
    }
    return make_matpoly(d, std::move(vars), std::move(acc));
}

}  // namespace zxw
