#include <doctest.h>

#include "zxwring/json_io.hpp"
#include "zxwring/linalg.hpp"
#include "zxwring/matpoly.hpp"
#include "zxwring/pnf.hpp"
#include "zxwring/semantics.hpp"

#include "random_arith.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace zxw;

namespace {

CMatrix mat(int rows, int cols, std::vector<std::complex<double>> data) {
    CMatrix m(rows, cols);
    m.a = std::move(data);
    return m;
}

CMatrix random_mat(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(d, d);
    for (auto& v : m.a) v = {u(rng), u(rng)};
    return m;
}

bool matrices_close(const CMatrix& x, const CMatrix& y, double tol) {
    return mat_max_abs_diff(x, y) <= tol;
}

// Control is the last input wire, so fixing its basis value selects every
// other column of the evaluated matrix.
CMatrix control_branch(const Diagram& d, int bit) {
    CMatrix full = evaluate_matrix(d);
    CMatrix out(full.rows, full.cols / 2);
    for (int r = 0; r < out.rows; ++r)
        for (int t = 0; t < out.cols; ++t) out.at(r, t) = full.at(r, 2 * t + bit);
    return out;
}

bool same_matpoly(const MatPoly& a, const MatPoly& b) {
    if (a.d != b.d || a.n_vars() != b.n_vars() || !(a.coeffs == b.coeffs)) return false;
    for (int i = 0; i < a.n_vars(); ++i) {
        if (a.vars[i].name != b.vars[i].name) return false;
        if (a.vars[i].blackbox != b.vars[i].blackbox) return false;
        if (!(a.vars[i].M == b.vars[i].M)) return false;
    }
    return true;
}

const std::vector<std::string> kNames = {"A", "B", "C"};

MatPoly random_matpoly(std::mt19937_64& rng, int n, bool dense = false) {
    std::vector<MatVar> vars;
    for (int j = 0; j < n; ++j) vars.push_back({kNames[j], random_mat(rng, 2), false});
    MultilinearPoly c(n);
    for (unsigned mask = 0; mask < c.n_masks(); ++mask) {
        if (!dense && rng() % 3 == 0) continue;
        c.set(mask, zxwtest::small_coeff(rng));
    }
    return make_matpoly(2, std::move(vars), std::move(c));
}

// Same diagram with shifted vertex ids and an identity spliced into every
// wire that is not part of the target register.
Diagram shuffled_copy(const Diagram& d, int id_base) {
    Diagram out;
    out.next_id = id_base;
    auto rm = merge_into(out, d);
    for (const PortRef& r : d.inputs) out.inputs.push_back({rm.at(r.v), r.p});
    for (const PortRef& r : d.outputs) out.outputs.push_back({rm.at(r.v), r.p});

    auto on_register = [&](const PortRef& pr) {
        const Vertex& v = out.vertex(pr.v);
        return v.kind == VertexKind::CtrlBox && pr.p < v.legs - 1;
    };
    std::vector<std::pair<PortRef, PortRef>> edges = out.edges;
    out.edges.clear();
    for (const auto& [a, b] : edges) {
        if (on_register(a) || on_register(b)) {
            out.edges.push_back({a, b});
            continue;
        }
        int id = out.add_identity();
        out.connect(a, {id, 0});
        out.connect({id, 1}, b);
    }
    require_valid(out);
    return out;
}

bool trace_is_clean(const std::vector<std::string>& trace, bool allow_controlled) {
    static const std::set<std::string> white = {
        "S1",   "S2",   "K0",      "Zer",    "Ept",     "Pcpy",      "Add",
        "Aso",  "BZW",  "WW",      "Bs0",    "TA",      "Sym",       "wid",
        "wont", "inner", "xcpy",   "zerobox", "cp_add", "x_minus_x", "cpk_add",
        "kill_quad", "dbl_dist", "dist_circ", "0times"};
    for (const auto& tag : trace) {
        if (white.count(tag)) continue;
        if (allow_controlled && (tag == "CMcpy" || tag == "CMcom")) continue;
        return false;
    }
    return true;
}

}  // namespace

TEST_SUITE("matpoly") {

TEST_CASE("construction rejects malformed inputs") {
    std::mt19937_64 rng(2101);
    CMatrix A = random_mat(rng, 2);

    CHECK_THROWS_AS(make_matpoly(2, {{"A", A, false}, {"A", A, false}}, MultilinearPoly(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_matpoly(2, {{"A", CMatrix(2, 3), false}}, MultilinearPoly(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_matpoly(2, {{"A", A, false}}, MultilinearPoly(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_matpoly(0, {}, MultilinearPoly(0)), std::invalid_argument);
    CHECK_THROWS_AS(make_matpoly(2, {{"", A, false}}, MultilinearPoly(1)),
                    std::invalid_argument);

    // Black boxes get an identity placeholder sized to d.
    MatPoly bb = make_matpoly(2, {{"A", CMatrix(), true}}, MultilinearPoly::variable(1, 1));
    CHECK(bb.vars[0].M == CMatrix::identity(2));
    CHECK_THROWS_AS(matpoly_eval(bb), std::invalid_argument);
}

TEST_CASE("evaluation multiplies monomials in ascending variable order") {
    std::mt19937_64 rng(2102);

    MatPoly c5 = make_matpoly(3, {}, MultilinearPoly::constant(0, GaussianRational(5)));
    CHECK(matpoly_eval(c5) == mat(3, 3, {5.0, 0, 0, 0, 5.0, 0, 0, 0, 5.0}));

    CMatrix X = mat(2, 2, {0.0, 1.0, 1.0, 0.0});
    MatPoly px = make_matpoly(2, {{"A", X, false}}, MultilinearPoly::variable(1, 1));
    CHECK(matpoly_eval(px) == X);

    CMatrix A = random_mat(rng, 2), B = random_mat(rng, 2);
    MultilinearPoly one_ab(2);
    one_ab.set(0, GaussianRational(1));
    one_ab.set(3, GaussianRational(1));  // x1 x2
    MatPoly p = make_matpoly(2, {{"A", A, false}, {"B", B, false}}, one_ab);
    CMatrix expect = mat_add(CMatrix::identity(2), mat_mul(A, B));
    CHECK(matrices_close(matpoly_eval(p), expect, 1e-12));
    CHECK(mat_max_abs_diff(matpoly_eval(p), mat_add(CMatrix::identity(2), mat_mul(B, A))) >
          1e-3);
}

TEST_CASE("normal form diagram has branches I and eval(p)") {
    std::mt19937_64 rng(2103);

    // Constant polynomial: both branches are the identity.
    MatPoly one = make_matpoly(2, {}, MultilinearPoly::constant(0, GaussianRational(1)));
    Diagram d1 = matpoly_to_diagram(one);
    CHECK(matrices_close(control_branch(d1, 0), CMatrix::identity(2), 1e-12));
    CHECK(matrices_close(control_branch(d1, 1), CMatrix::identity(2), 1e-12));

    // a + b x_A + c x_B against the hand-built combination.
    CMatrix A = random_mat(rng, 2), B = random_mat(rng, 2);
    std::complex<double> a{2.0, 0.0}, b{-1.0, 0.5}, c{0.0, 1.0};
    MultilinearPoly lin(2);
    lin.set(0, GaussianRational::from(a));
    lin.set(2, GaussianRational::from(b));
    lin.set(1, GaussianRational::from(c));
    MatPoly pl = make_matpoly(2, {{"A", A, false}, {"B", B, false}}, lin);
    CMatrix want = mat_add(mat_scale(CMatrix::identity(2), a),
                           mat_add(mat_scale(A, b), mat_scale(B, c)));
    CHECK(matrices_close(control_branch(matpoly_to_diagram(pl), 1), want, 1e-12));

    for (int trial = 0; trial < 30; ++trial) {
        MatPoly p = random_matpoly(rng, 1 + static_cast<int>(rng() % 3));
        Diagram dg = matpoly_to_diagram(p);
        CHECK(matrices_close(control_branch(dg, 0), CMatrix::identity(2), 1e-9));
        CHECK(matrices_close(control_branch(dg, 1), matpoly_eval(p), 1e-9));
    }

    CMatrix M3 = CMatrix::identity(3);
    MatPoly bad = make_matpoly(3, {{"A", M3, false}}, MultilinearPoly::variable(1, 1));
    CHECK_THROWS_AS(matpoly_to_diagram(bad), std::invalid_argument);
}

TEST_CASE("round trip recovers the polynomial exactly") {
    std::mt19937_64 rng(2104);
    for (int trial = 0; trial < 100; ++trial) {
        MatPoly p = random_matpoly(rng, 1 + static_cast<int>(rng() % 3));
        Diagram dg = matpoly_to_diagram(p);
        MatPolyReadResult rt = diagram_to_matpoly(dg);
        CHECK(same_matpoly(rt.poly, p));
        CHECK(trace_is_clean(rt.trace, false));

        // A relabeled, identity-padded copy reads back to the same normal form.
        MatPolyReadResult rt2 = diagram_to_matpoly(shuffled_copy(dg, 40 + trial));
        CHECK(same_matpoly(rt2.poly, p));
        CHECK(diagram_to_json(matpoly_to_diagram(rt.poly)) ==
              diagram_to_json(matpoly_to_diagram(rt2.poly)));
    }

    // Zero polynomial and constant polynomial round trip too.
    std::vector<MatVar> vs = {{"A", random_mat(rng, 2), false}};
    MatPoly zero = make_matpoly(2, vs, MultilinearPoly(1));
    CHECK(same_matpoly(diagram_to_matpoly(matpoly_to_diagram(zero)).poly, zero));
    MatPoly konst = make_matpoly(2, {}, MultilinearPoly::constant(0, GaussianRational(7)));
    CHECK(same_matpoly(diagram_to_matpoly(matpoly_to_diagram(konst)).poly, konst));
}

TEST_CASE("commute law sorts boxes across exclusive monomials") {
    std::mt19937_64 rng(2105);
    CMatrix A = random_mat(rng, 2), B = random_mat(rng, 2);

    // 1 + 2 x_A + 3 x_B, but with the A box first on the register. q is the
    // coefficient polynomial in register-reading order: y1 is the last box
    // (B), y2 the first (A).
    MultilinearPoly q(2);
    q.set(0, GaussianRational(1));
    q.set(2, GaussianRational(3));  // y1 -> B
    q.set(1, GaussianRational(2));  // y2 -> A
    Diagram dg;
    Diagram scalar = pnf_to_diagram(q);
    auto rm = merge_into(dg, scalar);
    dg.set_matrix("A", A);
    dg.set_matrix("B", B);
    int ba = dg.add_ctrlbox("A");
    int bb = dg.add_ctrlbox("B");
    dg.connect(ba, 0, bb, 1);  // register: A first, then B
    PortRef o0 = scalar.outputs[0], o1 = scalar.outputs[1];
    dg.connect(PortRef{bb, 2}, PortRef{rm.at(o0.v), o0.p});
    dg.connect(PortRef{ba, 2}, PortRef{rm.at(o1.v), o1.p});
    dg.inputs = {{ba, 1}, {rm.at(scalar.inputs[0].v), scalar.inputs[0].p}};
    dg.outputs = {{bb, 0}};
    require_valid(dg);

    MatPolyReadResult rt = diagram_to_matpoly(dg);
    CHECK(rt.poly.vars[0].name == "A");
    CHECK(rt.poly.vars[1].name == "B");
    CHECK(rt.poly.coeffs.get(0) == GaussianRational(1));
    CHECK(rt.poly.coeffs.get(2) == GaussianRational(2));
    CHECK(rt.poly.coeffs.get(1) == GaussianRational(3));
    CHECK(std::count(rt.trace.begin(), rt.trace.end(), "CMcom") >= 1);
    CHECK(trace_is_clean(rt.trace, true));
    CHECK(matrices_close(control_branch(dg, 1), matpoly_eval(rt.poly), 1e-9));

    // Same register order but with a co-occurring monomial: the boxes sit in
    // one sector and may not be commuted.
    MultilinearPoly q2(2);
    q2.set(3, GaussianRational(1));
    Diagram dg2;
    Diagram scalar2 = pnf_to_diagram(q2);
    auto rm2 = merge_into(dg2, scalar2);
    dg2.set_matrix("A", A);
    dg2.set_matrix("B", B);
    int ba2 = dg2.add_ctrlbox("A");
    int bb2 = dg2.add_ctrlbox("B");
    dg2.connect(ba2, 0, bb2, 1);
    PortRef p0 = scalar2.outputs[0], p1 = scalar2.outputs[1];
    dg2.connect(PortRef{bb2, 2}, PortRef{rm2.at(p0.v), p0.p});
    dg2.connect(PortRef{ba2, 2}, PortRef{rm2.at(p1.v), p1.p});
    dg2.inputs = {{ba2, 1}, {rm2.at(scalar2.inputs[0].v), scalar2.inputs[0].p}};
    dg2.outputs = {{bb2, 0}};
    require_valid(dg2);
    CHECK_THROWS_WITH_AS(diagram_to_matpoly(dg2),
                         doctest::Contains("out of order"), std::invalid_argument);
}

TEST_CASE("copy law merges same-name boxes across exclusive monomials") {
    std::mt19937_64 rng(2106);
    CMatrix A = random_mat(rng, 2);

    // Control fanned by W into two copies of the A box.
    Diagram dg;
    dg.set_matrix("A", A);
    int w = dg.add_w(2);
    int b1 = dg.add_ctrlbox("A");
    int b2 = dg.add_ctrlbox("A");
    dg.connect(b1, 0, b2, 1);
    dg.connect(w, 1, b2, 2);
    dg.connect(w, 2, b1, 2);
    dg.inputs = {{b1, 1}, {w, 0}};
    dg.outputs = {{b2, 0}};
    require_valid(dg);

    MatPolyReadResult rt = diagram_to_matpoly(dg);
    CHECK(rt.poly.n_vars() == 1);
    CHECK(rt.poly.vars[0].name == "A");
    CHECK(rt.poly.coeffs.get(1) == GaussianRational(2));  // x_A twice over, once each sector
    CHECK(rt.poly.coeffs.get(0) == GaussianRational(0));
    CHECK(std::count(rt.trace.begin(), rt.trace.end(), "CMcpy") == 1);
    CHECK(trace_is_clean(rt.trace, true));
    CHECK(matrices_close(control_branch(dg, 1), mat_scale(A, 2.0), 1e-9));

    // Merging the fan back through a coW gives one box with the same reading;
    // the squared monomial never survives the collector.
    Diagram dm;
    dm.set_matrix("A", A);
    int w2 = dm.add_w(2);
    int cw = dm.add_cow(2);
    int b = dm.add_ctrlbox("A");
    dm.connect(w2, 1, cw, 1);
    dm.connect(w2, 2, cw, 2);
    dm.connect(cw, 0, b, 2);
    dm.inputs = {{b, 1}, {w2, 0}};
    dm.outputs = {{b, 0}};
    require_valid(dm);

    MatPolyReadResult rm = diagram_to_matpoly(dm);
    CHECK(same_matpoly(rm.poly, rt.poly));
    CHECK(trace_is_clean(rm.trace, false));
    CHECK(matrices_close(control_branch(dm, 1), mat_scale(A, 2.0), 1e-9));

    // A copied (not fanned) control would square the variable; that shape has
    // no multilinear reading.
    Diagram dq;
    dq.set_matrix("A", A);
    int z = dq.add_z(1, 2, GaussianRational(1));
    int c1 = dq.add_ctrlbox("A");
    int c2 = dq.add_ctrlbox("A");
    dq.connect(c1, 0, c2, 1);
    dq.connect(z, 1, c2, 2);
    dq.connect(z, 2, c1, 2);
    dq.inputs = {{c1, 1}, {z, 0}};
    dq.outputs = {{c2, 0}};
    require_valid(dq);
    CHECK_THROWS_WITH_AS(diagram_to_matpoly(dq),
                         doctest::Contains("twice in one monomial"), std::invalid_argument);
}

TEST_CASE("malformed register shapes are rejected") {
    std::mt19937_64 rng(2107);
    CMatrix A = random_mat(rng, 2), B = random_mat(rng, 2);

    // Box hanging off the register.
    MatPoly p = make_matpoly(2, {{"A", A, false}}, MultilinearPoly::variable(1, 1));
    Diagram dg = matpoly_to_diagram(p);
    dg.set_matrix("B", B);
    int stray = dg.add_ctrlbox("B");
    int cap1 = dg.add_numstate(GaussianRational(0));
    int cap2 = dg.add_numstate(GaussianRational(0));
    int cap3 = dg.add_numstate(GaussianRational(0));
    dg.connect(stray, 0, cap1, 0);
    dg.connect(stray, 1, cap2, 0);
    dg.connect(stray, 2, cap3, 0);
    require_valid(dg);
    CHECK_THROWS_WITH_AS(diagram_to_matpoly(dg), doctest::Contains("off the target register"),
                         std::invalid_argument);

    // Wrong input arity.
    Diagram narrow = matpoly_to_diagram(p);
    narrow.inputs.pop_back();
    CHECK_THROWS_AS(diagram_to_matpoly(narrow), std::invalid_argument);
}

TEST_CASE("disjoint factoring matches the worked examples") {
    MultilinearPoly p = poly_parse("(x1 - 1)(2 x2 + 3)", 2);
    PolyFactors f = factor_disjoint(p);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.scalar == GaussianRational(-3));
    // Canonical factors are unit-constant; the familiar display forms are the
    // same factors up to the pulled scalars.
    CHECK(poly_scale(f.factors[0], GaussianRational(-1)) == poly_parse("x1 - 1", 2));
    MultilinearPoly half3(2);
    half3.set(0, GaussianRational(Rat(3, 2)));
    half3.set(1, GaussianRational(1));
    CHECK(poly_scale(f.factors[1], GaussianRational(Rat(3, 2))) == half3);
    MultilinearPoly back = MultilinearPoly::constant(2, f.scalar);
    for (const auto& g : f.factors) back = poly_mul(back, g);
    CHECK(back == p);

    PolyFactors m = factor_disjoint(poly_parse("x1 x2", 2));
    REQUIRE(m.factors.size() == 2);
    CHECK(m.scalar == GaussianRational(1));
    CHECK(m.factors[0] == poly_parse("x1", 2));
    CHECK(m.factors[1] == poly_parse("x2", 2));

    MultilinearPoly irr = poly_parse("1 + x1 + x2 + 2 x1 x2", 2);
    PolyFactors fi = factor_disjoint(irr);
    REQUIRE(fi.factors.size() == 1);
    CHECK(fi.scalar == GaussianRational(1));
    CHECK(fi.factors[0] == irr);

    PolyFactors z = factor_disjoint(MultilinearPoly(2));
    CHECK(z.scalar == GaussianRational(0));
    CHECK(z.factors.empty());
    PolyFactors c = factor_disjoint(MultilinearPoly::constant(2, GaussianRational(5)));
    CHECK(c.scalar == GaussianRational(5));
    CHECK(c.factors.empty());
}

TEST_CASE("matrix-level factoring and expansion") {
    std::mt19937_64 rng(2108);
    CMatrix A = random_mat(rng, 2), B = random_mat(rng, 2);

    // a + b x_A + c x_B + (bc/a) x_A x_B = a (1 + (b/a) x_A)(1 + (c/a) x_B)
    GaussianRational a(2), b(3), c(-1);
    MultilinearPoly pc(2);
    pc.set(0, a);
    pc.set(2, b);
    pc.set(1, c);
    pc.set(3, b * c / a);
    MatPoly p = make_matpoly(2, {{"A", A, false}, {"B", B, false}}, pc);
    FactorList fl = matpoly_factor(p);
    REQUIRE(fl.factors.size() == 2);
    CHECK(std::abs(fl.scalar - std::complex<double>(2.0, 0.0)) < 1e-12);
    CHECK(fl.factors[0].n_vars() == 1);
    CHECK(fl.factors[0].vars[0].name == "A");
    CHECK(fl.factors[0].coeffs.get(0) == GaussianRational(1));
    CHECK(fl.factors[0].coeffs.get(1) == b / a);
    CHECK(fl.factors[1].vars[0].name == "B");
    CHECK(fl.factors[1].coeffs.get(1) == c / a);
    CHECK(same_matpoly(matpoly_expand(fl), p));

    // The factored product realized as one diagram: factor diagrams chained
    // on the register, one Z spider copying the control into both factors.
    // The most-significant factor is listed first, so it is applied last.
    Diagram prodd;
    int fan = prodd.add_z(1, static_cast<int>(fl.factors.size()), GaussianRational(1));
    std::vector<PortRef> reg;
    for (std::size_t i = fl.factors.size(); i-- > 0;) {
        Diagram df = matpoly_to_diagram(fl.factors[i]);
        auto rm = merge_into(prodd, df);
        PortRef ctl = df.inputs.back();
        prodd.connect(PortRef{fan, 1 + static_cast<int>(i)}, PortRef{rm.at(ctl.v), ctl.p});
        if (reg.empty()) {
            for (std::size_t w = 0; w + 1 < df.inputs.size(); ++w)
                prodd.inputs.push_back({rm.at(df.inputs[w].v), df.inputs[w].p});
        } else {
            for (std::size_t w = 0; w + 1 < df.inputs.size(); ++w)
                prodd.connect(reg[w], PortRef{rm.at(df.inputs[w].v), df.inputs[w].p});
        }
        reg.clear();
        for (const PortRef& r : df.outputs) reg.push_back({rm.at(r.v), r.p});
    }
    prodd.inputs.push_back({fan, 0});
    prodd.outputs = reg;
    require_valid(prodd);
    // Scale the control branch by the scalar: the factored form carries it
    // outside the diagram.
    CMatrix lhs = mat_scale(control_branch(prodd, 1), fl.scalar);
    CHECK(matrices_close(lhs, matpoly_eval(p), 1e-9));
    CHECK(matrices_close(control_branch(prodd, 0), CMatrix::identity(2), 1e-9));

    // One variable: single factor equal to the input.
    MultilinearPoly single(1);
    single.set(0, GaussianRational(1));
    single.set(1, GaussianRational(5));
    MatPoly ps = make_matpoly(2, {{"A", A, false}}, single);
    FactorList fs = matpoly_factor(ps);
    REQUIRE(fs.factors.size() == 1);
    CHECK(same_matpoly(fs.factors[0], ps));
    CHECK(std::abs(fs.scalar - std::complex<double>(1.0, 0.0)) < 1e-12);

    // The irreducible coefficient pattern stays in one piece with matrix vars.
    MatPoly pirr = make_matpoly(2, {{"A", A, false}, {"B", B, false}},
                                poly_parse("1 + x1 + x2 + 2 x1 x2", 2));
    CHECK(matpoly_factor(pirr).factors.size() == 1);

    // Black boxes are fine: factoring only touches coefficients.
    MatPoly pbb = make_matpoly(2, {{"A", CMatrix(), true}, {"B", CMatrix(), true}}, pc);
    FactorList fbb = matpoly_factor(pbb);
    REQUIRE(fbb.factors.size() == 2);
    CHECK(fbb.factors[0].vars[0].blackbox);
}

TEST_CASE("factoring recovers random disjoint products") {
    std::mt19937_64 rng(2109);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 4);
        // Partition the n variables into 1..3 blocks.
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        const int blocks = 1 + static_cast<int>(rng() % 3);
        std::vector<unsigned> supports(blocks, 0);
        for (int i = 0; i < n; ++i)
            supports[i < blocks ? i : static_cast<int>(rng() % blocks)] |=
                1u << (n - 1 - perm[i]);

        std::vector<MultilinearPoly> gen;
        MultilinearPoly prod = MultilinearPoly::constant(n, GaussianRational(1));
        for (unsigned sup : supports) {
            MultilinearPoly f(n);
            f.set(0, GaussianRational(1));  // unit constant term
            for (unsigned sub = sup; sub; sub = (sub - 1) & sup)
                f.set(sub, GaussianRational::from(std::complex<double>(u(rng), u(rng))));
            gen.push_back(f);
            prod = poly_mul(prod, f);
        }

        PolyFactors got = factor_disjoint(prod);
        std::multiset<unsigned> want_sup, got_sup;
        auto support_of = [](const MultilinearPoly& q) {
            unsigned s = 0;
            for (const auto& [mask, cc] : q.coeffs) s |= mask;
            return s;
        };
        for (const auto& f : gen) want_sup.insert(support_of(f));
        for (const auto& f : got.factors) got_sup.insert(support_of(f));
        REQUIRE(want_sup == got_sup);
        CHECK(std::abs(got.scalar.to_complex() - std::complex<double>(1.0, 0.0)) < 1e-8);
        for (const auto& f : got.factors) {
            auto it = std::find_if(gen.begin(), gen.end(), [&](const MultilinearPoly& g) {
                return support_of(g) == support_of(f);
            });
            REQUIRE(it != gen.end());
            double dev = 0;
            for (unsigned mask = 0; mask < f.n_masks(); ++mask)
                dev = std::max(dev,
                               std::abs(f.get(mask).to_complex() - it->get(mask).to_complex()));
            CHECK(dev <= 1e-8);
            gen.erase(it);
        }
    }
}

TEST_CASE("matpoly JSON round trips and validates") {
    std::mt19937_64 rng(2110);
    for (int trial = 0; trial < 10; ++trial) {
        // JSON carries coefficients as doubles, so exact round trips need
        // binary fractions.
        const int n = 1 + static_cast<int>(rng() % 3);
        MatPoly p = random_matpoly(rng, n);
        MultilinearPoly dyadic(n);
        for (unsigned mask = 0; mask < dyadic.n_masks(); ++mask) {
            if (rng() % 3 == 0) continue;
            dyadic.set(mask, GaussianRational(Rat(BigInt(static_cast<int>(rng() % 9) - 4),
                                                  BigInt(1) << (rng() % 3)),
                                              Rat(BigInt(static_cast<int>(rng() % 5) - 2))));
        }
        p.coeffs = std::move(dyadic);
        CHECK(same_matpoly(matpoly_from_json(matpoly_to_json(p)), p));
    }

    MatPoly bb = make_matpoly(
        2, {{"A", CMatrix(), true}, {"B", CMatrix::identity(2), false}},
        poly_parse("1 + x1 x2", 2));
    MatPoly rt = matpoly_from_json(matpoly_to_json(bb));
    CHECK(same_matpoly(rt, bb));
    CHECK(rt.vars[0].blackbox);
    CHECK(!rt.vars[1].blackbox);

    CHECK_THROWS_AS(matpoly_from_json("{\"vars\": [], \"coeffs\": [{\"subset\": [\"X\"], "
                                      "\"c\": 1}]}"),
                    JsonError);
    CHECK_THROWS_AS(
        matpoly_from_json("{\"vars\": [{\"name\": \"A\", \"dim\": 2, \"entries\": "
                          "\"blackbox\"}], \"coeffs\": [{\"subset\": [\"A\", \"A\"], \"c\": "
                          "1}]}"),
        JsonError);
    CHECK_THROWS_AS(matpoly_from_json("not json"), JsonError);

    FactorList fl = matpoly_factor(bb);
    std::string fj = factorlist_to_json(fl);
    CHECK(fj.find("\"scalar\"") != std::string::npos);
    CHECK(fj.find("\"factors\"") != std::string::npos);
}

}  // TEST_SUITE
