#include <doctest.h>

#include "zxwring/pnf.hpp"
#include "zxwring/rules.hpp"
#include "zxwring/semantics.hpp"

#include <map>
#include <random>
#include <set>
#include <string>

using namespace zxw;

namespace {

double tensor_dev(const Diagram& a, const Diagram& b) {
    auto ta = evaluate<std::complex<double>>(a);
    auto tb = evaluate<std::complex<double>>(b);
    REQUIRE(ta.shape == tb.shape);
    double m = 0.0;
    for (std::size_t i = 0; i < ta.data.size(); ++i)
        m = std::max(m, std::abs(ta.data[i] - tb.data[i]));
    return m;
}

// Apply and insist the rewrite kept the meaning.
Diagram apply_checked(const Diagram& d, const Match& m) {
    Diagram out = apply(d, m);
    CHECK(tensor_dev(d, out) <= 1e-9);
    return out;
}

MultilinearPoly small_poly(std::mt19937_64& rng, int n) {
    MultilinearPoly p(n);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (unsigned m = 0; m < p.n_masks(); ++m) p.set(m, GaussianRational(coeff(rng)));
    return p;
}

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("catalog names are unique and the classes are fully populated") {
    const auto& cat = rule_catalog();
    CHECK(cat.size() == 42);
    std::set<std::string> names;
    std::map<RuleClass, int> by_class;
    for (const auto& r : cat) {
        CHECK(names.insert(r.name).second);
        CHECK(find_rule(r.name) == &r);
        ++by_class[r.cls];
        CHECK(r.sample);
        CHECK(r.make);
    }
    CHECK(by_class[RuleClass::White] == 12);
    CHECK(by_class[RuleClass::Gray] == 6);
    CHECK(by_class[RuleClass::Structural] == 2);
    CHECK(by_class[RuleClass::Controlled] == 10);
    CHECK(by_class[RuleClass::LemmaFixture] == 12);
    CHECK(find_rule("no_such_rule") == nullptr);
}

TEST_CASE("every rule is sound across 100 random bindings") {
    for (const auto& r : rule_catalog()) {
        CAPTURE(r.name);
        SoundnessReport rep = check_soundness(r.name, 100, 1e-9);
        CHECK(rep.pass);
        CHECK(rep.trials == 100);
        int expected_exact = (r.exact_ok && r.expect_equal) ? 100 : 0;
        CHECK(rep.exact_trials == expected_exact);
        if (r.expect_equal && r.name != "Asym") CHECK(rep.max_dev <= 1e-9);
    }
}

TEST_CASE("the designated-port asymmetry witness stays unequal") {
    SoundnessReport rep = check_soundness("Asym", 50, 1e-9);
    CHECK(rep.pass);
    CHECK(rep.max_dev > 0.5);
}

TEST_CASE("square killing vanishes on the closed one-branch instance too") {
    SoundnessReport rep = check_soundness("kill_quad", 20, 1e-12);
    CHECK(rep.pass);
    CHECK(rep.note.find("vanishes") != std::string::npos);
}

TEST_CASE("instantiate validates both sides for every rule") {
    std::mt19937_64 rng(99);
    for (const auto& r : rule_catalog()) {
        CAPTURE(r.name);
        RulePair p = instantiate(r, r.sample(rng));
        CHECK(p.lhs.inputs.size() == p.rhs.inputs.size());
        CHECK(p.lhs.outputs.size() == p.rhs.outputs.size());
    }
}

TEST_CASE("fusion matcher collapses a spider chain to one vertex") {
    Diagram d;
    int z1 = d.add_z(1, 2, GaussianRational(2));
    int z2 = d.add_z(1, 1, GaussianRational(3));
    int z3 = d.add_z(1, 1, GaussianRational(5));
    d.connect({z1, 1}, {z2, 0});
    d.connect({z2, 1}, {z3, 0});
    d.inputs = {{z1, 0}};
    d.outputs = {{z1, 2}, {z3, 1}};
    CHECK(find_matches(d, "S1").size() == 2);
    Diagram cur = d;
    for (;;) {
        auto ms = find_matches(cur, "S1");
        if (ms.empty()) break;
        cur = apply(cur, ms[0]);
        CHECK(tensor_dev(d, cur) <= 1e-12);
    }
    REQUIRE(cur.verts.size() == 1);
    CHECK(cur.verts.begin()->second.param == GaussianRational(30));
}

TEST_CASE("fusion handles number states and gates as one-and-two-leg spiders") {
    Diagram d;
    int ns = d.add_numstate(GaussianRational(4));
    int g = d.add_numgate(GaussianRational(5));
    d.connect({ns, 0}, {g, 0});
    d.outputs = {{g, 1}};
    auto ms = find_matches(d, "S1");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    REQUIRE(out.verts.size() == 1);
    CHECK(out.verts.begin()->second.param == GaussianRational(20));
}

TEST_CASE("pass-through vertices splice out of the wire") {
    Diagram d;
    int ns = d.add_numstate(GaussianRational(7));
    int g = d.add_numgate(GaussianRational(1));
    d.connect({ns, 0}, {g, 0});
    d.outputs = {{g, 1}};
    auto ms = find_matches(d, "S2");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    CHECK(out.verts.size() == 1);

    Diagram d2;
    int w = d2.add_w(1);
    d2.inputs = {{w, 0}};
    d2.outputs = {{w, 1}};
    auto ws = find_matches(d2, "wid");
    REQUIRE(ws.size() == 1);
    Diagram out2 = apply_checked(d2, ws[0]);
    REQUIRE(out2.verts.size() == 1);
    CHECK(out2.verts.begin()->second.kind == VertexKind::Identity);
}

TEST_CASE("a state against a zero effect disappears entirely") {
    Diagram d;
    int ns = d.add_numstate(GaussianRational(9));
    int cap = d.add_z(1, 0, GaussianRational(0));
    d.connect({ns, 0}, {cap, 0});
    int keep = d.add_numstate(GaussianRational(3));
    d.outputs = {{keep, 0}};
    auto ms = find_matches(d, "Ept");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    CHECK(out.verts.size() == 1);
}

TEST_CASE("collector matcher folds two number states into their sum") {
    Diagram d;
    int a = d.add_numstate(GaussianRational(2));
    int b = d.add_numstate(GaussianRational(-5));
    int cw = d.add_cow(2);
    d.connect({a, 0}, {cw, 1});
    d.connect({b, 0}, {cw, 2});
    d.outputs = {{cw, 0}};
    auto ms = find_matches(d, "Add");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    REQUIRE(out.verts.size() == 1);
    CHECK(out.verts.begin()->second.param == GaussianRational(-3));
}

TEST_CASE("number gates slide through fan-outs onto every leg") {
    Diagram d;
    int g = d.add_numgate(GaussianRational(3));
    int w = d.add_w(3);
    d.connect({g, 1}, {w, 0});
    d.inputs = {{g, 0}};
    d.outputs = {{w, 1}, {w, 2}, {w, 3}};
    auto ms = find_matches(d, "Pcpy");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    int gates = 0;
    for (const auto& [id, v] : out.verts)
        if (v.kind == VertexKind::NumGate) ++gates;
    CHECK(gates == 3);
}

TEST_CASE("nested fan-outs flatten into one") {
    Diagram d;
    int wa = d.add_w(2);
    int wb = d.add_w(2);
    d.connect({wa, 2}, {wb, 0});
    d.inputs = {{wa, 0}};
    d.outputs = {{wa, 1}, {wb, 1}, {wb, 2}};
    auto ms = find_matches(d, "Aso");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    REQUIRE(out.verts.size() == 1);
    CHECK(out.verts.begin()->second.legs == 4);
}

TEST_CASE("collector-over-copy rewrites in both orientations") {
    // primary: collector feeding a parameter-1 copy spider
    Diagram d;
    int cw = d.add_cow(2);
    int z = d.add_z(1, 2, GaussianRational(1));
    d.connect({cw, 0}, {z, 0});
    d.inputs = {{cw, 1}, {cw, 2}};
    d.outputs = {{z, 1}, {z, 2}};
    auto ms = find_matches(d, "BZW");
    REQUIRE(!ms.empty());
    CHECK(ms[0].binding.nums[0] == 0);
    Diagram out = apply_checked(d, ms[0]);
    CHECK(out.verts.size() == 4);  // two copies, two collectors

    // transposed: copy spider with a 2-leg fan-out on one branch
    Diagram t;
    int zt = t.add_z(1, 2, GaussianRational(1));
    int wt = t.add_w(2);
    t.connect({zt, 1}, {wt, 0});
    t.inputs = {{zt, 0}};
    t.outputs = {{wt, 1}, {wt, 2}, {zt, 2}};
    auto ts = find_matches(t, "BZW");
    REQUIRE(!ts.empty());
    CHECK(ts[0].binding.nums[0] == 1);
    Diagram tout = apply_checked(t, ts[0]);
    CHECK(tout.verts.size() == 4);  // fan, two copies, one collector
}

TEST_CASE("square killing tolerates scalar hops on the way to the collector") {
    Diagram d;
    int z = d.add_z(1, 2, GaussianRational(1));
    int g2 = d.add_numgate(GaussianRational(2));
    int pass = d.add_cow(1);
    int cw = d.add_cow(2);
    d.connect({z, 1}, {g2, 0});
    d.connect({g2, 1}, {pass, 1});
    d.connect({pass, 0}, {cw, 1});
    d.connect({z, 2}, {cw, 2});
    d.inputs = {{z, 0}};
    d.outputs = {{cw, 0}};
    auto ms = find_matches(d, "kill_quad");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    REQUIRE(out.verts.size() == 1);
    CHECK(out.verts.begin()->second.kind == VertexKind::NumGate);
    CHECK(out.verts.begin()->second.param.is_zero());
}

TEST_CASE("controlled copy matcher duplicates the box along the register") {
    std::mt19937_64 rng(5);
    const RewriteRule* r = find_rule("CMcpy");
    REQUIRE(r != nullptr);
    RulePair p = instantiate(*r, r->sample(rng));
    auto ms = find_matches(p.lhs, "CMcpy");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(p.lhs, ms[0]);
    CHECK(tensor_dev(out, p.rhs) <= 1e-9);
}

TEST_CASE("controlled boxes sharing a fan-out swap places") {
    std::mt19937_64 rng(6);
    const RewriteRule* r = find_rule("CMcom");
    REQUIRE(r != nullptr);
    RulePair p = instantiate(*r, r->sample(rng));
    auto ms = find_matches(p.lhs, "CMcom");
    REQUIRE(ms.size() == 1);
    Diagram once = apply_checked(p.lhs, ms[0]);
    CHECK(tensor_dev(once, p.rhs) <= 1e-9);
    auto again = find_matches(once, "CMcom");
    REQUIRE(again.size() == 1);
    Diagram twice = apply_checked(once, again[0]);
    CHECK(tensor_dev(twice, p.lhs) <= 1e-9);
}

TEST_CASE("leg swaps on symmetric spiders change nothing") {
    Diagram d;
    int z = d.add_z(1, 2, GaussianRational(3));
    int a = d.add_numstate(GaussianRational(2));
    d.connect({z, 1}, {a, 0});
    d.inputs = {{z, 0}};
    d.outputs = {{z, 2}};
    auto ms = find_matches(d, "Sym");
    REQUIRE(!ms.empty());
    for (const auto& m : ms) apply_checked(d, m);
}

TEST_CASE("zero state collapses a fan-out into zero states") {
    Diagram d;
    int ns = d.add_numstate(GaussianRational(0));
    int w = d.add_w(3);
    d.connect({ns, 0}, {w, 0});
    d.outputs = {{w, 1}, {w, 2}, {w, 3}};
    auto ms = find_matches(d, "CS0");
    REQUIRE(ms.size() == 1);
    Diagram out = apply_checked(d, ms[0]);
    CHECK(out.verts.size() == 3);
    for (const auto& [id, v] : out.verts) {
        CHECK(v.kind == VertexKind::NumState);
        CHECK(v.param.is_zero());
    }
}

TEST_CASE("distribution duplicates the shared factor over plus sectors") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Diagram a = pnf_to_diagram(small_poly(rng, 1));
        Diagram b = pnf_to_diagram(small_poly(rng, 1));
        Diagram host = box_times(a, b);
        auto ms = find_matches(host, "dist_circ");
        REQUIRE(ms.size() == 2);  // either factor can play the split side
        apply_checked(host, ms[0]);
        apply_checked(host, ms[1]);
    }
}

TEST_CASE("stale matches are rejected after the host mutates") {
    Diagram d;
    int z1 = d.add_z(1, 1, GaussianRational(2));
    int z2 = d.add_z(1, 1, GaussianRational(3));
    d.connect({z1, 1}, {z2, 0});
    d.inputs = {{z1, 0}};
    d.outputs = {{z2, 1}};
    auto ms = find_matches(d, "S1");
    REQUIRE(ms.size() == 1);
    d.add_numstate(GaussianRational(1));  // unrelated mutation still bumps rev
    CHECK_THROWS_AS((void)apply(d, ms[0]), std::runtime_error);
}

TEST_CASE("reverse application is refused") {
    Diagram d;
    int z1 = d.add_z(1, 1, GaussianRational(2));
    int z2 = d.add_z(1, 1, GaussianRational(3));
    d.connect({z1, 1}, {z2, 0});
    d.inputs = {{z1, 0}};
    d.outputs = {{z2, 1}};
    auto ms = find_matches(d, "S1");
    REQUIRE(ms.size() == 1);
    CHECK_THROWS_AS((void)apply(d, ms[0], Direction::R2L), std::invalid_argument);
}

TEST_CASE("schematic rules report no host matches") {
    Diagram d;
    int h = d.add_h();
    d.inputs = {{h, 0}};
    d.outputs = {{h, 1}};
    CHECK(find_matches(d, "HD").empty());
    CHECK_THROWS_AS((void)find_matches(d, "no_such_rule"), std::invalid_argument);
}

TEST_CASE("the worked product replays through distribution and square killing") {
    Diagram host = box_times(pnf_to_diagram(poly_parse("x1 - 1")),
                             pnf_to_diagram(poly_parse("2x1 + 3")));
    Diagram cur = host;
    int dist_steps = 0;
    while (find_matches(cur, "kill_quad").empty()) {
        auto ms = find_matches(cur, "dist_circ");
        REQUIRE(!ms.empty());
        REQUIRE(dist_steps < 6);
        cur = apply_checked(cur, ms[0]);
        ++dist_steps;
    }
    CHECK(dist_steps == 2);
    auto ks = find_matches(cur, "kill_quad");
    REQUIRE(ks.size() == 1);
    Diagram done = apply_checked(cur, ks[0]);
    CHECK(tensor_dev(done, host) <= 1e-9);
    NormalizeResult res = normalize_to_pnf(done);
    CHECK(poly_print(res.poly) == "x1 - 3");
}

}  // TEST_SUITE
