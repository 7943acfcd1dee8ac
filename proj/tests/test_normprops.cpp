#include <doctest.h>

#include "random_arith.hpp"
#include "zxwring/json_io.hpp"
#include "zxwring/pnf.hpp"
#include "zxwring/semantics.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace zxw;

namespace {

bool z_family(VertexKind k) {
    return k == VertexKind::Z || k == VertexKind::NumState || k == VertexKind::NumGate;
}

// (longest directed path, vertex count below the normal-form prefix) of a
// diagram in the normalizer's intermediate vocabulary (spiders, fans,
// collectors, number boxes). Spider-spider wires are contracted first,
// mirroring fusion saturation, so chained spiders never inflate the depth.
// Observer states carry the canonical three prefix layers (fan, coefficient
// spiders, collectors), so "below" counts everything from layer four down:
// the not-yet-normalized remainder.
struct Measure {
    int depth = 0;
    int below = 0;
    friend bool operator==(const Measure& a, const Measure& b) {
        return a.depth == b.depth && a.below == b.below;
    }
};

bool lex_le(const Measure& a, const Measure& b) {
    return a.depth != b.depth ? a.depth < b.depth : a.below <= b.below;
}

Measure measure_of(const Diagram& d) {
    std::map<int, int> parent;
    for (const auto& [id, v] : d.verts) parent[id] = id;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : d.edges)
        if (z_family(d.verts.at(a.v).kind) && z_family(d.verts.at(b.v).kind))
            parent[find(a.v)] = find(b.v);

    // Remaining edges have a fan or collector end, which fixes the direction.
    auto source_end = [&](const PortRef& pr) {
        const Vertex& v = d.verts.at(pr.v);
        if (v.kind == VertexKind::W) return pr.p != 0;
        if (v.kind == VertexKind::CoW) return pr.p == 0;
        return false;
    };
    auto sink_end = [&](const PortRef& pr) {
        const Vertex& v = d.verts.at(pr.v);
        if (v.kind == VertexKind::W) return pr.p == 0;
        if (v.kind == VertexKind::CoW) return pr.p != 0;
        return false;
    };
    std::map<int, std::vector<int>> succ;
    std::map<int, int> indeg;
    for (const auto& [id, v] : d.verts) indeg[find(id)] = 0;
    for (const auto& [a, b] : d.edges) {
        int ca = find(a.v), cb = find(b.v);
        if (ca == cb) continue;
        int from, to;
        if (source_end(a) || sink_end(b)) {
            from = ca;
            to = cb;
        } else if (source_end(b) || sink_end(a)) {
            from = cb;
            to = ca;
        } else {
            continue;  // spider-spider wires were contracted above
        }
        succ[from].push_back(to);
        ++indeg[to];
    }

    std::vector<int> order;
    for (auto& [c, deg] : indeg)
        if (deg == 0) order.push_back(c);
    std::map<int, int> level;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int c = order[i];
        if (!level.count(c)) level[c] = 1;
        for (int t : succ[c]) {
            level[t] = std::max(level[t], level[c] + 1);
            if (--indeg[t] == 0) order.push_back(t);
        }
    }
    Measure m;
    for (auto& [c, lv] : level) {
        m.depth = std::max(m.depth, lv);
        if (lv >= 4) ++m.below;
    }
    return m;
}

const std::set<std::string>& allowed_trace_tags() {
    static const std::set<std::string> tags = {
        "S1",     "S2",    "K0",     "Zer",       "Ept",      "Pcpy",
        "Add",    "Aso",   "BZW",    "WW",        "Bs0",      "TA",
        "Sym",    "wid",   "wont",   "inner",     "xcpy",     "zerobox",
        "cp_add", "x_minus_x",       "cpk_add",   "kill_quad",
        "dbl_dist",        "dist_circ",           "0times"};
    return tags;
}

}  // namespace

TEST_SUITE("normprops") {

TEST_CASE("the emitted normal form is the controlled coefficient column") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 4);
        MultilinearPoly p = zxwtest::random_poly_dense(rng, n);
        Diagram d = pnf_to_diagram(p);
        auto t = evaluate<GaussianRational>(d);
        REQUIRE(t.shape.size() == static_cast<std::size_t>(n) + 1);
        unsigned rows = 1u << n;
        REQUIRE(t.data.size() == 2 * rows);
        for (unsigned r = 0; r < rows; ++r) {
            CHECK(t.data[2 * r] == GaussianRational(r == 0 ? 1 : 0));
            CHECK(t.data[2 * r + 1] == p.get(r));
        }
    }
}

TEST_CASE("random arithmetic diagrams normalize to their oracle polynomial") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        CAPTURE(trial);
        zxwtest::ArithSample s = zxwtest::random_arithmetic_diagram(rng);
        REQUIRE(s.d.verts.size() <= 25);
        NormalizeResult res = normalize_to_pnf(s.d);
        CHECK(res.poly == s.p);
        CHECK(res.poly == poly_of_diagram(s.d));
        for (const auto& tag : res.trace)
            CHECK_MESSAGE(allowed_trace_tags().count(tag), "tag: ", tag);
        auto back = read_pnf(res.pnf);
        REQUIRE(back.has_value());
        CHECK(*back == res.poly);
        CHECK(diagram_to_json(res.pnf) == diagram_to_json(pnf_to_diagram(res.poly)));
    }
}

TEST_CASE("normalization is stable under repetition on random diagrams") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 20; ++trial) {
        zxwtest::ArithSample s = zxwtest::random_arithmetic_diagram(rng);
        NormalizeResult r1 = normalize_to_pnf(s.d);
        NormalizeResult r2 = normalize_to_pnf(s.d);
        CHECK(diagram_to_json(r1.pnf) == diagram_to_json(r2.pnf));
        CHECK(r1.trace == r2.trace);
        NormalizeResult again = normalize_to_pnf(r1.pnf);
        CHECK(again.poly == r1.poly);
        CHECK(diagram_to_json(again.pnf) == diagram_to_json(r1.pnf));
    }
}

TEST_CASE("plus and times of normal forms track the polynomial ring") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 200; ++trial) {
        CAPTURE(trial);
        int n = 1 + static_cast<int>(rng() % 4);
        MultilinearPoly p = zxwtest::random_poly_dense(rng, n);
        MultilinearPoly q = zxwtest::random_poly_dense(rng, n);
        Diagram a = pnf_to_diagram(p);
        Diagram b = pnf_to_diagram(q);
        auto round = read_pnf(a);
        REQUIRE(round.has_value());
        CHECK(*round == p);
        CHECK(poly_of_diagram(a) == p);
        CHECK(poly_of_diagram(box_plus(a, b)) == poly_add(p, q));
        CHECK(poly_of_diagram(box_times(a, b)) == poly_mul(p, q));
    }
}

TEST_CASE("normalization steps shrink a lexicographic depth measure") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 30; ++trial) {
        CAPTURE(trial);
        zxwtest::ArithSample s = zxwtest::random_arithmetic_diagram(rng);
        std::vector<Measure> ms;
        NormalizeOptions opt;
        opt.observer = [&](const std::string&, const Diagram& state) {
            ms.push_back(measure_of(state));
        };
        normalize_to_pnf(s.d, opt);
        int plateau = 0;
        for (std::size_t i = 1; i < ms.size(); ++i) {
            CAPTURE(i);
            CHECK_MESSAGE(lex_le(ms[i], ms[i - 1]), "measure rose: (", ms[i - 1].depth, ",",
                          ms[i - 1].below, ") -> (", ms[i].depth, ",", ms[i].below, ")");
            plateau = (ms[i] == ms[i - 1]) ? plateau + 1 : 0;
            CHECK(plateau < 50);
        }
    }
}

}  // TEST_SUITE
