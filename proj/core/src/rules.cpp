#include "zxwring/rules.hpp"

#include "zxwring/controlled.hpp"
#include "zxwring/pnf.hpp"
#include "zxwring/semantics.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace zxw {

namespace {

using RNG = std::mt19937_64;

GaussianRational rand_param(RNG& rng) {
    // Mix a few exact specials in with unit-square doubles so degenerate
    // parameter values get exercised every run.
    switch (rng() % 8) {
        case 0: return GaussianRational(0);
        case 1: return GaussianRational(1);
        case 2: return GaussianRational(-1);
        case 3: return GaussianRational::i();
        case 4: return GaussianRational(Rat(1, 2));
        default: break;
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return GaussianRational::from(std::complex<double>(u(rng), u(rng)));
}

GaussianRational rand_param_nz(RNG& rng, double min_abs = 0.1) {
    for (;;) {
        GaussianRational g = rand_param(rng);
        if (std::abs(g.to_complex()) > min_abs) return g;
    }
}

long rand_between(RNG& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

CMatrix rand_cmat(RNG& rng, int d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(d, d);
    for (auto& e : m.a) e = {u(rng), u(rng)};
    return m;
}

void add_scalar(Diagram& d, const GaussianRational& s) { d.add_z(0, 0, s - GaussianRational(1)); }

// sqrt2 and its inverse are not Gaussian rationals; both are realized as a
// tiny closed X-into-Z gadget instead of a scalar vertex.
void add_scalar_sqrt2(Diagram& d) {
    int x = d.add_x(0, 1, 0);
    int z = d.add_z(1, 0, GaussianRational(0));
    d.connect({x, 0}, {z, 0});
}

void add_scalar_inv_sqrt2(Diagram& d) {
    int x = d.add_x(0, 1, 1);
    int z = d.add_z(1, 0, GaussianRational(Rat(1, 2)));
    d.connect({x, 0}, {z, 0});
}

PortRef mapped(const std::map<int, int>& rm, PortRef p) { return {rm.at(p.v), p.p}; }

MultilinearPoly poly_from_params(int n, const std::vector<GaussianRational>& ps, std::size_t off) {
    MultilinearPoly p(n);
    for (unsigned mask = 0; mask < p.n_masks(); ++mask) p.set(mask, ps.at(off + mask));
    return p;
}

Binding sample_coeffs(RNG& rng, int count_nums_n, int polys) {
    Binding b;
    long n = rand_between(rng, 1, count_nums_n);
    b.nums.push_back(n);
    for (int k = 0; k < polys << n; ++k) b.params.push_back(rand_param(rng));
    return b;
}

// ---- catalog -------------------------------------------------------------

std::vector<RewriteRule> build_catalog() {
    std::vector<RewriteRule> rules;
    auto put = [&rules](RewriteRule r) { rules.push_back(std::move(r)); };

    // White rules: the equational core.

    put({"S1", RuleClass::White, "adjacent Z spiders fuse, parameters multiply", true, true, 0,
         [](RNG& rng) {
             Binding b;
             for (int k = 0; k < 4; ++k) b.nums.push_back(rand_between(rng, 0, 2));
             b.nums.push_back(rand_between(rng, 1, 2));  // shared wires
             b.params = {rand_param(rng), rand_param(rng)};
             return b;
         },
         [](const Binding& b) {
             int ma = (int)b.nums[0], na = (int)b.nums[1];
             int mb = (int)b.nums[2], nb = (int)b.nums[3], r = (int)b.nums[4];
             RulePair p;
             int za = p.lhs.add_z(ma, na + r, b.params[0]);
             int zb = p.lhs.add_z(r + mb, nb, b.params[1]);
             for (int i = 0; i < r; ++i) p.lhs.connect({za, ma + na + i}, {zb, i});
             for (int i = 0; i < ma; ++i) p.lhs.inputs.push_back({za, i});
             for (int i = 0; i < mb; ++i) p.lhs.inputs.push_back({zb, r + i});
             for (int i = 0; i < na; ++i) p.lhs.outputs.push_back({za, ma + i});
             for (int i = 0; i < nb; ++i) p.lhs.outputs.push_back({zb, r + mb + i});
             int z = p.rhs.add_z(ma + mb, na + nb, b.params[0] * b.params[1]);
             for (int i = 0; i < ma + mb; ++i) p.rhs.inputs.push_back({z, i});
             for (int i = 0; i < na + nb; ++i) p.rhs.outputs.push_back({z, ma + mb + i});
             return p;
         }});

    put({"S2", RuleClass::White, "parameter-1 Z and parity-0 X on two legs are plain wire", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 0, 1));
             return b;
         },
         [](const Binding& b) {
             RulePair p;
             int v = b.nums[0] ? p.lhs.add_x(1, 1, 0) : p.lhs.add_z(1, 1, GaussianRational(1));
             p.lhs.inputs = {{v, 0}};
             p.lhs.outputs = {{v, 1}};
             int id = p.rhs.add_identity();
             p.rhs.inputs = {{id, 0}};
             p.rhs.outputs = {{id, 1}};
             return p;
         }});

    put({"K0", RuleClass::White, "zero state copies through a Z spider", true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 0, 3));
             b.params.push_back(rand_param(rng));
             return b;
         },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             int ns = p.lhs.add_numstate(GaussianRational(0));
             int z = p.lhs.add_z(1, n, b.params[0]);
             p.lhs.connect({ns, 0}, {z, 0});
             for (int i = 0; i < n; ++i) p.lhs.outputs.push_back({z, 1 + i});
             for (int i = 0; i < n; ++i)
                 p.rhs.outputs.push_back({p.rhs.add_numstate(GaussianRational(0)), 0});
             return p;
         }});

    put({"Zer", RuleClass::White, "parameter-0 Z splits into disconnected zero halves", true, true,
         0,
         [](RNG& rng) {
             Binding b;
             do {
                 b.nums = {rand_between(rng, 0, 2), rand_between(rng, 0, 2)};
             } while (b.nums[0] + b.nums[1] == 0);
             return b;
         },
         [](const Binding& b) {
             int m = (int)b.nums[0], n = (int)b.nums[1];
             RulePair p;
             int z = p.lhs.add_z(m, n, GaussianRational(0));
             for (int i = 0; i < m; ++i) p.lhs.inputs.push_back({z, i});
             for (int i = 0; i < n; ++i) p.lhs.outputs.push_back({z, m + i});
             if (m > 0) {
                 int zi = p.rhs.add_z(m, 0, GaussianRational(0));
                 for (int i = 0; i < m; ++i) p.rhs.inputs.push_back({zi, i});
             }
             if (n > 0) {
                 int zo = p.rhs.add_z(0, n, GaussianRational(0));
                 for (int i = 0; i < n; ++i) p.rhs.outputs.push_back({zo, i});
             }
             return p;
         }});

    put({"Ept", RuleClass::White, "number state against a zero effect is the empty diagram", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.params.push_back(rand_param(rng));
             return b;
         },
         [](const Binding& b) {
             RulePair p;
             int ns = p.lhs.add_numstate(b.params[0]);
             int z = p.lhs.add_z(1, 0, GaussianRational(0));
             p.lhs.connect({ns, 0}, {z, 0});
             return p;
         }});

    put({"Pcpy", RuleClass::White, "number gate copies through a W fan-out", true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 3));
             b.params.push_back(rand_param(rng));
             return b;
         },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             int g = p.lhs.add_numgate(b.params[0]);
             int w = p.lhs.add_w(n);
             p.lhs.connect({g, 1}, {w, 0});
             p.lhs.inputs = {{g, 0}};
             for (int i = 0; i < n; ++i) p.lhs.outputs.push_back({w, 1 + i});
             int w2 = p.rhs.add_w(n);
             p.rhs.inputs = {{w2, 0}};
             for (int i = 0; i < n; ++i) {
                 int gi = p.rhs.add_numgate(b.params[0]);
                 p.rhs.connect({w2, 1 + i}, {gi, 0});
                 p.rhs.outputs.push_back({gi, 1});
             }
             return p;
         }});

    put({"Add", RuleClass::White, "collector merges two number states into their sum", true, true,
         0,
         [](RNG& rng) {
             Binding b;
             b.params = {rand_param(rng), rand_param(rng)};
             return b;
         },
         [](const Binding& b) {
             RulePair p;
             int na = p.lhs.add_numstate(b.params[0]);
             int nb = p.lhs.add_numstate(b.params[1]);
             int cw = p.lhs.add_cow(2);
             p.lhs.connect({na, 0}, {cw, 1});
             p.lhs.connect({nb, 0}, {cw, 2});
             p.lhs.outputs = {{cw, 0}};
             p.rhs.outputs = {{p.rhs.add_numstate(b.params[0] + b.params[1]), 0}};
             return p;
         }});

    put({"Aso", RuleClass::White, "nested W fan-outs flatten (and dually for collectors)", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums = {rand_between(rng, 1, 3), rand_between(rng, 1, 3), rand_between(rng, 0, 1)};
             return b;
         },
         [](const Binding& b) {
             int pw = (int)b.nums[0], q = (int)b.nums[1];
             bool co = b.nums[2] != 0;
             RulePair p;
             if (!co) {
                 int wa = p.lhs.add_w(pw + 1);
                 int wb = p.lhs.add_w(q);
                 p.lhs.connect({wa, pw + 1}, {wb, 0});
                 p.lhs.inputs = {{wa, 0}};
                 for (int i = 0; i < pw; ++i) p.lhs.outputs.push_back({wa, 1 + i});
                 for (int i = 0; i < q; ++i) p.lhs.outputs.push_back({wb, 1 + i});
                 int w = p.rhs.add_w(pw + q);
                 p.rhs.inputs = {{w, 0}};
                 for (int i = 0; i < pw + q; ++i) p.rhs.outputs.push_back({w, 1 + i});
             } else {
                 int ca = p.lhs.add_cow(pw + 1);
                 int cb = p.lhs.add_cow(q);
                 p.lhs.connect({cb, 0}, {ca, pw + 1});
                 p.lhs.outputs = {{ca, 0}};
                 for (int i = 0; i < pw; ++i) p.lhs.inputs.push_back({ca, 1 + i});
                 for (int i = 0; i < q; ++i) p.lhs.inputs.push_back({cb, 1 + i});
                 int c = p.rhs.add_cow(pw + q);
                 p.rhs.outputs = {{c, 0}};
                 for (int i = 0; i < pw + q; ++i) p.rhs.inputs.push_back({c, 1 + i});
             }
             return p;
         }});

    put({"BZW", RuleClass::White, "collector commutes over a parameter-1 Z spider", true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums = {rand_between(rng, 1, 3), rand_between(rng, 1, 3)};
             return b;
         },
         [](const Binding& b) {
             int k = (int)b.nums[0], j = (int)b.nums[1];
             RulePair p;
             int cw = p.lhs.add_cow(k);
             int z = p.lhs.add_z(1, j, GaussianRational(1));
             p.lhs.connect({cw, 0}, {z, 0});
             for (int i = 0; i < k; ++i) p.lhs.inputs.push_back({cw, 1 + i});
             for (int t = 0; t < j; ++t) p.lhs.outputs.push_back({z, 1 + t});
             std::vector<int> zi(k), ct(j);
             for (int i = 0; i < k; ++i) zi[i] = p.rhs.add_z(1, j, GaussianRational(1));
             for (int t = 0; t < j; ++t) ct[t] = p.rhs.add_cow(k);
             for (int i = 0; i < k; ++i)
                 for (int t = 0; t < j; ++t) p.rhs.connect({zi[i], 1 + t}, {ct[t], 1 + i});
             for (int i = 0; i < k; ++i) p.rhs.inputs.push_back({zi[i], 0});
             for (int t = 0; t < j; ++t) p.rhs.outputs.push_back({ct[t], 0});
             return p;
         }});

    put({"WW", RuleClass::White, "fan-out straight into a collector is the number gate 2", true,
         true, 0, [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             int w = p.lhs.add_w(2);
             int cw = p.lhs.add_cow(2);
             p.lhs.connect({w, 1}, {cw, 1});
             p.lhs.connect({w, 2}, {cw, 2});
             p.lhs.inputs = {{w, 0}};
             p.lhs.outputs = {{cw, 0}};
             int g = p.rhs.add_numgate(GaussianRational(2));
             p.rhs.inputs = {{g, 0}};
             p.rhs.outputs = {{g, 1}};
             return p;
         }});

    put({"Bs0", RuleClass::White, "zero state copies through a W fan-out", true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 3));
             return b;
         },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             int ns = p.lhs.add_numstate(GaussianRational(0));
             int w = p.lhs.add_w(n);
             p.lhs.connect({ns, 0}, {w, 0});
             for (int i = 0; i < n; ++i) p.lhs.outputs.push_back({w, 1 + i});
             for (int i = 0; i < n; ++i)
                 p.rhs.outputs.push_back({p.rhs.add_numstate(GaussianRational(0)), 0});
             return p;
         }});

    put({"TA", RuleClass::White, "copy, negate one branch, collect: a rank-one disconnect", true,
         false, 0, [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             int z = p.lhs.add_z(1, 2, GaussianRational(1));
             int x = p.lhs.add_x(1, 1, 1);
             int cw = p.lhs.add_cow(2);
             p.lhs.connect({z, 1}, {cw, 1});
             p.lhs.connect({z, 2}, {x, 0});
             p.lhs.connect({x, 1}, {cw, 2});
             p.lhs.inputs = {{z, 0}};
             p.lhs.outputs = {{cw, 0}};
             int xs = p.rhs.add_x(0, 1, 1);
             int ze = p.rhs.add_z(1, 0, GaussianRational(1));
             p.rhs.outputs = {{xs, 0}};
             p.rhs.inputs = {{ze, 0}};
             add_scalar_inv_sqrt2(p.rhs);
             return p;
         }});

    // Gray rules.

    put({"K1", RuleClass::Gray, "NOT pushes through a Z spider, inverting its parameter", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 0, 2));
             b.params.push_back(rand_param_nz(rng));
             return b;
         },
         [](const Binding& b) {
             int m = (int)b.nums[0];
             const GaussianRational& c = b.params[0];
             RulePair p;
             int z = p.lhs.add_z(m, 1, c);
             int x = p.lhs.add_x(1, 1, 1);
             p.lhs.connect({z, m}, {x, 0});
             for (int i = 0; i < m; ++i) p.lhs.inputs.push_back({z, i});
             p.lhs.outputs = {{x, 1}};
             add_scalar(p.rhs, c);
             int z2 = p.rhs.add_z(m, 1, GaussianRational(1) / c);
             for (int i = 0; i < m; ++i) {
                 int xi = p.rhs.add_x(1, 1, 1);
                 p.rhs.inputs.push_back({xi, 0});
                 p.rhs.connect({xi, 1}, {z2, i});
             }
             p.rhs.outputs = {{z2, m}};
             return p;
         }});

    put({"K2", RuleClass::Gray, "NOT conjugation inverts a number gate up to its scalar", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.params.push_back(rand_param_nz(rng));
             return b;
         },
         [](const Binding& b) {
             const GaussianRational& a = b.params[0];
             RulePair p;
             int xa = p.lhs.add_x(1, 1, 1);
             int g = p.lhs.add_numgate(a);
             int xb = p.lhs.add_x(1, 1, 1);
             p.lhs.connect({xa, 1}, {g, 0});
             p.lhs.connect({g, 1}, {xb, 0});
             p.lhs.inputs = {{xa, 0}};
             p.lhs.outputs = {{xb, 1}};
             add_scalar(p.rhs, a);
             int g2 = p.rhs.add_numgate(GaussianRational(1) / a);
             p.rhs.inputs = {{g2, 0}};
             p.rhs.outputs = {{g2, 1}};
             return p;
         }});

    put({"H", RuleClass::Gray, "Hadamard is an involution", true, false, 0,
         [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             int h1 = p.lhs.add_h();
             int h2 = p.lhs.add_h();
             p.lhs.connect({h1, 1}, {h2, 0});
             p.lhs.inputs = {{h1, 0}};
             p.lhs.outputs = {{h2, 1}};
             int id = p.rhs.add_identity();
             p.rhs.inputs = {{id, 0}};
             p.rhs.outputs = {{id, 1}};
             return p;
         }});

    put({"B2", RuleClass::Gray, "Z copy and X merge form a scaled bialgebra", true, false, 0,
         [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             int za = p.lhs.add_z(1, 2, GaussianRational(1));
             int zb = p.lhs.add_z(1, 2, GaussianRational(1));
             int xc = p.lhs.add_x(2, 1, 0);
             int xd = p.lhs.add_x(2, 1, 0);
             p.lhs.connect({za, 1}, {xc, 0});
             p.lhs.connect({za, 2}, {xd, 0});
             p.lhs.connect({zb, 1}, {xc, 1});
             p.lhs.connect({zb, 2}, {xd, 1});
             p.lhs.inputs = {{za, 0}, {zb, 0}};
             p.lhs.outputs = {{xc, 2}, {xd, 2}};
             int x = p.rhs.add_x(2, 1, 0);
             int z = p.rhs.add_z(1, 2, GaussianRational(1));
             p.rhs.connect({x, 2}, {z, 0});
             p.rhs.inputs = {{x, 0}, {x, 1}};
             p.rhs.outputs = {{z, 1}, {z, 2}};
             add_scalar_inv_sqrt2(p.rhs);
             return p;
         }});

    put({"Bs1", RuleClass::Gray, "parity-1 effect on one W leg disconnects the fan-out", true,
         false, 0, [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             int w = p.lhs.add_w(2);
             int xe = p.lhs.add_x(1, 0, 1);
             p.lhs.connect({w, 2}, {xe, 0});
             p.lhs.inputs = {{w, 0}};
             p.lhs.outputs = {{w, 1}};
             int zs = p.rhs.add_z(0, 1, GaussianRational(0));
             int xe2 = p.rhs.add_x(1, 0, 1);
             p.rhs.outputs = {{zs, 0}};
             p.rhs.inputs = {{xe2, 0}};
             return p;
         }});

    put({"HD", RuleClass::Gray, "X spider is the Hadamard conjugate of a signed Z spider", true,
         false, 0,
         [](RNG& rng) {
             Binding b;
             do {
                 b.nums = {rand_between(rng, 0, 2), rand_between(rng, 0, 2)};
             } while (b.nums[0] + b.nums[1] == 0);
             b.nums.push_back(rand_between(rng, 0, 1));
             return b;
         },
         [](const Binding& b) {
             int m = (int)b.nums[0], n = (int)b.nums[1], k = (int)b.nums[2];
             RulePair p;
             int x = p.lhs.add_x(m, n, k);
             for (int i = 0; i < m; ++i) p.lhs.inputs.push_back({x, i});
             for (int i = 0; i < n; ++i) p.lhs.outputs.push_back({x, m + i});
             int z = p.rhs.add_z(m, n, GaussianRational(k ? -1 : 1));
             for (int i = 0; i < m; ++i) {
                 int hi = p.rhs.add_h();
                 p.rhs.inputs.push_back({hi, 0});
                 p.rhs.connect({hi, 1}, {z, i});
             }
             for (int i = 0; i < n; ++i) {
                 int ho = p.rhs.add_h();
                 p.rhs.connect({z, m + i}, {ho, 0});
                 p.rhs.outputs.push_back({ho, 1});
             }
             return p;
         }});

    // Structural entries.

    put({"Sym", RuleClass::Structural, "symmetric legs of one spider permute freely", true, true,
         0,
         [](RNG& rng) {
             Binding b;
             b.nums = {rand_between(rng, 0, 1), rand_between(rng, 2, 4)};
             b.params.push_back(rand_param(rng));
             return b;
         },
         [](const Binding& b) {
             bool wv = b.nums[0] != 0;
             int n = (int)b.nums[1];
             RulePair p;
             auto build = [&](Diagram& d, bool rotate) {
                 int v = wv ? d.add_w(n) : d.add_z(1, n, b.params[0]);
                 d.inputs = {{v, 0}};
                 for (int i = 0; i < n; ++i) {
                     int leg = rotate ? 1 + (i + 1) % n : 1 + i;
                     d.outputs.push_back({v, leg});
                 }
             };
             build(p.lhs, false);
             build(p.rhs, true);
             return p;
         }});

    put({"Asym", RuleClass::Structural,
         "W designated port is not interchangeable with a fan-out leg", false, false, 0,
         [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             int w = p.lhs.add_w(2);
             p.lhs.inputs = {{w, 0}};
             p.lhs.outputs = {{w, 1}, {w, 2}};
             int w2 = p.rhs.add_w(2);
             p.rhs.inputs = {{w2, 1}};
             p.rhs.outputs = {{w2, 0}, {w2, 2}};
             return p;
         }});

    // Controlled rules.

    put({"CS0", RuleClass::Controlled, "controlled state at control 0 is the all-zeros state",
         true, true, 0, [](RNG& rng) { return sample_coeffs(rng, 3, 1); },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             Diagram phi = pnf_to_diagram(poly_from_params(n, b.params, 0));
             auto rm = merge_into(p.lhs, phi);
             int ns = p.lhs.add_numstate(GaussianRational(0));
             p.lhs.connect({ns, 0}, mapped(rm, phi.inputs[0]));
             for (auto o : phi.outputs) p.lhs.outputs.push_back(mapped(rm, o));
             for (int i = 0; i < n; ++i)
                 p.rhs.outputs.push_back({p.rhs.add_numstate(GaussianRational(0)), 0});
             return p;
         }});

    put({"CScpy", RuleClass::Controlled,
         "a fanned-out control drives one collected state or two merged copies", true, true, 0,
         [](RNG& rng) { return sample_coeffs(rng, 2, 1); },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             Diagram phi = pnf_to_diagram(poly_from_params(n, b.params, 0));
             RulePair p;
             {
                 auto rm = merge_into(p.lhs, phi);
                 int w = p.lhs.add_w(2);
                 int cw = p.lhs.add_cow(2);
                 p.lhs.connect({w, 1}, {cw, 1});
                 p.lhs.connect({w, 2}, {cw, 2});
                 p.lhs.connect({cw, 0}, mapped(rm, phi.inputs[0]));
                 p.lhs.inputs = {{w, 0}};
                 for (auto o : phi.outputs) p.lhs.outputs.push_back(mapped(rm, o));
             }
             {
                 auto r1 = merge_into(p.rhs, phi);
                 auto r2 = merge_into(p.rhs, phi);
                 int w = p.rhs.add_w(2);
                 p.rhs.connect({w, 1}, mapped(r1, phi.inputs[0]));
                 p.rhs.connect({w, 2}, mapped(r2, phi.inputs[0]));
                 p.rhs.inputs = {{w, 0}};
                 for (std::size_t j = 0; j < phi.outputs.size(); ++j) {
                     int m = p.rhs.add_cow(2);
                     p.rhs.connect(mapped(r1, phi.outputs[j]), {m, 1});
                     p.rhs.connect(mapped(r2, phi.outputs[j]), {m, 2});
                     p.rhs.outputs.push_back({m, 0});
                 }
             }
             return p;
         }});

    put({"CM0", RuleClass::Controlled, "controlled box at control 0 is the identity register",
         true, true, 1,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 2));
             b.mats.push_back(rand_cmat(rng, 1 << b.nums[0]));
             return b;
         },
         [](const Binding& b) {
             int t = (int)b.nums[0];
             RulePair p;
             p.lhs.set_matrix("M", b.mats[0]);
             int bx = p.lhs.add_ctrlbox("M");
             int ns = p.lhs.add_numstate(GaussianRational(0));
             p.lhs.connect({ns, 0}, {bx, 2 * t});
             for (int i = 0; i < t; ++i) p.lhs.inputs.push_back({bx, t + i});
             for (int i = 0; i < t; ++i) p.lhs.outputs.push_back({bx, i});
             for (int i = 0; i < t; ++i) {
                 int id = p.rhs.add_identity();
                 p.rhs.inputs.push_back({id, 0});
                 p.rhs.outputs.push_back({id, 1});
             }
             return p;
         }});

    put({"CMcpy", RuleClass::Controlled,
         "a fanned-out control drives one collected box or two chained copies", true, true, 1,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 2));
             b.mats.push_back(rand_cmat(rng, 1 << b.nums[0]));
             return b;
         },
         [](const Binding& b) {
             int t = (int)b.nums[0];
             RulePair p;
             {
                 p.lhs.set_matrix("M", b.mats[0]);
                 int w = p.lhs.add_w(2);
                 int cw = p.lhs.add_cow(2);
                 int bx = p.lhs.add_ctrlbox("M");
                 p.lhs.connect({w, 1}, {cw, 1});
                 p.lhs.connect({w, 2}, {cw, 2});
                 p.lhs.connect({cw, 0}, {bx, 2 * t});
                 for (int i = 0; i < t; ++i) p.lhs.inputs.push_back({bx, t + i});
                 p.lhs.inputs.push_back({w, 0});
                 for (int i = 0; i < t; ++i) p.lhs.outputs.push_back({bx, i});
             }
             {
                 p.rhs.set_matrix("M", b.mats[0]);
                 int w = p.rhs.add_w(2);
                 int b1 = p.rhs.add_ctrlbox("M");
                 int b2 = p.rhs.add_ctrlbox("M");
                 p.rhs.connect({w, 1}, {b1, 2 * t});
                 p.rhs.connect({w, 2}, {b2, 2 * t});
                 for (int i = 0; i < t; ++i) p.rhs.connect({b1, i}, {b2, t + i});
                 for (int i = 0; i < t; ++i) p.rhs.inputs.push_back({b1, t + i});
                 p.rhs.inputs.push_back({w, 0});
                 for (int i = 0; i < t; ++i) p.rhs.outputs.push_back({b2, i});
             }
             return p;
         }});

    put({"CMcom", RuleClass::Controlled,
         "boxes controlled from one fan-out commute along the register", true, true, 2,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 2));
             b.mats.push_back(rand_cmat(rng, 1 << b.nums[0]));
             b.mats.push_back(rand_cmat(rng, 1 << b.nums[0]));
             return b;
         },
         [](const Binding& b) {
             int t = (int)b.nums[0];
             RulePair p;
             auto build = [&](Diagram& d, bool a_first) {
                 d.set_matrix("A", b.mats[0]);
                 d.set_matrix("B", b.mats[1]);
                 int w = d.add_w(2);
                 int ba = d.add_ctrlbox("A");
                 int bb = d.add_ctrlbox("B");
                 d.connect({w, 1}, {ba, 2 * t});
                 d.connect({w, 2}, {bb, 2 * t});
                 int first = a_first ? ba : bb;
                 int second = a_first ? bb : ba;
                 for (int i = 0; i < t; ++i) d.connect({first, i}, {second, t + i});
                 for (int i = 0; i < t; ++i) d.inputs.push_back({first, t + i});
                 d.inputs.push_back({w, 0});
                 for (int i = 0; i < t; ++i) d.outputs.push_back({second, i});
             };
             build(p.lhs, true);
             build(p.rhs, false);
             return p;
         }});

    put({"csq1", RuleClass::Controlled,
         "parity-1 control state turns a controlled box into the bare box", true, false, 1,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 2));
             b.mats.push_back(rand_cmat(rng, 1 << b.nums[0]));
             return b;
         },
         [](const Binding& b) {
             int t = (int)b.nums[0];
             RulePair p;
             p.lhs.set_matrix("M", b.mats[0]);
             int bx = p.lhs.add_ctrlbox("M");
             int xs = p.lhs.add_x(0, 1, 1);
             p.lhs.connect({xs, 0}, {bx, 2 * t});
             for (int i = 0; i < t; ++i) p.lhs.inputs.push_back({bx, t + i});
             for (int i = 0; i < t; ++i) p.lhs.outputs.push_back({bx, i});
             p.rhs.set_matrix("M", b.mats[0]);
             int plain = p.rhs.add_box("M");
             for (int i = 0; i < t; ++i) p.rhs.outputs.push_back({plain, i});
             for (int i = 0; i < t; ++i) p.rhs.inputs.push_back({plain, t + i});
             add_scalar_sqrt2(p.rhs);
             return p;
         }});

    put({"cstate1", RuleClass::Controlled,
         "parity-1 control state turns a controlled state into the bare state", true, false, 0,
         [](RNG& rng) { return sample_coeffs(rng, 3, 1); },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             Diagram phi = pnf_to_diagram(poly_from_params(n, b.params, 0));
             auto rm = merge_into(p.lhs, phi);
             int xs = p.lhs.add_x(0, 1, 1);
             p.lhs.connect({xs, 0}, mapped(rm, phi.inputs[0]));
             for (auto o : phi.outputs) p.lhs.outputs.push_back(mapped(rm, o));
             CMatrix col(1 << n, 1);
             for (unsigned mask = 0; mask < (1u << n); ++mask)
                 col.at((int)mask, 0) = b.params[mask].to_complex();
             p.rhs.set_matrix("psi", col);
             int bx = p.rhs.add_box("psi");
             for (int i = 0; i < n; ++i) p.rhs.outputs.push_back({bx, i});
             add_scalar_sqrt2(p.rhs);
             return p;
         }});

    put({"csqaddid", RuleClass::Controlled,
         "adding the controlled zero map changes nothing", true, true, 1,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 2));
             b.mats.push_back(rand_cmat(rng, 1 << b.nums[0]));
             return b;
         },
         [](const Binding& b) {
             int t = (int)b.nums[0];
             RulePair p;
             p.lhs.set_matrix("M", b.mats[0]);
             int w = p.lhs.add_w(2);
             int bx = p.lhs.add_ctrlbox("M");
             int cap = p.lhs.add_z(1, 0, GaussianRational(0));
             p.lhs.connect({w, 1}, {bx, 2 * t});
             p.lhs.connect({w, 2}, {cap, 0});
             for (int i = 0; i < t; ++i) p.lhs.inputs.push_back({bx, t + i});
             p.lhs.inputs.push_back({w, 0});
             for (int i = 0; i < t; ++i) p.lhs.outputs.push_back({bx, i});
             p.rhs.set_matrix("M", b.mats[0]);
             int b2 = p.rhs.add_ctrlbox("M");
             for (int i = 0; i < t; ++i) p.rhs.inputs.push_back({b2, t + i});
             p.rhs.inputs.push_back({b2, 2 * t});
             for (int i = 0; i < t; ++i) p.rhs.outputs.push_back({b2, i});
             return p;
         }});

    put({"csqinv", RuleClass::Controlled,
         "a controlled box plus its negation cancel to the controlled zero map", true, true, 1,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 2));
             b.mats.push_back(rand_cmat(rng, 1 << b.nums[0]));
             return b;
         },
         [](const Binding& b) {
             int t = (int)b.nums[0];
             RulePair p;
             p.lhs.set_matrix("M", b.mats[0]);
             int w = p.lhs.add_w(2);
             int b1 = p.lhs.add_ctrlbox("M");
             int b2 = p.lhs.add_ctrlbox("M");
             int ng = p.lhs.add_numgate(GaussianRational(-1));
             p.lhs.connect({w, 1}, {b1, 2 * t});
             p.lhs.connect({w, 2}, {ng, 0});
             p.lhs.connect({ng, 1}, {b2, 2 * t});
             for (int i = 0; i < t; ++i) p.lhs.connect({b1, i}, {b2, t + i});
             for (int i = 0; i < t; ++i) p.lhs.inputs.push_back({b1, t + i});
             p.lhs.inputs.push_back({w, 0});
             for (int i = 0; i < t; ++i) p.lhs.outputs.push_back({b2, i});
             int cap = p.rhs.add_z(1, 0, GaussianRational(0));
             for (int i = 0; i < t; ++i) {
                 int id = p.rhs.add_identity();
                 p.rhs.inputs.push_back({id, 0});
                 p.rhs.outputs.push_back({id, 1});
             }
             p.rhs.inputs.push_back({cap, 0});
             return p;
         }});

    put({"and_def", RuleClass::Controlled,
         "AND with one input held high passes the other input through", true, false, 0,
         [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             Diagram gate = and_gate();
             auto rm = merge_into(p.lhs, gate);
             int xs = p.lhs.add_x(0, 1, 1);
             p.lhs.connect({xs, 0}, mapped(rm, gate.inputs[0]));
             p.lhs.inputs = {mapped(rm, gate.inputs[1])};
             p.lhs.outputs = {mapped(rm, gate.outputs[0])};
             int id = p.rhs.add_identity();
             p.rhs.inputs = {{id, 0}};
             p.rhs.outputs = {{id, 1}};
             add_scalar_sqrt2(p.rhs);
             return p;
         }});

    // Derived equations kept as fixtures.

    put({"wid", RuleClass::LemmaFixture, "single-leg fan-out and collector are plain wire", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 0, 1));
             return b;
         },
         [](const Binding& b) {
             RulePair p;
             if (b.nums[0] == 0) {
                 int w = p.lhs.add_w(1);
                 p.lhs.inputs = {{w, 0}};
                 p.lhs.outputs = {{w, 1}};
             } else {
                 int c = p.lhs.add_cow(1);
                 p.lhs.inputs = {{c, 1}};
                 p.lhs.outputs = {{c, 0}};
             }
             int id = p.rhs.add_identity();
             p.rhs.inputs = {{id, 0}};
             p.rhs.outputs = {{id, 1}};
             return p;
         }});

    put({"wont", RuleClass::LemmaFixture, "zero effect on one leg shrinks a W fan-out", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 2, 4));
             return b;
         },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             int w = p.lhs.add_w(n);
             int cap = p.lhs.add_z(1, 0, GaussianRational(0));
             p.lhs.connect({w, n}, {cap, 0});
             p.lhs.inputs = {{w, 0}};
             for (int i = 0; i < n - 1; ++i) p.lhs.outputs.push_back({w, 1 + i});
             int w2 = p.rhs.add_w(n - 1);
             p.rhs.inputs = {{w2, 0}};
             for (int i = 0; i < n - 1; ++i) p.rhs.outputs.push_back({w2, 1 + i});
             return p;
         }});

    put({"inner", RuleClass::LemmaFixture, "number state against a Z effect leaves a scalar",
         true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.params = {rand_param(rng), rand_param(rng)};
             return b;
         },
         [](const Binding& b) {
             RulePair p;
             int ns = p.lhs.add_numstate(b.params[1]);
             int z = p.lhs.add_z(1, 0, b.params[0]);
             p.lhs.connect({ns, 0}, {z, 0});
             p.rhs.add_z(0, 0, b.params[0] * b.params[1]);
             return p;
         }});

    put({"xcpy", RuleClass::LemmaFixture, "NOT copies through a parameter-1 Z spider", true, true,
         0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 3));
             return b;
         },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             int x = p.lhs.add_x(1, 1, 1);
             int z = p.lhs.add_z(1, n, GaussianRational(1));
             p.lhs.connect({x, 1}, {z, 0});
             p.lhs.inputs = {{x, 0}};
             for (int i = 0; i < n; ++i) p.lhs.outputs.push_back({z, 1 + i});
             int z2 = p.rhs.add_z(1, n, GaussianRational(1));
             p.rhs.inputs = {{z2, 0}};
             for (int i = 0; i < n; ++i) {
                 int xi = p.rhs.add_x(1, 1, 1);
                 p.rhs.connect({z2, 1 + i}, {xi, 0});
                 p.rhs.outputs.push_back({xi, 1});
             }
             return p;
         }});

    put({"zerobox", RuleClass::LemmaFixture,
         "parameter-0 Z disconnects into a zero effect and zero states", true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 0, 3));
             return b;
         },
         [](const Binding& b) {
             int m = (int)b.nums[0];
             RulePair p;
             int z = p.lhs.add_z(1, m, GaussianRational(0));
             p.lhs.inputs = {{z, 0}};
             for (int i = 0; i < m; ++i) p.lhs.outputs.push_back({z, 1 + i});
             int cap = p.rhs.add_z(1, 0, GaussianRational(0));
             p.rhs.inputs = {{cap, 0}};
             for (int i = 0; i < m; ++i)
                 p.rhs.outputs.push_back({p.rhs.add_numstate(GaussianRational(0)), 0});
             return p;
         }});

    put({"cp_add", RuleClass::LemmaFixture, "capped W legs sum their effect parameters", true,
         true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 4));
             for (long i = 0; i < b.nums[0]; ++i) b.params.push_back(rand_param(rng));
             return b;
         },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             RulePair p;
             int w = p.lhs.add_w(n);
             GaussianRational sum(0);
             for (int i = 0; i < n; ++i) {
                 int zi = p.lhs.add_z(1, 0, b.params[i]);
                 p.lhs.connect({w, 1 + i}, {zi, 0});
                 sum = sum + b.params[i];
             }
             p.lhs.inputs = {{w, 0}};
             int z = p.rhs.add_z(1, 0, sum);
             p.rhs.inputs = {{z, 0}};
             return p;
         }});

    put({"x_minus_x", RuleClass::LemmaFixture, "a number state and its negation collect to zero",
         true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.params.push_back(rand_param(rng));
             return b;
         },
         [](const Binding& b) {
             RulePair p;
             int na = p.lhs.add_numstate(b.params[0]);
             int nb = p.lhs.add_numstate(GaussianRational(0) - b.params[0]);
             int cw = p.lhs.add_cow(2);
             p.lhs.connect({na, 0}, {cw, 1});
             p.lhs.connect({nb, 0}, {cw, 2});
             p.lhs.outputs = {{cw, 0}};
             p.rhs.outputs = {{p.rhs.add_numstate(GaussianRational(0)), 0}};
             return p;
         }});

    put({"cpk_add", RuleClass::LemmaFixture,
         "fanned-out Z spiders with merged outputs add their parameters", true, true, 0,
         [](RNG& rng) {
             Binding b;
             b.nums.push_back(rand_between(rng, 1, 3));
             b.params = {rand_param(rng), rand_param(rng)};
             return b;
         },
         [](const Binding& b) {
             int k = (int)b.nums[0];
             RulePair p;
             int w = p.lhs.add_w(2);
             int za = p.lhs.add_z(1, k, b.params[0]);
             int zb = p.lhs.add_z(1, k, b.params[1]);
             p.lhs.connect({w, 1}, {za, 0});
             p.lhs.connect({w, 2}, {zb, 0});
             p.lhs.inputs = {{w, 0}};
             for (int j = 0; j < k; ++j) {
                 int cw = p.lhs.add_cow(2);
                 p.lhs.connect({za, 1 + j}, {cw, 1});
                 p.lhs.connect({zb, 1 + j}, {cw, 2});
                 p.lhs.outputs.push_back({cw, 0});
             }
             int z = p.rhs.add_z(1, k, b.params[0] + b.params[1]);
             p.rhs.inputs = {{z, 0}};
             for (int j = 0; j < k; ++j) p.rhs.outputs.push_back({z, 1 + j});
             return p;
         }});

    put({"kill_quad", RuleClass::LemmaFixture,
         "copying into one collector is the zero gate: squares vanish", true, true, 0,
         [](RNG&) { return Binding{}; },
         [](const Binding&) {
             RulePair p;
             int z = p.lhs.add_z(1, 2, GaussianRational(1));
             int cw = p.lhs.add_cow(2);
             p.lhs.connect({z, 1}, {cw, 1});
             p.lhs.connect({z, 2}, {cw, 2});
             p.lhs.inputs = {{z, 0}};
             p.lhs.outputs = {{cw, 0}};
             int g = p.rhs.add_numgate(GaussianRational(0));
             p.rhs.inputs = {{g, 0}};
             p.rhs.outputs = {{g, 1}};
             return p;
         }});

    put({"dbl_dist", RuleClass::LemmaFixture,
         "product of two sums expands to the four cross terms", true, true, 0,
         [](RNG& rng) { return sample_coeffs(rng, 2, 4); },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             std::size_t m = std::size_t{1} << n;
             Diagram dp = pnf_to_diagram(poly_from_params(n, b.params, 0));
             Diagram dq = pnf_to_diagram(poly_from_params(n, b.params, m));
             Diagram dr = pnf_to_diagram(poly_from_params(n, b.params, 2 * m));
             Diagram ds = pnf_to_diagram(poly_from_params(n, b.params, 3 * m));
             RulePair pair;
             pair.lhs = box_times(box_plus(dp, dq), box_plus(dr, ds));
             pair.rhs = box_plus(box_plus(box_times(dp, dr), box_times(dp, ds)),
                                 box_plus(box_times(dq, dr), box_times(dq, ds)));
             return pair;
         }});

    put({"dist_circ", RuleClass::LemmaFixture, "product distributes over a sum of states", true,
         true, 0, [](RNG& rng) { return sample_coeffs(rng, 2, 3); },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             std::size_t m = std::size_t{1} << n;
             Diagram da = pnf_to_diagram(poly_from_params(n, b.params, 0));
             Diagram db = pnf_to_diagram(poly_from_params(n, b.params, m));
             Diagram dc = pnf_to_diagram(poly_from_params(n, b.params, 2 * m));
             RulePair pair;
             pair.lhs = box_times(da, box_plus(db, dc));
             pair.rhs = box_plus(box_times(da, db), box_times(da, dc));
             return pair;
         }});

    put({"0times", RuleClass::LemmaFixture, "multiplying by the zero state absorbs", true, true,
         0, [](RNG& rng) { return sample_coeffs(rng, 2, 1); },
         [](const Binding& b) {
             int n = (int)b.nums[0];
             Diagram da = pnf_to_diagram(poly_from_params(n, b.params, 0));
             Diagram zero = pnf_to_diagram(MultilinearPoly(n));
             RulePair pair;
             pair.lhs = box_times(da, zero);
             pair.rhs = pnf_to_diagram(MultilinearPoly(n));
             return pair;
         }});

    return rules;
}

}  // namespace

const char* rule_class_name(RuleClass c) {
    switch (c) {
        case RuleClass::White: return "white";
        case RuleClass::Gray: return "gray";
        case RuleClass::Structural: return "structural";
        case RuleClass::Controlled: return "controlled";
        case RuleClass::LemmaFixture: return "lemma";
    }
    return "?";
}

const std::vector<RewriteRule>& rule_catalog() {
    static const std::vector<RewriteRule> rules = build_catalog();
    return rules;
}

const RewriteRule* find_rule(const std::string& name) {
    for (const auto& r : rule_catalog())
        if (r.name == name) return &r;
    return nullptr;
}

RulePair instantiate(const RewriteRule& rule, const Binding& b) {
    RulePair p = rule.make(b);
    require_valid(p.lhs);
    require_valid(p.rhs);
    return p;
}

namespace {

// Closes the single input with the parity-1 X state. Used for the kill_quad
// side condition: the open rule holds, and on the one-sector closure both
// sides must be the zero vector.
Diagram close_input_with_one(const Diagram& d) {
    Diagram out = d;
    if (out.inputs.size() != 1) throw std::logic_error("close_input_with_one: arity");
    int xs = out.add_x(0, 1, 1);
    out.connect({xs, 0}, out.inputs[0]);
    out.inputs.clear();
    return out;
}

}  // namespace

SoundnessReport check_soundness(const std::string& name, int trials, double tol,
                                std::uint64_t seed) {
    const RewriteRule* rule = find_rule(name);
    if (!rule) throw std::invalid_argument("unknown rule: " + name);
    SoundnessReport rep;
    rep.rule = name;
    rep.trials = trials;
    RNG rng(seed);
    bool exact_fail = false;
    for (int t = 0; t < trials; ++t) {
        Binding b = rule->sample(rng);
        RulePair p = instantiate(*rule, b);
        auto tl = evaluate<std::complex<double>>(p.lhs);
        auto tr = evaluate<std::complex<double>>(p.rhs);
        if (tl.shape != tr.shape) {
            rep.note = "boundary shape mismatch";
            rep.pass = false;
            return rep;
        }
        for (std::size_t i = 0; i < tl.data.size(); ++i)
            rep.max_dev = std::max(rep.max_dev, std::abs(tl.data[i] - tr.data[i]));
        if (rule->exact_ok && rule->expect_equal) {
            auto el = evaluate<GaussianRational>(p.lhs);
            auto er = evaluate<GaussianRational>(p.rhs);
            ++rep.exact_trials;
            if (!(el.shape == er.shape && el.data == er.data)) exact_fail = true;
        }
    }
    rep.pass = rule->expect_equal ? (rep.max_dev <= tol && !exact_fail) : (rep.max_dev > tol);
    if (exact_fail) rep.note = "exact backend mismatch";
    if (name == "kill_quad" && rep.pass) {
        RulePair p = instantiate(*rule, Binding{});
        auto cl = evaluate<std::complex<double>>(close_input_with_one(p.lhs));
        auto cr = evaluate<std::complex<double>>(close_input_with_one(p.rhs));
        if (max_abs(cl) <= tol && max_abs(cr) <= tol)
            rep.note = "closed one-sector instance vanishes on both sides";
        else {
            rep.pass = false;
            rep.note = "closed one-sector instance is nonzero";
        }
    }
    return rep;
}

}  // namespace zxw
