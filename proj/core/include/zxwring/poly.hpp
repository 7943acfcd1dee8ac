#pragma once

#include "zxwring/scalar.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace zxw {

// Element of C[x1..xn]/(x1^2, ..., xn^2): a complex coefficient per square-free
// monomial, keyed by variable subset. Bit (n - j) of the mask stands for x_j,
// so x1 is the most significant bit and xn the least; this matches the wire
// order of the diagrams (leftmost output = x1).
struct MultilinearPoly {
    int n_vars = 0;
    std::map<unsigned, GaussianRational> coeffs;  // no explicit zeros

    MultilinearPoly() = default;
    explicit MultilinearPoly(int n) : n_vars(n) {
        if (n < 0 || n > 30) throw std::invalid_argument("MultilinearPoly: bad n_vars");
    }
    static MultilinearPoly constant(int n, GaussianRational c) {
        MultilinearPoly p(n);
        p.set(0, std::move(c));
        return p;
    }
    static MultilinearPoly variable(int n, int j) {  // x_j, 1-based
        if (j < 1 || j > n) throw std::invalid_argument("variable index out of range");
        MultilinearPoly p(n);
        p.set(1u << (n - j), GaussianRational(1));
        return p;
    }

    unsigned n_masks() const { return 1u << n_vars; }
    void set(unsigned mask, GaussianRational c) {
        if (mask >= n_masks()) throw std::invalid_argument("monomial mask out of range");
        if (c.is_zero()) coeffs.erase(mask);
        else coeffs[mask] = std::move(c);
    }
    void add_to(unsigned mask, const GaussianRational& c) { set(mask, get(mask) + c); }
    GaussianRational get(unsigned mask) const {
        auto it = coeffs.find(mask);
        return it == coeffs.end() ? GaussianRational{} : it->second;
    }
    bool is_zero() const { return coeffs.empty(); }

    friend bool operator==(const MultilinearPoly& a, const MultilinearPoly& b) {
        return a.n_vars == b.n_vars && a.coeffs == b.coeffs;
    }
};

MultilinearPoly poly_add(const MultilinearPoly& p, const MultilinearPoly& q);
MultilinearPoly poly_neg(const MultilinearPoly& p);
MultilinearPoly poly_scale(const MultilinearPoly& p, const GaussianRational& c);
// Monomials sharing a variable vanish: coefficient of S sums over disjoint
// splits A ⊎ B = S only.
MultilinearPoly poly_mul(const MultilinearPoly& p, const MultilinearPoly& q);
// Widen to m >= n_vars variables, keeping x1 aligned (new variables append).
MultilinearPoly poly_pad(const MultilinearPoly& p, int m);

struct PolyParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Grammar: sums/differences of products of factors; factor = number ('i'
// suffix for imaginary), variable xJ, or parenthesized expression, optionally
// '^' power. Juxtaposition multiplies. U+2212 is accepted as minus.
// n_vars = -1 infers the variable count from the largest index used.
MultilinearPoly poly_parse(const std::string& text, int n_vars = -1);

// Canonical text: monomials by subset value descending (so "x1 - 3", constant
// last), juxtaposed variables, 12 significant digits. parse(print(p)) == p.
std::string poly_print(const MultilinearPoly& p);

}  // namespace zxw
