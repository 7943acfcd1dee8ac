#pragma once

#include "zxwring/diagram.hpp"
#include "zxwring/poly.hpp"

#include <complex>
#include <string>
#include <vector>

namespace zxw {

struct MatVar {
    std::string name;
    CMatrix M;              // identity placeholder while blackbox is set
    bool blackbox = false;
};

// Multilinear polynomial whose variables stand for d x d matrices. The
// coefficient polynomial reuses MultilinearPoly, so vars[j-1] is x_j and owns
// mask bit (n - j). Canonical instances keep vars sorted by name; that is what
// diagram_to_matpoly returns and what makes normal forms comparable.
struct MatPoly {
    int d = 1;
    std::vector<MatVar> vars;
    MultilinearPoly coeffs;

    int n_vars() const { return static_cast<int>(vars.size()); }
};

// Validates shapes (square d x d matrices, distinct names, coeffs.n_vars ==
// vars.size()) and throws std::invalid_argument otherwise.
MatPoly make_matpoly(int d, std::vector<MatVar> vars, MultilinearPoly coeffs);

// Sum over monomials of coeff * (product of member matrices in ascending
// variable order, x1 leftmost). The empty monomial contributes coeff * I.
// Throws if any variable is still a black box.
CMatrix matpoly_eval(const MatPoly& p);

// Normal-form diagram: the coefficient polynomial's normal form drives one
// controlled box per variable, chained along a shared log2(d)-wire target
// register with the last variable applied first, so each monomial acts as its
// ascending product. Boundary layout matches ControlledMatrix: inputs are the
// targets then the control, outputs are the targets. Requires d a power of two.
Diagram matpoly_to_diagram(const MatPoly& p);

struct MatPolyReadResult {
    MatPoly poly;                    // vars sorted by name
    std::vector<std::string> trace;  // scalar-part rewrite tags + CMcpy / CMcom
};

// Inverse direction: accepts a diagram whose scalar part is any arithmetic
// diagram feeding the controls of a box chain on one target register. Boxes
// may appear in any register order and a name may label several boxes, as
// long as reordering or merging never touches two boxes inside one monomial
// (those moves are exactly the copy and commute laws, which hold only across
// mutually exclusive monomials). Out-of-scope shapes throw
// std::invalid_argument.
MatPolyReadResult diagram_to_matpoly(const Diagram& d);

// Scalar factoring: p == scalar * product(factors), factors over pairwise
// disjoint variable sets, each kept in the full n-variable mask space. A
// factor with a nonzero constant term is scaled to constant term 1; a factor
// with zero constant term gets leading coefficient 1 (highest monomial in
// mask order). Irreducible inputs come back as a single factor.
struct PolyFactors {
    GaussianRational scalar{1};
    std::vector<MultilinearPoly> factors;
};

PolyFactors factor_disjoint(const MultilinearPoly& p);

// Matrix-level factoring result; factor variable lists are reduced to each
// factor's support, keeping the original order.
struct FactorList {
    std::complex<double> scalar{1.0, 0.0};
    std::vector<MatPoly> factors;
};

FactorList matpoly_factor(const MatPoly& p);

// Product of factors over disjoint variable sets, times the scalar; result
// variables are the union, sorted by name. Factors sharing a variable name
// are rejected.
MatPoly matpoly_expand(const FactorList& f);

}  // namespace zxw
