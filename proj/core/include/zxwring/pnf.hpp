#pragma once

#include "zxwring/diagram.hpp"
#include "zxwring/poly.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zxw {

// Arithmetic diagrams: a single input wire on top, and only Z spiders, W
// spiders, coWs, number boxes, plain wires and swaps below it. These denote
// controlled states [e0 | a], and polynormal form (PNF) is their canonical
// shape: one W fan-out with 2^n legs, one Z spider per variable subset holding
// that monomial's coefficient, and one coW collector per output variable.
bool is_arithmetic(const Diagram& d);

// Build the canonical PNF diagram for p. Legs are ordered by subset value,
// zero coefficients keep their leg, collectors fill in ascending leg order;
// two calls with equal polynomials produce byte-identical diagrams.
Diagram pnf_to_diagram(const MultilinearPoly& p);

// Strict inverse of pnf_to_diagram: recognizes exactly the canonical shape
// (up to vertex ids) and returns its coefficients, or nullopt.
std::optional<MultilinearPoly> read_pnf(const Diagram& d);

// Semantic coefficient extraction: evaluates d over exact scalars and reads
// the controlled-state columns. Throws if d is not arithmetic or its
// zero-control column is not e0.
MultilinearPoly poly_of_diagram(const Diagram& d);

// Ring structure on controlled states sharing an output count: control fanned
// out by W (sum) or Z (product), outputs merged pairwise by coWs.
Diagram box_plus(const Diagram& a, const Diagram& b);
Diagram box_times(const Diagram& a, const Diagram& b);

struct NormalizeOptions {
    // Upper bound on emitted trace steps before giving up.
    long budget = 100000;
    // Called after each absorption step with the step's leading rule tag and
    // the rewritten diagram at that point. Materializing the state costs a
    // diagram build per step, so leave unset outside tests.
    std::function<void(const std::string& rule, const Diagram& state)> observer;
};

struct NormalizeResult {
    Diagram pnf;
    MultilinearPoly poly;
    // Audit trail: each entry names the rule or derived lemma justifying one
    // micro-step (spider fusions, sector kills, collector pushes, collects,
    // final reorder). Only white-class, structural, or white-derived names
    // appear here.
    std::vector<std::string> trace;
};

// Rewrite an arithmetic diagram to its unique PNF. Deterministic: equal
// inputs give byte-identical results. Throws std::invalid_argument with a
// "non-arithmetic input" message naming the offending vertex when d is not a
// proper arithmetic diagram, std::runtime_error when the budget runs out.
NormalizeResult normalize_to_pnf(const Diagram& d, const NormalizeOptions& opt = {});

// Semantic equality of arithmetic diagrams, decided by comparing normal
// forms exactly.
bool diagrams_equal(const Diagram& a, const Diagram& b);

}  // namespace zxw
