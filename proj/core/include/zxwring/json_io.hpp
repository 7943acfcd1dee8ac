#pragma once

#include "zxwring/diagram.hpp"
#include "zxwring/matpoly.hpp"

#include <string>

namespace zxw {

// Diagram wire format:
// {
//   "vertices": [{"id": 0, "kind": "Z", "params": [re, im], "w_input": 0}, ...],
//   "edges":    [[[vid, port], [vid, port]], ...],
//   "inputs":   [[vid, port], ...],
//   "outputs":  [[vid, port], ...],
//   "matrices": {"name": [[entry, ...], ...]}   entry = number | [re, im]
// }
// params by kind: Z/numstate/numgate -> [re, im]; X -> [k]; box/ctrlbox -> [name].
// Leg counts are not stored: every generator except W/coW/box/ctrlbox has a
// direction-blind symmetric tensor, so arity is recovered from port references.
std::string diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const std::string& text);

std::string matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const std::string& text);

// MatPoly wire format:
// {
//   "vars":   [{"name": "A", "dim": 2, "entries": rows | "blackbox"}, ...],
//   "coeffs": [{"subset": ["A", "B"], "c": number | [re, im]}, ...]
// }
// Variable order is the list order; subsets name variables, not positions.
std::string matpoly_to_json(const MatPoly& p);
MatPoly matpoly_from_json(const std::string& text);

// {"scalar": [re, im], "factors": [matpoly, ...]}
std::string factorlist_to_json(const FactorList& f);

struct JsonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace zxw
