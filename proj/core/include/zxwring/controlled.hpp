#pragma once

#include "zxwring/diagram.hpp"
#include "zxwring/pnf.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace zxw {

// State vector hidden behind a control wire: plugging numstate(0) into the
// input gives |0...0>, plugging numstate(1) gives the stored vector.
struct ControlledState {
    int n = 0;        // target wire count
    Diagram diagram;  // 1 input, n outputs, in polynomial normal form
};

// Square matrix M behind a control wire; the diagram's semantics is the
// 2^n x 2^(n+1) block row [I | M]. Ring operations (cm_sum / cm_prod / cm_neg)
// work for any square dimension; the diagram realization exists only when d is
// a power of two.
struct ControlledMatrix {
    int d = 0;
    std::string name;          // box name for single-box forms; empty for composites
    CMatrix M;                 // placeholder entries when blackbox is set
    bool blackbox = false;     // substitute a concrete matrix before trusting numbers
    bool has_diagram = false;  // false when d is not a power of two
    Diagram diagram;           // inputs: n targets then the control; outputs: n targets
};

// ctrl / ctrl_parallel / multi_ctrl return the plain block matrix alongside
// the diagram. Unlike ControlledMatrix, the control here is an ordinary wire:
// first input and first output (most significant position).
struct CtrlResult {
    CMatrix matrix;
    Diagram diagram;
};

ControlledState ctrl_state_of(const std::vector<std::complex<double>>& psi);

ControlledMatrix ctrl_matrix_of(const CMatrix& M, const std::string& name = "M");

// Registers an identity placeholder so wire counts are known; callers bind the
// real matrix later with diagram.set_matrix(name, ...).
ControlledMatrix ctrl_blackbox(const std::string& name, int d);

ControlledMatrix cm_sum(const std::vector<std::pair<std::complex<double>, ControlledMatrix>>& terms);

// Factors are stacked first-to-last along the target register, so the matrix
// field multiplies the list back-to-front: cm_prod({A, B}).M == B.M * A.M.
ControlledMatrix cm_prod(const std::vector<ControlledMatrix>& factors);

ControlledMatrix cm_neg(const ControlledMatrix& cm);

CtrlResult ctrl(const ControlledMatrix& cm);
CtrlResult ctrl(const CMatrix& M, const std::string& name = "M");

CtrlResult ctrl_parallel(const CMatrix& M1, const CMatrix& M2,
                         const std::string& name1 = "M1", const std::string& name2 = "M2");

CtrlResult multi_ctrl(const CMatrix& M, int k, const std::string& name = "M");

// 2-input 1-output diagram computing Boolean AND on basis states.
Diagram and_gate();

}  // namespace zxw
