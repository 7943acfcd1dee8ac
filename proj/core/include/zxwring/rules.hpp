#pragma once

#include "zxwring/diagram.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace zxw {

// White rules are the equational core used by the normalizer; gray rules hold
// but are never needed for normalization. Structural entries cover wire
// bookkeeping, Controlled ones involve controlled states or boxes, and
// LemmaFixture entries are derived equations pinned as regression anchors.
enum class RuleClass { White, Gray, Structural, Controlled, LemmaFixture };
const char* rule_class_name(RuleClass c);

// Everything a rule instance is built from. For host matches the nums slot
// doubles as the matcher's note of which vertices/ports it grabbed.
struct Binding {
    std::vector<GaussianRational> params;
    std::vector<long> nums;
    std::vector<CMatrix> mats;
};

struct RulePair {
    Diagram lhs;
    Diagram rhs;
};

struct RewriteRule {
    std::string name;
    RuleClass cls = RuleClass::White;
    std::string summary;
    bool expect_equal = true;  // the one deliberate inequality documents itself
    bool exact_ok = false;     // both sides rational for rational bindings
    int matrix_slots = 0;
    std::function<Binding(std::mt19937_64&)> sample;
    std::function<RulePair(const Binding&)> make;
};

const std::vector<RewriteRule>& rule_catalog();
const RewriteRule* find_rule(const std::string& name);

// make + validation of both sides.
RulePair instantiate(const RewriteRule& rule, const Binding& b);

struct SoundnessReport {
    std::string rule;
    int trials = 0;
    double max_dev = 0.0;
    bool pass = false;
    int exact_trials = 0;  // trials additionally replayed on the exact backend
    std::string note;
};

// Samples `trials` random bindings and compares both sides' tensors. Rules
// flagged exact_ok are replayed under the Gaussian-rational backend and must
// agree bit for bit. For the expect_equal=false entry, pass means the sides
// measurably differ.
SoundnessReport check_soundness(const std::string& name, int trials, double tol,
                                std::uint64_t seed = 12345);

struct Match {
    std::string rule;
    int anchor = -1;  // host vertex id the pattern hangs off
    Binding binding;
    std::uint64_t host_rev = 0;
};

enum class Direction { L2R, R2L };

// Matchers exist for the rules the normalizer and the worked examples need:
// S1, S2, wid, Ept, Add, Pcpy, Aso, BZW (both orientations), kill_quad
// (tolerates 2-leg scalar and unary-collector hops), CMcpy, CMcom, Sym, CS0
// and dist_circ. Other catalog entries are schematic: find_matches returns
// nothing for them. Results are sorted by anchor id.
std::vector<Match> find_matches(const Diagram& d, const std::string& rule);

// Pure rewrite: returns the rewritten copy. Throws if the match was taken on
// a different revision of the diagram, and for rules whose reverse direction
// needs information a match does not carry.
Diagram apply(const Diagram& d, const Match& m, Direction dir = Direction::L2R);

}  // namespace zxw
