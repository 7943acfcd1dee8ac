// Command-line front end. Every verb goes through the public library API;
// nothing here touches diagram internals beyond what the headers export.

#include <CLI11.hpp>
#include <json.hpp>

#include "zxwring/controlled.hpp"
#include "zxwring/dot.hpp"
#include "zxwring/json_io.hpp"
#include "zxwring/matpoly.hpp"
#include "zxwring/pnf.hpp"
#include "zxwring/poly.hpp"
#include "zxwring/rules.hpp"
#include "zxwring/semantics.hpp"

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Primary output goes to stdout unless --out redirects it to a file.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

// 12 significant digits everywhere; "-0" would make output seed-unstable.
std::string fmt(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_complex(std::complex<double> z) {
    if (z.imag() == 0.0) return fmt(z.real());
    std::string im = fmt(std::abs(z.imag())) + "i";
    if (z.real() == 0.0) return (z.imag() < 0 ? "-" : "") + im;
    return fmt(z.real()) + (z.imag() < 0 ? "-" : "+") + im;
}

std::string matrix_text(const zxw::CMatrix& m) {
    std::string s;
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            if (c) s += "  ";
            s += fmt_complex(m.at(r, c));
        }
        s += "\n";
    }
    return s;
}

json matrix_rows_json(const zxw::CMatrix& m) {
    return json::parse(zxw::matrix_to_json(m));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "zxwring: ZXW diagrams with exact tensor semantics, rewriting,\n"
        "polynomial normal forms and controlled-matrix rings.\n"
        "Wire budget for evaluation can be raised via ZXWRING_MAX_WIRES."};
    app.require_subcommand(1);
    app.set_version_flag("--version", "zxwring 0.1.0");
    int rc = 0;

    // ---- eval -----------------------------------------------------------
    struct {
        std::string file, out;
        bool as_json = false;
    } ev;
    auto* c_eval = app.add_subcommand("eval", "Evaluate a diagram file to its matrix");
    c_eval->add_option("file", ev.file, "diagram JSON file")->required();
    c_eval->add_flag("--json", ev.as_json, "machine-readable output");
    c_eval->add_option("--out", ev.out, "write output to a file instead of stdout");
    c_eval->callback([&] {
        zxw::Diagram d = zxw::diagram_from_json(read_file(ev.file));
        zxw::CMatrix m = zxw::evaluate_matrix(d);
        emit(ev.as_json ? zxw::matrix_to_json(m) + "\n" : matrix_text(m), ev.out);
    });

    // ---- check-rules ----------------------------------------------------
    struct {
        int trials = 100;
        double tol = 1e-9;
        std::uint64_t seed = 12345;
        std::string out;
        bool as_json = false;
    } cr;
    auto* c_rules = app.add_subcommand("check-rules",
                                       "Numerically verify every rewrite rule on random bindings");
    c_rules->add_option("--trials", cr.trials, "random bindings per rule")
        ->check(CLI::PositiveNumber);
    c_rules->add_option("--tol", cr.tol, "max allowed deviation");
    c_rules->add_option("--seed", cr.seed, "RNG seed");
    c_rules->add_flag("--json", cr.as_json, "machine-readable output");
    c_rules->add_option("--out", cr.out, "write output to a file instead of stdout");
    c_rules->callback([&] {
        const auto& catalog = zxw::rule_catalog();
        std::vector<zxw::SoundnessReport> reports;
        reports.reserve(catalog.size());
        int failed = 0;
        for (const auto& r : catalog) {
            reports.push_back(zxw::check_soundness(r.name, cr.trials, cr.tol, cr.seed));
            if (!reports.back().pass) ++failed;
        }
        std::string text;
        if (cr.as_json) {
            json out = json::array();
            for (std::size_t i = 0; i < reports.size(); ++i) {
                const auto& r = reports[i];
                out.push_back({{"rule", r.rule},
                               {"class", zxw::rule_class_name(catalog[i].cls)},
                               {"trials", r.trials},
                               {"max_dev", r.max_dev},
                               {"exact_trials", r.exact_trials},
                               {"pass", r.pass},
                               {"note", r.note}});
            }
            text = out.dump(2) + "\n";
        } else {
            for (std::size_t i = 0; i < reports.size(); ++i) {
                const auto& r = reports[i];
                char line[160];
                std::snprintf(line, sizeof line, "%s %-10s %-10s trials=%-4d max_dev=%s",
                              r.pass ? "PASS" : "FAIL", r.rule.c_str(),
                              zxw::rule_class_name(catalog[i].cls), r.trials,
                              fmt(r.max_dev).c_str());
                text += line;
                if (!r.note.empty()) text += "  (" + r.note + ")";
                text += "\n";
            }
            text += std::to_string(reports.size() - failed) + "/" +
                    std::to_string(reports.size()) + " rules sound\n";
        }
        emit(text, cr.out);
        if (failed) rc = 1;
    });

    // ---- normalize ------------------------------------------------------
    struct {
        std::string file, out;
        long budget = 100000;
        bool as_json = false;
    } nm;
    auto* c_norm = app.add_subcommand("normalize",
                                      "Rewrite an arithmetic diagram to polynormal form");
    c_norm->add_option("file", nm.file, "diagram JSON file")->required();
    c_norm->add_option("--budget", nm.budget, "rewrite step budget")->check(CLI::PositiveNumber);
    c_norm->add_flag("--json", nm.as_json, "wrap diagram with poly and step count");
    c_norm->add_option("--out", nm.out, "write output to a file instead of stdout");
    c_norm->callback([&] {
        zxw::Diagram d = zxw::diagram_from_json(read_file(nm.file));
        zxw::NormalizeOptions opts;
        opts.budget = nm.budget;
        zxw::NormalizeResult res = zxw::normalize_to_pnf(d, opts);
        // Default output is itself a diagram file so the verb composes with
        // eval/dot and re-running it is a byte-identical no-op.
        if (nm.as_json) {
            json out = {{"diagram", json::parse(zxw::diagram_to_json(res.pnf))},
                        {"poly", zxw::poly_print(res.poly)},
                        {"steps", res.trace.size()}};
            emit(out.dump(2) + "\n", nm.out);
        } else {
            emit(zxw::diagram_to_json(res.pnf), nm.out);
        }
    });

    // ---- poly2diag ------------------------------------------------------
    struct {
        std::string text, out;
        int vars = -1;
    } pd;
    auto* c_p2d = app.add_subcommand("poly2diag",
                                     "Build the normal-form diagram of a multilinear polynomial");
    c_p2d->add_option("poly", pd.text, "polynomial text, e.g. \"2 x1 x2 - 3\"")->required();
    c_p2d->add_option("--vars", pd.vars, "variable count (default: highest index used)");
    c_p2d->add_option("--out", pd.out, "write output to a file instead of stdout");
    c_p2d->callback([&] {
        zxw::MultilinearPoly p = zxw::poly_parse(pd.text, pd.vars);
        emit(zxw::diagram_to_json(zxw::pnf_to_diagram(p)), pd.out);
    });

    // ---- diag2poly ------------------------------------------------------
    struct {
        std::string file, out;
        long budget = 100000;
        bool as_json = false;
    } dp;
    auto* c_d2p = app.add_subcommand("diag2poly",
                                     "Read the polynomial denoted by an arithmetic diagram");
    c_d2p->add_option("file", dp.file, "diagram JSON file")->required();
    c_d2p->add_option("--budget", dp.budget, "rewrite step budget")->check(CLI::PositiveNumber);
    c_d2p->add_flag("--json", dp.as_json, "machine-readable output");
    c_d2p->add_option("--out", dp.out, "write output to a file instead of stdout");
    c_d2p->callback([&] {
        zxw::Diagram d = zxw::diagram_from_json(read_file(dp.file));
        zxw::NormalizeOptions opts;
        opts.budget = dp.budget;
        zxw::NormalizeResult res = zxw::normalize_to_pnf(d, opts);
        if (dp.as_json) {
            json out = {{"poly", zxw::poly_print(res.poly)}, {"steps", res.trace.size()}};
            emit(out.dump(2) + "\n", dp.out);
        } else {
            emit(zxw::poly_print(res.poly) + "\n", dp.out);
        }
    });

    // ---- ring-op --------------------------------------------------------
    struct {
        std::string op, a, b, out;
        long budget = 100000;
        bool as_json = false;
    } ro;
    auto* c_ring = app.add_subcommand("ring-op",
                                      "Combine two arithmetic diagrams with the ring structure");
    c_ring->add_option("op", ro.op, "add or mul")
        ->required()
        ->check(CLI::IsMember({"add", "mul"}));
    c_ring->add_option("a", ro.a, "left diagram JSON file")->required();
    c_ring->add_option("b", ro.b, "right diagram JSON file")->required();
    c_ring->add_option("--budget", ro.budget, "rewrite step budget")->check(CLI::PositiveNumber);
    c_ring->add_flag("--json", ro.as_json, "machine-readable output");
    c_ring->add_option("--out", ro.out, "write output to a file instead of stdout");
    c_ring->callback([&] {
        zxw::Diagram a = zxw::diagram_from_json(read_file(ro.a));
        zxw::Diagram b = zxw::diagram_from_json(read_file(ro.b));
        zxw::Diagram combined = ro.op == "add" ? zxw::box_plus(a, b) : zxw::box_times(a, b);
        zxw::NormalizeOptions opts;
        opts.budget = ro.budget;
        zxw::NormalizeResult res = zxw::normalize_to_pnf(combined, opts);
        if (ro.as_json) {
            json out = {{"op", ro.op},
                        {"poly", zxw::poly_print(res.poly)},
                        {"diagram", json::parse(zxw::diagram_to_json(res.pnf))},
                        {"steps", res.trace.size()}};
            emit(out.dump(2) + "\n", ro.out);
        } else {
            emit(zxw::poly_print(res.poly) + "\n", ro.out);
        }
    });

    // ---- ctrl -----------------------------------------------------------
    struct {
        std::string file, name = "M", out;
        int controls = 1;
        bool as_json = false;
    } ct;
    auto* c_ctrl = app.add_subcommand("ctrl",
                                      "Build the controlled version of a matrix as a diagram");
    c_ctrl->add_option("file", ct.file, "matrix JSON file (list of rows)")->required();
    c_ctrl->add_option("--name", ct.name, "box label for the matrix");
    c_ctrl->add_option("--controls", ct.controls, "number of control wires")
        ->check(CLI::PositiveNumber);
    c_ctrl->add_flag("--json", ct.as_json, "machine-readable output");
    c_ctrl->add_option("--out", ct.out, "write output to a file instead of stdout");
    c_ctrl->callback([&] {
        zxw::CMatrix m = zxw::matrix_from_json(read_file(ct.file));
        zxw::CtrlResult r = ct.controls == 1 ? zxw::ctrl(m, ct.name)
                                             : zxw::multi_ctrl(m, ct.controls, ct.name);
        if (ct.as_json) {
            json out = {{"matrix", matrix_rows_json(r.matrix)},
                        {"diagram", json::parse(zxw::diagram_to_json(r.diagram))}};
            emit(out.dump(2) + "\n", ct.out);
        } else {
            emit(matrix_text(r.matrix), ct.out);
        }
    });

    // ---- factor ---------------------------------------------------------
    struct {
        std::string input, dot_path, out;
        int vars = -1;
        bool as_json = false;
    } fc;
    auto* c_factor = app.add_subcommand("factor",
                                        "Factor a polynomial over scalars or square matrices");
    c_factor->add_option("input", fc.input,
                         "matrix-polynomial JSON file, or polynomial text")
        ->required();
    c_factor->add_option("--vars", fc.vars, "variable count for polynomial text");
    c_factor->add_option("--dot", fc.dot_path, "also write the normal-form diagram as DOT");
    c_factor->add_flag("--json", fc.as_json, "machine-readable output");
    c_factor->add_option("--out", fc.out, "write output to a file instead of stdout");
    c_factor->callback([&] {
        if (std::filesystem::exists(fc.input)) {
            zxw::MatPoly p = zxw::matpoly_from_json(read_file(fc.input));
            zxw::FactorList fl = zxw::matpoly_factor(p);
            if (!fc.dot_path.empty())
                emit(zxw::diagram_to_dot(zxw::matpoly_to_diagram(p)), fc.dot_path);
            if (fc.as_json) {
                emit(zxw::factorlist_to_json(fl) + "\n", fc.out);
            } else {
                std::string text = "scalar: " + fmt_complex(fl.scalar) + "\n";
                for (const auto& f : fl.factors) {
                    text += "factor [";
                    for (std::size_t i = 0; i < f.vars.size(); ++i) {
                        if (i) text += ", ";
                        text += f.vars[i].name;
                    }
                    text += "]: " + zxw::poly_print(f.coeffs) + "\n";
                }
                emit(text, fc.out);
            }
        } else {
            zxw::MultilinearPoly p = zxw::poly_parse(fc.input, fc.vars);
            zxw::PolyFactors pf = zxw::factor_disjoint(p);
            if (!fc.dot_path.empty())
                emit(zxw::diagram_to_dot(zxw::pnf_to_diagram(p)), fc.dot_path);
            if (fc.as_json) {
                std::complex<double> s = pf.scalar.to_complex();
                json out = {{"scalar", json::array({s.real(), s.imag()})},
                            {"factors", json::array()}};
                for (const auto& f : pf.factors) out["factors"].push_back(zxw::poly_print(f));
                emit(out.dump(2) + "\n", fc.out);
            } else {
                std::string text = "scalar: " + fmt_complex(pf.scalar.to_complex()) + "\n";
                for (const auto& f : pf.factors) text += "factor: " + zxw::poly_print(f) + "\n";
                emit(text, fc.out);
            }
        }
    });

    // ---- dot ------------------------------------------------------------
    struct {
        std::string file, out;
    } dt;
    auto* c_dot = app.add_subcommand("dot", "Render a diagram file as Graphviz DOT");
    c_dot->add_option("file", dt.file, "diagram JSON file")->required();
    c_dot->add_option("--out", dt.out, "write output to a file instead of stdout");
    c_dot->callback([&] { emit(zxw::diagram_to_dot(zxw::diagram_from_json(read_file(dt.file))), dt.out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "zxwring: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
