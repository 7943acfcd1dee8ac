#pragma once

#include "zxwring/scalar.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace zxw {

enum class VertexKind {
    Z,         // spider with parameter c; any number of legs
    X,         // parity spider with k in {0,1}
    W,         // one designated input, k symmetric output legs
    CoW,       // transpose: one designated output, k symmetric input legs
    H,
    Identity,  // plain wire as a vertex (bare boundary wires need one)
    Swap,
    Cup,
    Cap,
    NumState,  // [1, a]^T, sugar for Z(0,1,a)
    NumGate,   // diag(1, a), sugar for Z(1,1,a)
    Box,       // named matrix
    CtrlBox,   // named matrix M as [I | M] with a control port
};

const char* kind_name(VertexKind k);

struct PortRef {
    int v = -1;
    int p = -1;
    friend bool operator==(const PortRef& a, const PortRef& b) { return a.v == b.v && a.p == b.p; }
    friend bool operator<(const PortRef& a, const PortRef& b) {
        return a.v != b.v ? a.v < b.v : a.p < b.p;
    }
};

struct Vertex {
    VertexKind kind = VertexKind::Identity;
    int legs = 0;
    GaussianRational param{};  // Z / NumState / NumGate coefficient
    int k = 0;                 // X parity bit
    int w_in = -1;             // designated port of W (its input) or CoW (its output)
    std::string name;          // Box / CtrlBox matrix name
};

struct CMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> a;  // row-major

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
    std::complex<double>& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const std::complex<double>& at(int r, int c) const {
        return a[static_cast<std::size_t>(r) * cols + c];
    }
    static CMatrix identity(int n);
    friend bool operator==(const CMatrix& x, const CMatrix& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

// Returns -1 when n is not a power of two.
int log2_exact(int n);

// Open graph of generator vertices. Ports are per-vertex indices 0..legs-1;
// every port sits in exactly one edge or one boundary list. Wire direction is
// never stored: apart from the designated W/CoW port and the Box/CtrlBox port
// layout, every generator's tensor is symmetric, so only connectivity and
// boundary order carry meaning.
struct Diagram {
    std::map<int, Vertex> verts;
    std::vector<std::pair<PortRef, PortRef>> edges;
    std::vector<PortRef> inputs;   // leftmost first = most significant bit
    std::vector<PortRef> outputs;
    std::map<std::string, CMatrix> matrices;

    int next_id = 0;
    std::uint64_t rev = 0;  // bumped on every mutation; used for match staleness

    void touch() { ++rev; }

    int add_vertex(Vertex v);
    // Builder port conventions (semantics cares only for W/CoW/Box/CtrlBox):
    //   Z(m,n): ports 0..m-1 inputs, m..m+n-1 outputs
    //   W: port 0 designated input, 1..fanout outputs
    //   CoW: port 0 designated output, 1..fanin inputs
    //   NumGate/H/Identity: port 0 in, port 1 out
    //   Swap: ports 0,1 outputs; 2,3 inputs; wires (0<-3), (1<-2)
    //   Box: outputs first, then inputs; CtrlBox: targets-out, targets-in, control
    int add_z(int m, int n, GaussianRational c);
    int add_x(int m, int n, int k);
    int add_w(int fanout);
    int add_cow(int fanin);
    int add_h();
    int add_identity();
    int add_swap();
    int add_cup();
    int add_cap();
    int add_numstate(GaussianRational a);
    int add_numgate(GaussianRational a);
    int add_box(const std::string& name);
    int add_ctrlbox(const std::string& name);

    void set_matrix(const std::string& name, CMatrix m);
    void connect(PortRef a, PortRef b);
    void connect(int va, int pa, int vb, int pb) { connect({va, pa}, {vb, pb}); }

    const Vertex& vertex(int id) const;
    Vertex& vertex(int id);

    // Port layout of Box/CtrlBox derived from the named matrix.
    // Box: p output ports then q input ports (rows = 2^p, cols = 2^q).
    // CtrlBox: t targets-out, t targets-in, then the control port (index 2t).
    int box_out_ports(const Vertex& v) const;
    int box_in_ports(const Vertex& v) const;
};

struct Violation {
    std::string message;
};

std::vector<Violation> validate(const Diagram& d);
void require_valid(const Diagram& d);  // throws std::invalid_argument listing violations

// Sequential composition: outputs of d1 feed inputs of d2; result computes
// "d2 after d1". Parallel composition stacks d1 above d2 (d1 wires are the
// more significant block).
Diagram compose_seq(const Diagram& d1, const Diagram& d2);
Diagram compose_par(const Diagram& d1, const Diagram& d2);

// Copies src into dst with fresh ids; returns old-id -> new-id map.
std::map<int, int> merge_into(Diagram& dst, const Diagram& src);

}  // namespace zxw
