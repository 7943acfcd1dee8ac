#include "zxwring/dot.hpp"

#include "zxwring/format.hpp"

#include <sstream>

namespace zxw {

namespace {

std::string vertex_label(const Vertex& v) {
    switch (v.kind) {
        case VertexKind::Z: return "Z(" + fmt_complex(v.param.to_complex()) + ")";
        case VertexKind::X: return "X(" + std::to_string(v.k) + ")";
        case VertexKind::W: return "W";
        case VertexKind::CoW: return "coW";
        case VertexKind::H: return "H";
        case VertexKind::Identity: return "id";
        case VertexKind::Swap: return "swap";
        case VertexKind::Cup: return "cup";
        case VertexKind::Cap: return "cap";
        case VertexKind::NumState: return "numstate(" + fmt_complex(v.param.to_complex()) + ")";
        case VertexKind::NumGate: return "numgate(" + fmt_complex(v.param.to_complex()) + ")";
        case VertexKind::Box: return "[" + v.name + "]";
        case VertexKind::CtrlBox: return "ctrl[" + v.name + "]";
    }
    return "?";
}

const char* vertex_style(const Vertex& v) {
    switch (v.kind) {
        case VertexKind::Z:
        case VertexKind::NumState:
        case VertexKind::NumGate:
            return "shape=circle, style=filled, fillcolor=white";
        case VertexKind::X: return "shape=circle, style=filled, fillcolor=gray80";
        case VertexKind::W:
        case VertexKind::CoW: return "shape=triangle, style=filled, fillcolor=black, fontcolor=white";
        case VertexKind::H: return "shape=square, style=filled, fillcolor=yellow";
        case VertexKind::Box:
        case VertexKind::CtrlBox: return "shape=box";
        default: return "shape=point";
    }
}

bool designated(const Diagram& d, const PortRef& r) {
    const Vertex& v = d.vertex(r.v);
    return (v.kind == VertexKind::W || v.kind == VertexKind::CoW) && r.p == v.w_in;
}

}  // namespace

std::string diagram_to_dot(const Diagram& d) {
    std::ostringstream os;
    os << "graph zxw {\n  rankdir=TB;\n";
    for (const auto& [id, v] : d.verts)
        os << "  v" << id << " [label=\"" << vertex_label(v) << "\", " << vertex_style(v)
           << "];\n";
    for (std::size_t i = 0; i < d.inputs.size(); ++i)
        os << "  in" << i << " [label=\"in" << i << "\", shape=none];\n";
    for (std::size_t i = 0; i < d.outputs.size(); ++i)
        os << "  out" << i << " [label=\"out" << i << "\", shape=none];\n";

    auto port_mark = [&](const PortRef& a, const PortRef& b) -> std::string {
        std::string m;
        if (designated(d, a) || designated(d, b)) m = " [label=\"w_in\"]";
        return m;
    };
    for (const auto& [a, b] : d.edges)
        os << "  v" << a.v << " -- v" << b.v << port_mark(a, b) << ";\n";
    for (std::size_t i = 0; i < d.inputs.size(); ++i)
        os << "  in" << i << " -- v" << d.inputs[i].v << port_mark(d.inputs[i], d.inputs[i])
           << ";\n";
    for (std::size_t i = 0; i < d.outputs.size(); ++i)
        os << "  v" << d.outputs[i].v << " -- out" << i
           << port_mark(d.outputs[i], d.outputs[i]) << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace zxw
