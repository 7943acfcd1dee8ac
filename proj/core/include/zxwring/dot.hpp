#pragma once

#include "zxwring/diagram.hpp"

#include <string>

namespace zxw {

// Graphviz rendering: wires are undirected, so this emits `graph` with `--`
// edges. Boundary wires get their own pseudo-nodes (in0.., out0..) and the
// designated W/coW port is marked on its incident edge.
std::string diagram_to_dot(const Diagram& d);

}  // namespace zxw
