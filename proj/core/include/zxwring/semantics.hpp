#pragma once

#include "zxwring/diagram.hpp"
#include "zxwring/generators.hpp"
#include "zxwring/tensor.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace zxw {

// Boundary wire cap for contraction; override with ZXWRING_MAX_WIRES.
inline int default_wire_cap() {
    if (const char* s = std::getenv("ZXWRING_MAX_WIRES")) {
        int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return 14;
}

struct EvalOptions {
    int max_wires = -1;                      // -1: resolve via default_wire_cap()
    std::size_t max_elems = std::size_t{1} << 24;  // per-intermediate entry budget
};

namespace detail {

template <class S>
struct EvalNode {
    Tensor<S> t;
    std::vector<long> labels;  // one wire label per axis
};

template <class S>
void trace_self_loops(EvalNode<S>& n) {
    for (;;) {
        bool again = false;
        for (std::size_t i = 0; i < n.labels.size() && !again; ++i)
            for (std::size_t j = i + 1; j < n.labels.size() && !again; ++j)
                if (n.labels[i] == n.labels[j]) {
                    n.t = trace_axes(n.t, static_cast<int>(i), static_cast<int>(j));
                    std::vector<long> nl;
                    for (std::size_t a = 0; a < n.labels.size(); ++a)
                        if (a != i && a != j) nl.push_back(n.labels[a]);
                    n.labels = std::move(nl);
                    again = true;
                }
        if (!again) return;
    }
}

template <class S>
void push_node(std::vector<EvalNode<S>>& nodes, Tensor<S> t, std::vector<long> labels) {
    EvalNode<S> n{std::move(t), std::move(labels)};
    trace_self_loops(n);
    nodes.push_back(std::move(n));
}

// Wide W, coW and Z vertices enter the network as chains of rank-3 pieces
// (spider and fan associativity, exact on both backends), so no single vertex
// forces a 2^legs intermediate. X stays whole: its pieces would carry odd
// powers of 1/sqrt(2), which the exact backend cannot represent even when the
// full spider is exact.
template <class S>
void append_vertex(std::vector<EvalNode<S>>& nodes, const Vertex& v, std::vector<long> legs,
                   const std::map<std::string, CMatrix>& mats, long& fresh) {
    const std::size_t k = legs.size();
    bool fan = v.kind == VertexKind::W || v.kind == VertexKind::CoW;
    bool spider = v.kind == VertexKind::Z;
    if (k <= 3 || (!fan && !spider)) {
        push_node(nodes, generator_tensor<S>(v, mats), std::move(legs));
        return;
    }
    if (fan) {
        std::vector<long> rest;
        for (std::size_t p = 0; p < k; ++p)
            if (static_cast<int>(p) != v.w_in) rest.push_back(legs[p]);
        Vertex piece;
        piece.kind = v.kind;
        piece.legs = 3;
        piece.w_in = 0;
        long chain = legs[v.w_in];
        for (std::size_t i = 0; i + 2 < rest.size(); ++i) {
            long f = fresh++;
            push_node(nodes, generator_tensor<S>(piece, mats), {chain, rest[i], f});
            chain = f;
        }
        push_node(nodes, generator_tensor<S>(piece, mats),
                  {chain, rest[rest.size() - 2], rest.back()});
        return;
    }
    // Z chain; the parameter rides on the head piece only.
    Vertex piece;
    piece.kind = VertexKind::Z;
    piece.legs = 3;
    piece.param = v.param;
    long chain = fresh++;
    push_node(nodes, generator_tensor<S>(piece, mats), {legs[0], legs[1], chain});
    piece.param = GaussianRational(1);
    for (std::size_t i = 2; i + 2 < k; ++i) {
        long f = fresh++;
        push_node(nodes, generator_tensor<S>(piece, mats), {chain, legs[i], f});
        chain = f;
    }
    push_node(nodes, generator_tensor<S>(piece, mats), {chain, legs[k - 2], legs[k - 1]});
}

}  // namespace detail

// Contract the full diagram network. Result axes: outputs in boundary order,
// then inputs in boundary order; leftmost boundary wire = most significant bit.
// Flattened row-major, the data is literally the matrix (row = outputs index).
template <class S>
Tensor<S> evaluate(const Diagram& d, EvalOptions opts = {}) {
    require_valid(d);
    int cap = opts.max_wires > 0 ? opts.max_wires : default_wire_cap();
    if (static_cast<int>(d.inputs.size() + d.outputs.size()) > cap)
        throw std::runtime_error("evaluate: boundary wire count " +
                                 std::to_string(d.inputs.size() + d.outputs.size()) +
                                 " exceeds cap " + std::to_string(cap));

    // Assign a label to each edge and each boundary port.
    std::map<PortRef, long> port_label;
    long next = 0;
    for (const auto& [a, b] : d.edges) {
        port_label[a] = next;
        port_label[b] = next;
        ++next;
    }
    std::vector<long> boundary_order;
    for (const auto& r : d.outputs) {
        port_label[r] = next;
        boundary_order.push_back(next++);
    }
    for (const auto& r : d.inputs) {
        port_label[r] = next;
        boundary_order.push_back(next++);
    }

    std::vector<detail::EvalNode<S>> nodes;
    for (const auto& [id, v] : d.verts) {
        std::vector<long> legs;
        legs.reserve(static_cast<std::size_t>(v.legs));
        for (int p = 0; p < v.legs; ++p) legs.push_back(port_label.at({id, p}));
        detail::append_vertex(nodes, v, std::move(legs), d.matrices, next);
    }
    if (nodes.empty()) nodes.push_back({Tensor<S>::scalar(scalar_ops<S>::one()), {}});

    while (nodes.size() > 1) {
        // Greedy: contract the sharing pair with the smallest result rank;
        // scan order breaks ties, keeping evaluation deterministic.
        std::size_t bi = 0, bj = 0;
        int best = -1;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = i + 1; j < nodes.size(); ++j) {
                int shared = 0;
                for (long la : nodes[i].labels)
                    for (long lb : nodes[j].labels)
                        if (la == lb) ++shared;
                if (shared == 0) continue;
                int r = static_cast<int>(nodes[i].labels.size() + nodes[j].labels.size()) -
                        2 * shared;
                if (best < 0 || r < best) {
                    best = r;
                    bi = i;
                    bj = j;
                }
            }
        if (best < 0) {  // disconnected components: outer product front two
            bi = 0;
            bj = 1;
        }
        auto& A = nodes[bi];
        auto& B = nodes[bj];
        std::vector<std::pair<int, int>> axes;
        for (std::size_t a = 0; a < A.labels.size(); ++a)
            for (std::size_t b = 0; b < B.labels.size(); ++b)
                if (A.labels[a] == B.labels[b]) axes.emplace_back(static_cast<int>(a),
                                                                  static_cast<int>(b));
        std::size_t out_rank = A.labels.size() + B.labels.size() - 2 * axes.size();
        if ((std::size_t{1} << out_rank) > opts.max_elems)
            throw std::runtime_error("evaluate: contraction intermediate too large");

        detail::EvalNode<S> merged;
        merged.t = tensordot(A.t, B.t, axes);
        std::vector<char> a_used(A.labels.size(), 0), b_used(B.labels.size(), 0);
        for (auto [a, b] : axes) a_used[a] = 1, b_used[b] = 1;
        for (std::size_t a = 0; a < A.labels.size(); ++a)
            if (!a_used[a]) merged.labels.push_back(A.labels[a]);
        for (std::size_t b = 0; b < B.labels.size(); ++b)
            if (!b_used[b]) merged.labels.push_back(B.labels[b]);
        nodes.erase(nodes.begin() + static_cast<long>(bj));
        nodes.erase(nodes.begin() + static_cast<long>(bi));
        nodes.push_back(std::move(merged));
    }

    // Permute the surviving node's axes into boundary order.
    auto& n = nodes.front();
    if (n.labels.size() != boundary_order.size())
        throw std::logic_error("evaluate: boundary/label mismatch");
    std::vector<int> perm;
    for (long want : boundary_order) {
        auto it = std::find(n.labels.begin(), n.labels.end(), want);
        if (it == n.labels.end()) throw std::logic_error("evaluate: missing boundary label");
        perm.push_back(static_cast<int>(it - n.labels.begin()));
    }
    return permute(n.t, perm);
}

// Matrix view: rows indexed by outputs, cols by inputs, MSB leftmost.
inline CMatrix evaluate_matrix(const Diagram& d, EvalOptions opts = {}) {
    auto t = evaluate<std::complex<double>>(d, opts);
    CMatrix m(1 << d.outputs.size(), 1 << d.inputs.size());
    m.a = t.data;
    return m;
}

}  // namespace zxw
