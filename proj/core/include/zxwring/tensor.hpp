#pragma once

#include "zxwring/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace zxw {

// Dense row-major tensor. All diagram wires carry dimension 2, but the shape
// is kept general so matrices of any size (black boxes) fit the same type.
template <class S>
struct Tensor {
    std::vector<int> shape;
    std::vector<S> data;

    Tensor() : data(1, scalar_ops<S>::zero()) {}
    explicit Tensor(std::vector<int> sh) : shape(std::move(sh)) {
        data.assign(element_count(shape), scalar_ops<S>::zero());
    }
    static Tensor scalar(S v) {
        Tensor t;
        t.data[0] = std::move(v);
        return t;
    }

    static std::size_t element_count(const std::vector<int>& sh) {
        std::size_t n = 1;
        for (int d : sh) {
            if (d < 1) throw std::invalid_argument("Tensor: axis dimension < 1");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    int rank() const { return static_cast<int>(shape.size()); }
    std::size_t size() const { return data.size(); }

    std::vector<std::size_t> strides() const {
        std::vector<std::size_t> st(shape.size(), 1);
        for (int i = rank() - 2; i >= 0; --i)
            st[i] = st[i + 1] * static_cast<std::size_t>(shape[i + 1]);
        return st;
    }

    S& at(const std::vector<int>& idx) { return data[flat(idx)]; }
    const S& at(const std::vector<int>& idx) const { return data[flat(idx)]; }

    std::size_t flat(const std::vector<int>& idx) const {
        if (idx.size() != shape.size()) throw std::invalid_argument("Tensor::at: rank mismatch");
        std::size_t f = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] < 0 || idx[i] >= shape[i]) throw std::out_of_range("Tensor::at: index");
            f = f * static_cast<std::size_t>(shape[i]) + static_cast<std::size_t>(idx[i]);
        }
        return f;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) {
        return a.shape == b.shape && a.data == b.data;
    }
};

// result axis i reads from axis perm[i] of the input
template <class S>
Tensor<S> permute(const Tensor<S>& t, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != t.rank())
        throw std::invalid_argument("permute: rank mismatch");
    std::vector<int> new_shape(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) new_shape[i] = t.shape[perm[i]];
    Tensor<S> out(new_shape);
    if (t.rank() == 0) {
        out.data[0] = t.data[0];
        return out;
    }
    auto in_strides = t.strides();
    std::vector<int> idx(perm.size(), 0);
    for (std::size_t f = 0; f < out.data.size(); ++f) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            src += in_strides[perm[i]] * static_cast<std::size_t>(idx[i]);
        out.data[f] = t.data[src];
        for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
            if (++idx[i] < new_shape[i]) break;
            idx[i] = 0;
        }
    }
    return out;
}

// Contract axis pairs (a in A) with (b in B); remaining axes of A then of B.
template <class S>
Tensor<S> tensordot(const Tensor<S>& A, const Tensor<S>& B,
                    const std::vector<std::pair<int, int>>& axes) {
    std::vector<char> a_used(A.rank(), 0), b_used(B.rank(), 0);
    std::size_t k = 1;
    for (auto [a, b] : axes) {
        if (a < 0 || a >= A.rank() || b < 0 || b >= B.rank())
            throw std::invalid_argument("tensordot: axis out of range");
        if (a_used[a] || b_used[b]) throw std::invalid_argument("tensordot: repeated axis");
        if (A.shape[a] != B.shape[b]) throw std::invalid_argument("tensordot: dim mismatch");
        a_used[a] = b_used[b] = 1;
        k *= static_cast<std::size_t>(A.shape[a]);
    }
    // Move contracted axes last on A, first on B, then do a flat matmul.
    std::vector<int> pa, pb;
    for (int i = 0; i < A.rank(); ++i)
        if (!a_used[i]) pa.push_back(i);
    for (auto [a, b] : axes) pa.push_back(a), (void)b;
    for (auto [a, b] : axes) pb.push_back(b), (void)a;
    for (int i = 0; i < B.rank(); ++i)
        if (!b_used[i]) pb.push_back(i);
    Tensor<S> At = permute(A, pa), Bt = permute(B, pb);

    std::vector<int> out_shape;
    for (int i = 0; i < A.rank(); ++i)
        if (!a_used[i]) out_shape.push_back(A.shape[i]);
    for (int i = 0; i < B.rank(); ++i)
        if (!b_used[i]) out_shape.push_back(B.shape[i]);
    Tensor<S> out(out_shape);

    std::size_t m = At.size() / k, n = Bt.size() / k;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t c = 0; c < k; ++c) {
            const S& av = At.data[i * k + c];
            if (scalar_ops<S>::is_zero(av)) continue;
            for (std::size_t j = 0; j < n; ++j)
                out.data[i * n + j] += av * Bt.data[c * n + j];
        }
    return out;
}

// Trace out one pair of equal-dimension axes of the same tensor (self-loop).
template <class S>
Tensor<S> trace_axes(const Tensor<S>& t, int ax1, int ax2) {
    if (ax1 == ax2 || ax1 < 0 || ax2 < 0 || ax1 >= t.rank() || ax2 >= t.rank())
        throw std::invalid_argument("trace_axes: bad axes");
    if (t.shape[ax1] != t.shape[ax2]) throw std::invalid_argument("trace_axes: dim mismatch");
    if (ax1 > ax2) std::swap(ax1, ax2);
    std::vector<int> out_shape;
    for (int i = 0; i < t.rank(); ++i)
        if (i != ax1 && i != ax2) out_shape.push_back(t.shape[i]);
    Tensor<S> out(out_shape);
    auto st = t.strides();
    int d = t.shape[ax1];
    std::vector<int> idx(out_shape.size(), 0);
    for (std::size_t f = 0; f < out.data.size(); ++f) {
        std::size_t base = 0;
        int pos = 0;
        for (int i = 0; i < t.rank(); ++i) {
            if (i == ax1 || i == ax2) continue;
            base += st[i] * static_cast<std::size_t>(idx[pos++]);
        }
        S acc = scalar_ops<S>::zero();
        for (int c = 0; c < d; ++c)
            acc += t.data[base + (st[ax1] + st[ax2]) * static_cast<std::size_t>(c)];
        out.data[f] = acc;
        for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
            if (++idx[i] < out_shape[i]) break;
            idx[i] = 0;
        }
    }
    return out;
}

template <class S>
Tensor<S> outer(const Tensor<S>& A, const Tensor<S>& B) {
    return tensordot(A, B, {});
}

inline double max_abs(const Tensor<std::complex<double>>& t) {
    double m = 0.0;
    for (const auto& v : t.data) m = std::max(m, std::abs(v));
    return m;
}

// Max-norm comparison, relative to max(1, |A|): soundness checks ask for exact
// equality up to float error, so the tolerance only absorbs rounding.
inline bool approx_equal(const Tensor<std::complex<double>>& a,
                         const Tensor<std::complex<double>>& b, double tol) {
    if (a.shape != b.shape) throw std::invalid_argument("approx_equal: shape mismatch");
    double scale = std::max(1.0, max_abs(a));
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (std::abs(a.data[i] - b.data[i]) > tol * scale) return false;
    return true;
}

inline double max_deviation(const Tensor<std::complex<double>>& a,
                            const Tensor<std::complex<double>>& b) {
    if (a.shape != b.shape) throw std::invalid_argument("max_deviation: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace zxw
