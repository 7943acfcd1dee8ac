#pragma once

#include "zxwring/diagram.hpp"
#include "zxwring/tensor.hpp"

#include <bit>
#include <map>
#include <stdexcept>
#include <string>

namespace zxw {

template <class S>
S scalar_from_complex(std::complex<double> z);
template <>
inline std::complex<double> scalar_from_complex(std::complex<double> z) { return z; }
template <>
inline GaussianRational scalar_from_complex(std::complex<double> z) {
    return GaussianRational::from(z);
}

// Tensor of a single generator, axes in vertex port order. Conventions that
// everything downstream leans on:
//   * Z-family tensors are fully symmetric (all-zeros entry 1, all-ones entry c),
//     so the in/out split of a Z vertex never matters.
//   * X is the Hadamard conjugate of Z(.,.,(-1)^k); its entries depend only on
//     total index parity, so it is symmetric too. X(1,1,1) is exactly NOT.
//   * W/CoW share one tensor: 1 at the all-zeros index and at each index with
//     exactly two ones, one of which sits on the designated port.
template <class S>
Tensor<S> generator_tensor(const Vertex& v, const std::map<std::string, CMatrix>& mats) {
    using ops = scalar_ops<S>;
    std::vector<int> shape(static_cast<std::size_t>(v.legs), 2);

    switch (v.kind) {
        case VertexKind::Z:
        case VertexKind::NumState:
        case VertexKind::NumGate: {
            Tensor<S> t(shape);
            S c = ops::from_param(v.param);
            if (v.legs == 0) {
                t.data[0] = ops::one() + c;
                return t;
            }
            t.data.front() = ops::one();
            t.data.back() = c;
            return t;
        }
        case VertexKind::X: {
            Tensor<S> t(shape);
            S unit = ops::inv_sqrt2_pow(v.legs);
            for (std::size_t f = 0; f < t.data.size(); ++f) {
                int parity = (v.k + std::popcount(f)) & 1;
                if (parity == 0) t.data[f] = unit + unit;
            }
            return t;
        }
        case VertexKind::W:
        case VertexKind::CoW: {
            Tensor<S> t(shape);
            t.data.front() = ops::one();
            for (int j = 0; j < v.legs; ++j) {
                if (j == v.w_in) continue;
                std::size_t f = (std::size_t{1} << (v.legs - 1 - v.w_in)) |
                                (std::size_t{1} << (v.legs - 1 - j));
                t.data[f] = ops::one();
            }
            return t;
        }
        case VertexKind::H: {
            Tensor<S> t(shape);
            S unit = ops::inv_sqrt2_pow(1);
            t.at({0, 0}) = unit;
            t.at({0, 1}) = unit;
            t.at({1, 0}) = unit;
            t.at({1, 1}) = ops::zero() - unit;
            return t;
        }
        case VertexKind::Identity:
        case VertexKind::Cup:
        case VertexKind::Cap: {
            Tensor<S> t(shape);
            t.at({0, 0}) = ops::one();
            t.at({1, 1}) = ops::one();
            return t;
        }
        case VertexKind::Swap: {
            Tensor<S> t(shape);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) t.at({a, b, b, a}) = ops::one();
            return t;
        }
        case VertexKind::Box: {
            auto it = mats.find(v.name);
            if (it == mats.end()) throw std::invalid_argument("box: unregistered matrix " + v.name);
            const CMatrix& m = it->second;
            Tensor<S> t(shape);
            if (t.data.size() != m.a.size())
                throw std::invalid_argument("box: leg count does not match matrix " + v.name);
            for (std::size_t f = 0; f < m.a.size(); ++f)
                t.data[f] = scalar_from_complex<S>(m.a[f]);
            return t;
        }
        case VertexKind::CtrlBox: {
            auto it = mats.find(v.name);
            if (it == mats.end())
                throw std::invalid_argument("ctrlbox: unregistered matrix " + v.name);
            const CMatrix& m = it->second;
            int n = m.rows;
            Tensor<S> t(shape);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    std::size_t base = (static_cast<std::size_t>(r) * n + c) * 2;
                    if (r == c) t.data[base] = ops::one();
                    t.data[base + 1] = scalar_from_complex<S>(m.at(r, c));
                }
            return t;
        }
    }
    throw std::invalid_argument("generator_tensor: unknown kind");
}

}  // namespace zxw
