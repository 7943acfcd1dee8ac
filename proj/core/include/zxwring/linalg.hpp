#pragma once

#include "zxwring/diagram.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace zxw {

inline CMatrix mat_mul(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    CMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            auto v = a.at(i, k);
            if (v == std::complex<double>{}) continue;
            for (int j = 0; j < b.cols; ++j) r.at(i, j) += v * b.at(k, j);
        }
    return r;
}

inline CMatrix mat_add(const CMatrix& a, const CMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("mat_add: shape mismatch");
    CMatrix r = a;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += b.a[i];
    return r;
}

inline CMatrix mat_scale(const CMatrix& a, std::complex<double> c) {
    CMatrix r = a;
    for (auto& v : r.a) v *= c;
    return r;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix r(a.rows * b.rows, a.cols * b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            for (int k = 0; k < b.rows; ++k)
                for (int l = 0; l < b.cols; ++l)
                    r.at(i * b.rows + k, j * b.cols + l) = a.at(i, j) * b.at(k, l);
    return r;
}

inline double mat_max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        return std::numeric_limits<double>::infinity();
    double m = 0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
    return m;
}

inline bool mat_close(const CMatrix& a, const CMatrix& b, double tol) {
    return mat_max_abs_diff(a, b) <= tol;
}

}  // namespace zxw
