#pragma once

#include "zxwring/poly.hpp"

namespace zxwbench {

// Deterministic dense polynomial so runs are comparable across builds.
// Coefficients cycle through small nonzero integers.
inline zxw::MultilinearPoly dense_poly(int n, int salt = 0) {
    zxw::MultilinearPoly p(n);
    static const int cycle[] = {1, -2, 3, 2, -1};
    for (unsigned mask = 0; mask < (1u << n); ++mask)
        p.set(mask, zxw::GaussianRational(cycle[(mask + salt) % 5]));
    return p;
}

}  // namespace zxwbench
