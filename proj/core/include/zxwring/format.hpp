#pragma once

#include <complex>
#include <cstdio>
#include <string>

namespace zxw {

// 12 significant digits, trailing noise trimmed by %g; all CLI and label
// output funnels through here so goldens stay byte-stable.
inline std::string fmt_double(double x) {
    if (x == 0.0) x = 0.0;  // normalize -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string fmt_complex(std::complex<double> z) {
    if (z.imag() == 0.0) return fmt_double(z.real());
    std::string im = fmt_double(z.imag()) + "i";
    if (z.real() == 0.0) return im;
    if (z.imag() > 0) return fmt_double(z.real()) + "+" + im;
    return fmt_double(z.real()) + im;  // the sign rides along with the imag part
}

}  // namespace zxw
