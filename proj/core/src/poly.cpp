#include "zxwring/poly.hpp"

#include "zxwring/format.hpp"

#include <cctype>
#include <sstream>

namespace zxw {

MultilinearPoly poly_add(const MultilinearPoly& p, const MultilinearPoly& q) {
    if (p.n_vars != q.n_vars) throw std::invalid_argument("poly_add: n_vars mismatch");
    MultilinearPoly r = p;
    for (const auto& [m, c] : q.coeffs) r.add_to(m, c);
    return r;
}

MultilinearPoly poly_neg(const MultilinearPoly& p) {
    MultilinearPoly r(p.n_vars);
    for (const auto& [m, c] : p.coeffs) r.coeffs[m] = -c;
    return r;
}

MultilinearPoly poly_scale(const MultilinearPoly& p, const GaussianRational& c) {
    MultilinearPoly r(p.n_vars);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : p.coeffs) r.coeffs[m] = v * c;
    return r;
}

MultilinearPoly poly_mul(const MultilinearPoly& p, const MultilinearPoly& q) {
    if (p.n_vars != q.n_vars) throw std::invalid_argument("poly_mul: n_vars mismatch");
    MultilinearPoly r(p.n_vars);
    for (const auto& [ma, ca] : p.coeffs)
        for (const auto& [mb, cb] : q.coeffs) {
            if (ma & mb) continue;  // repeated variable: the square is 0
            r.add_to(ma | mb, ca * cb);
        }
    return r;
}

MultilinearPoly poly_pad(const MultilinearPoly& p, int m) {
    if (m < p.n_vars) throw std::invalid_argument("poly_pad: cannot shrink");
    MultilinearPoly r(m);
    int shift = m - p.n_vars;  // old x1..xn keep their names; new vars become low bits
    for (const auto& [mask, c] : p.coeffs) r.coeffs[mask << shift] = c;
    return r;
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t i = 0;
    int n_vars;

    Parser(const std::string& text, int n) : s(text), n_vars(n) {}

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "polynomial syntax error at position " << i << ": " << msg;
        throw PolyParseError(os.str());
    }

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    // '-' or the three-byte U+2212
    bool eat_minus() {
        skip_ws();
        if (i < s.size() && s[i] == '-') {
            ++i;
            return true;
        }
        if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
            static_cast<unsigned char>(s[i + 1]) == 0x88 &&
            static_cast<unsigned char>(s[i + 2]) == 0x92) {
            i += 3;
            return true;
        }
        return false;
    }

    bool starts_factor() {
        skip_ws();
        if (i >= s.size()) return false;
        char c = s[i];
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == 'i' || c == '(' ||
               c == '.';
    }

    long parse_uint(const char* what) {
        skip_ws();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail(what);
        long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + (s[i] - '0');
            if (v > 1000000) fail("number too large");
            ++i;
        }
        return v;
    }

    // Exact decimal (optionally scientific) literal as a rational.
    Rat parse_decimal() {
        BigInt mant = 0;
        long frac_digits = 0;
        bool any = false;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            mant = mant * 10 + (s[i] - '0');
            any = true;
            ++i;
        }
        if (i < s.size() && s[i] == '.') {
            ++i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                mant = mant * 10 + (s[i] - '0');
                ++frac_digits;
                any = true;
                ++i;
            }
        }
        if (!any) fail("expected a number");
        long exp10 = 0;
        if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
            std::size_t save = i++;
            int sign = 1;
            if (i < s.size() && (s[i] == '+' || s[i] == '-')) sign = s[i++] == '-' ? -1 : 1;
            if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                exp10 = sign * parse_uint("exponent");
            } else {
                i = save;  // the 'e' was not an exponent after all
            }
        }
        long net = exp10 - frac_digits;
        BigInt num = mant, den = 1;
        for (long k = 0; k < net; ++k) num *= 10;
        for (long k = 0; k < -net; ++k) den *= 10;
        return Rat(num, den);
    }

    MultilinearPoly constant(GaussianRational c) {
        return MultilinearPoly::constant(n_vars, std::move(c));
    }

    MultilinearPoly parse_factor() {
        skip_ws();
        if (i >= s.size()) fail("expected a factor");
        MultilinearPoly base(n_vars);
        if (s[i] == '(') {
            ++i;
            base = parse_expr();
            if (!eat(')')) fail("expected ')'");
        } else if (s[i] == 'x') {
            ++i;
            long j = parse_uint("variable index after 'x'");
            if (j < 1 || j > n_vars) {
                std::ostringstream os;
                os << "variable index x" << j << " exceeds n_vars=" << n_vars;
                fail(os.str());
            }
            base = MultilinearPoly::variable(n_vars, static_cast<int>(j));
        } else if (s[i] == 'i' ) {
            ++i;
            base = constant(GaussianRational::i());
        } else {
            Rat v = parse_decimal();
            if (i < s.size() && s[i] == 'i') {
                ++i;
                base = constant(GaussianRational(Rat(0), v));
            } else {
                base = constant(GaussianRational(v));
            }
        }
        if (eat('^')) {
            long e = parse_uint("exponent after '^'");
            MultilinearPoly acc = constant(GaussianRational(1));
            for (long k = 0; k < e; ++k) acc = poly_mul(acc, base);
            base = std::move(acc);
        }
        return base;
    }

    MultilinearPoly parse_term() {
        MultilinearPoly acc = parse_factor();
        for (;;) {
            if (eat('*')) {
                acc = poly_mul(acc, parse_factor());
            } else if (starts_factor()) {
                acc = poly_mul(acc, parse_factor());  // juxtaposition
            } else {
                return acc;
            }
        }
    }

    MultilinearPoly parse_expr() {
        MultilinearPoly acc(n_vars);
        bool neg = false;
        if (eat_minus()) neg = true;
        else eat('+');
        MultilinearPoly t = parse_term();
        acc = neg ? poly_neg(t) : t;
        for (;;) {
            if (eat_minus()) {
                acc = poly_add(acc, poly_neg(parse_term()));
            } else if (eat('+')) {
                acc = poly_add(acc, parse_term());
            } else {
                return acc;
            }
        }
    }
};

int scan_max_var(const std::string& s) {
    int best = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == 'x' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
            int v = 0;
            std::size_t j = i + 1;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])) && v <= 1000000)
                v = v * 10 + (s[j++] - '0');
            best = std::max(best, v);
        }
    }
    return best;
}

}  // namespace

MultilinearPoly poly_parse(const std::string& text, int n_vars) {
    int seen = scan_max_var(text);
    int n = n_vars < 0 ? seen : n_vars;
    Parser p(text, n);
    MultilinearPoly r = p.parse_expr();
    p.skip_ws();
    if (p.i != text.size()) p.fail("unexpected trailing input");
    return r;
}

std::string poly_print(const MultilinearPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest monomial first, constant term last.
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
        unsigned mask = it->first;
        std::complex<double> z = it->second.to_complex();
        std::string vars;
        for (int j = 1; j <= p.n_vars; ++j)
            if (mask & (1u << (p.n_vars - j))) vars += "x" + std::to_string(j);

        std::string piece;
        if (vars.empty()) {
            if (z.imag() == 0.0) piece = fmt_double(z.real());
            else if (z.real() == 0.0)
                piece = z.imag() == 1.0 ? "i" : z.imag() == -1.0 ? "-i" : fmt_double(z.imag()) + "i";
            else
                piece = "(" + fmt_complex(z) + ")";
        } else if (z == std::complex<double>(1.0, 0.0)) {
            piece = vars;
        } else if (z == std::complex<double>(-1.0, 0.0)) {
            piece = "-" + vars;
        } else if (z.imag() == 0.0) {
            piece = fmt_double(z.real()) + vars;
        } else if (z.real() == 0.0) {
            piece = (z.imag() == 1.0 ? "i" : z.imag() == -1.0 ? "-i" : fmt_double(z.imag()) + "i") +
                    vars;
        } else {
            piece = "(" + fmt_complex(z) + ")" + vars;
        }

        if (first) {
            os << piece;
            first = false;
        } else if (!piece.empty() && piece[0] == '-') {
            os << " - " << piece.substr(1);
        } else {
            os << " + " << piece;
        }
    }
    return os.str();
}

}  // namespace zxw
