#include "scalekit/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "scalekit/errors.hpp"

namespace scalekit {

int bit_length(const Rational& q) {
    const mpz_class num = abs(q.get_num());
    const mpz_class den = q.get_den();
    const size_t nb = mpz_sizeinbase(num.get_mpz_t(), 2);
    const size_t db = mpz_sizeinbase(den.get_mpz_t(), 2);
    return static_cast<int>(std::max(nb, db));
}

int bit_complexity(const std::vector<Rational>& values) {
    int b = 1;
    for (const Rational& q : values) b = std::max(b, bit_length(q));
    return b;
}

Rational rational_from_string(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw Error("empty rational literal");

    if (s.find('/') != std::string::npos) {
        Rational q;
        if (q.set_str(s, 10) != 0) throw Error("bad rational literal: " + text);
        if (q.get_den() == 0) throw Error("zero denominator: " + text);
        q.canonicalize();
        return q;
    }

    // decimal / scientific form: sign, digits, optional fraction, optional exponent
    size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = (s[pos] == '-');
        ++pos;
    }
    std::string digits;
    long frac_digits = 0;
    long exponent = 0;
    bool seen_digit = false, seen_dot = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            exponent = std::strtol(s.c_str() + pos + 1, nullptr, 10);
            if (s.substr(pos + 1).empty()) throw Error("bad exponent: " + text);
            break;
        } else {
            throw Error("bad rational literal: " + text);
        }
    }
    if (!seen_digit) throw Error("bad rational literal: " + text);

    Integer num(digits.empty() ? "0" : digits, 10);  // explicit base: "0125" is not octal
    if (negative) num = -num;
    long shift = exponent - frac_digits;
    Integer den = 1;
    if (shift >= 0) {
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift));
        num *= scale;
    } else {
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw Error("non-finite value cannot be rationalized");
    Rational q;
    mpq_set_d(q.get_mpq_t(), x);
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace scalekit
