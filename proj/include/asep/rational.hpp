#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "error.hpp"

namespace asep {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "p/r", an integer, or a finite decimal such as "0.25" or "-1.5e-2".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    require(!s.empty(), ErrorKind::invalid_input, "empty rational");
    auto bad = [&] { fail(ErrorKind::invalid_input, "not an exact rational: '" + s + "'"); };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        auto is_int = [](const std::string& x, bool allow_sign) {
            size_t i = (allow_sign && !x.empty() && (x[0] == '-' || x[0] == '+')) ? 1 : 0;
            if (i >= x.size()) return false;
            for (; i < x.size(); ++i)
                if (x[i] < '0' || x[i] > '9') return false;
            return true;
        };
        if (!is_int(num, true) || !is_int(den, false)) bad();
        if (num[0] == '+') num.erase(0, 1);
        BigInt d(den, 10);
        if (d == 0) bad();
        Rational r(BigInt(num, 10), d);
        r.canonicalize();
        return r;
    }

    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    std::string digits;
    long exp10 = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_point) --exp10;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) bad();
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') bad();
        std::string e = s.substr(i + 1);
        if (e.empty()) bad();
        size_t j = (e[0] == '-' || e[0] == '+') ? 1 : 0;
        if (j >= e.size()) bad();
        for (size_t k = j; k < e.size(); ++k)
            if (e[k] < '0' || e[k] > '9') bad();
        if (e.size() > 6) bad();
        exp10 += std::stol(e);
    }
    BigInt num(digits, 10);
    BigInt p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational r = exp10 < 0 ? Rational(num, p10) : Rational(num * p10);
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational pow(const Rational& q, unsigned long e) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(out.get_den_mpz_t(), q.get_den_mpz_t(), e);
    return out;
}

inline void require_unit_q(const Rational& q) {
    require(q >= 0 && q < 1, ErrorKind::invalid_input, "q must lie in [0,1), got " + q.get_str());
}

} // namespace asep
