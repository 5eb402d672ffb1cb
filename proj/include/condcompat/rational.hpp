#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace condcompat {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses "3", "-3", "3/7" or "0.25" into an exact rational. Decimal input
/// converts exactly ("0.25" -> 1/4). Returns nullopt on malformed text.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    auto scan_digits = [&](std::size_t from) {
        std::size_t end = from;
        while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
        return end;
    };
    std::size_t head_end = scan_digits(pos);
    if (head_end == pos) return std::nullopt;
    std::string head(text.substr(pos, head_end - pos));
    Rational value;
    if (head_end == text.size()) {
        value = Rational(Int(head));
    } else {
        char sep = text[head_end];
        std::size_t tail_begin = head_end + 1;
        std::size_t tail_end = scan_digits(tail_begin);
        if (tail_end != text.size() || tail_end == tail_begin) return std::nullopt;
        std::string tail(text.substr(tail_begin, tail_end - tail_begin));
        if (sep == '/') {
            Int den(tail);
            if (den == 0) return std::nullopt;
            value = Rational(Int(head), den);
        } else if (sep == '.') {
            Int scale = pow(Int(10), static_cast<unsigned>(tail.size()));
            value = Rational(Int(head) * scale + Int(tail), scale);
        } else {
            return std::nullopt;
        }
    }
    if (negative) value = -value;
    return value;
}

inline Rational parse_rational(std::string_view text) {
    std::optional<Rational> value = try_parse_rational(text);
    if (!value) throw Error("not a rational number: '" + std::string(text) + "'");
    return *value;
}

/// "n/d" in lowest terms, or plain "n" when the denominator is one.
inline std::string to_fraction_string(const Rational& q) {
    return q.str();
}

/// Fixed-point decimal with the given number of places, rounded half away
/// from zero. Display helper only; never feeds back into computations.
inline std::string to_decimal_string(const Rational& q, std::size_t places = 6) {
    Int num = numerator(q);
    const Int& den = denominator(q);
    bool negative = num < 0;
    if (negative) num = -num;
    Int scale = pow(Int(10), static_cast<unsigned>(places));
    Int scaled = num * scale;
    Int quot = scaled / den;
    Int rem = scaled % den;
    if (2 * rem >= den) ++quot;
    std::string out = (negative && quot != 0) ? "-" : "";
    out += Int(quot / scale).str();
    if (places > 0) {
        std::string frac = Int(quot % scale).str();
        out += '.';
        out += std::string(places - frac.size(), '0');
        out += frac;
    }
    return out;
}

}  // namespace condcompat
