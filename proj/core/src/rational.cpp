#include "covkit/rational.hpp"

#include "covkit/error.hpp"

#include <charconv>
#include <limits>

namespace covkit {

std::int64_t floor(const Rational& r) {
    const std::int64_t n = r.numerator();
    const std::int64_t d = r.denominator();
    std::int64_t q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

std::int64_t ceil(const Rational& r) {
    const std::int64_t n = r.numerator();
    const std::int64_t d = r.denominator();
    std::int64_t q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return q;
}

namespace {

std::int64_t parse_integer(std::string_view text, std::string_view whole) {
    std::int64_t v = 0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (begin == end || ec != std::errc{} || ptr != end) {
        throw Error(ErrorKind::BadParams, "not a rational (expected num/den): '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
    const std::int64_t num = parse_integer(text.substr(0, slash), text);
    const std::int64_t den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorKind::BadParams, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

std::string format_rational(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace covkit
