#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace covkit {

/// Exact rational in lowest terms with positive denominator.
using Rational = boost::rational<std::int64_t>;

[[nodiscard]] std::int64_t floor(const Rational& r);
[[nodiscard]] std::int64_t ceil(const Rational& r);

/// Parses "num/den" or a bare integer. Throws Error(BadParams) on anything else,
/// including decimal notation.
[[nodiscard]] Rational parse_rational(std::string_view text);

[[nodiscard]] std::string format_rational(const Rational& r);

}  // namespace covkit
