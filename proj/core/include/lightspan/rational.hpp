#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace lightspan {

/// Exact rational arithmetic for weights, distances and epsilon.
using Rational = mpq_class;

/// Shortest-path distance; std::nullopt encodes "unreachable".
using Distance = std::optional<Rational>;

// Accepts "p" or "p/q" with an optional sign. Throws InputError.
Rational parse_rational(std::string_view text);

// Canonical "p/q" or "p" form.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// Fixed-point decimal rendering, used for human-facing tables only.
std::string to_decimal(const Rational& r, int digits = 6);

/// a <= b with b = infinity allowed.
inline bool leq(const Rational& a, const Distance& b) { return !b || a <= *b; }

}  // namespace lightspan
