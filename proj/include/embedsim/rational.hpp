#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace embedsim {

// Exact rationals are GMP rationals; every value produced by the library is
// kept in canonical form (denominator > 0, gcd(|num|, den) = 1).
using Rational = mpq_class;
using BigInt = mpz_class;
using Vector = std::vector<Rational>;

// Accepts "p/q" or "p" with optional leading '-'. Throws Error on anything
// else, including a zero denominator.
Rational parse_rational(std::string_view text);

// Always "p/q", even for integers ("3/1").
std::string format_rational(const Rational& value);

Rational dot(const Vector& lhs, const Vector& rhs);
Rational squared_norm(const Vector& v);
Rational squared_distance(const Vector& lhs, const Vector& rhs);

Vector zeros(std::size_t dimension);

}  // namespace embedsim
