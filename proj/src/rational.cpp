#include "embedsim/rational.hpp"

#include <cctype>

#include "embedsim/errors.hpp"

namespace embedsim {
namespace {

bool is_integer_token(std::string_view text) {
  if (!text.empty() && text.front() == '-') text.remove_prefix(1);
  if (text.empty()) return false;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den) || den.front() == '-') {
    throw Error("malformed rational '" + std::string(text) + "'");
  }
  Rational value;
  value.get_num() = BigInt(std::string(num));
  value.get_den() = BigInt(std::string(den));
  if (value.get_den() == 0) {
    throw Error("zero denominator in '" + std::string(text) + "'");
  }
  value.canonicalize();
  return value;
}

std::string format_rational(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational dot(const Vector& lhs, const Vector& rhs) {
  if (lhs.size() != rhs.size()) {
    throw DimensionMismatch("dot product of vectors with dimensions " +
                            std::to_string(lhs.size()) + " and " +
                            std::to_string(rhs.size()));
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] == 0 || rhs[i] == 0) continue;
    sum += lhs[i] * rhs[i];
  }
  return sum;
}

Rational squared_norm(const Vector& v) { return dot(v, v); }

Rational squared_distance(const Vector& lhs, const Vector& rhs) {
  if (lhs.size() != rhs.size()) {
    throw DimensionMismatch("distance between vectors with dimensions " +
                            std::to_string(lhs.size()) + " and " +
                            std::to_string(rhs.size()));
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const Rational diff = lhs[i] - rhs[i];
    sum += diff * diff;
  }
  return sum;
}

Vector zeros(std::size_t dimension) { return Vector(dimension, Rational(0)); }

}  // namespace embedsim
