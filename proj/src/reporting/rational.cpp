#include "skillprobe/reporting/rational.hpp"

#include <numeric>

#include "skillprobe/core/error.hpp"

namespace skillprobe {

namespace {

// round(value * scale) for value = num/den, halves rounding up.
std::int64_t scaled(std::int64_t num, std::int64_t den, std::int64_t scale) {
  return (2 * num * scale + den) / (2 * den);
}

std::string fixed(std::int64_t units, int decimals) {
  std::int64_t divisor = 1;
  for (int i = 0; i < decimals; ++i) divisor *= 10;
  std::string frac = std::to_string(units % divisor);
  frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
  return std::to_string(units / divisor) + "." + frac;
}

}  // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0 || numerator < 0) throw PreconditionError("rational needs num >= 0 and den > 0");
  const std::int64_t g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

Rational Rational::operator+(const Rational& other) const {
  const std::int64_t l = std::lcm(den_, other.den_);
  return Rational(num_ * (l / den_) + other.num_ * (l / other.den_), l);
}

Rational Rational::operator/(std::int64_t divisor) const { return Rational(num_, den_ * divisor); }

std::string Rational::decimal() const { return fixed(scaled(num_, den_, 1000), 3); }

std::string Rational::percent() const { return fixed(scaled(num_, den_, 1000), 1); }

std::strong_ordering Rational::operator<=>(const Rational& other) const {
  return num_ * other.den_ <=> other.num_ * den_;
}

}  // namespace skillprobe
