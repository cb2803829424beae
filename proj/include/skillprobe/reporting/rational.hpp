#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace skillprobe {

// Exact non-negative fraction, kept in lowest terms.
class Rational {
 public:
  Rational() = default;
  // Throws PreconditionError on a zero denominator or negative parts.
  Rational(std::int64_t numerator, std::int64_t denominator);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator+(const Rational& other) const;
  Rational operator/(std::int64_t divisor) const;

  // Three decimals, half up: 74/94 -> "0.787".
  std::string decimal() const;
  // Percent with one decimal, half up: 74/94 -> "78.7".
  std::string percent() const;

  bool operator==(const Rational& other) const = default;
  std::strong_ordering operator<=>(const Rational& other) const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace skillprobe
