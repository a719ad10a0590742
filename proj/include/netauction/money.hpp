#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace netauction {

// Exact rational amount of currency.
//
// Numerator and denominator are kept in lowest terms with a positive
// denominator. Intermediate products are computed in 128 bits; a result that
// does not fit back into 64 bits throws std::overflow_error instead of
// rounding.
class Money {
 public:
  constexpr Money() = default;
  constexpr Money(std::int64_t whole) : num_(whole) {}  // NOLINT: implicit from integers
  Money(std::int64_t numerator, std::int64_t denominator);

  // Accepts "12", "-3", "1.25", "3/2" and "-7/4".
  static Money parse(std::string_view text);
  // Converts through the shortest round-trip decimal of `value`, so 0.1
  // becomes 1/10 rather than the binary expansion.
  static Money from_double(double value);

  [[nodiscard]] constexpr std::int64_t numerator() const { return num_; }
  [[nodiscard]] constexpr std::int64_t denominator() const { return den_; }
  [[nodiscard]] constexpr bool is_integer() const { return den_ == 1; }
  [[nodiscard]] constexpr bool is_zero() const { return num_ == 0; }
  [[nodiscard]] constexpr bool is_negative() const { return num_ < 0; }

  [[nodiscard]] double to_double() const;
  // "23", "-3/2".
  [[nodiscard]] std::string to_string() const;
  // Fixed-point rendering rounded half away from zero.
  [[nodiscard]] std::string to_decimal(int fractional_digits) const;

  Money& operator+=(const Money& rhs);
  Money& operator-=(const Money& rhs);
  Money& operator*=(const Money& rhs);
  Money& operator/=(const Money& rhs);

  friend Money operator+(Money lhs, const Money& rhs) { return lhs += rhs; }
  friend Money operator-(Money lhs, const Money& rhs) { return lhs -= rhs; }
  friend Money operator*(Money lhs, const Money& rhs) { return lhs *= rhs; }
  friend Money operator/(Money lhs, const Money& rhs) { return lhs /= rhs; }
  Money operator-() const;

  friend bool operator==(const Money&, const Money&) = default;
  friend std::strong_ordering operator<=>(const Money& lhs, const Money& rhs);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Money abs(const Money& value);
Money midpoint(const Money& lo, const Money& hi);
std::ostream& operator<<(std::ostream& os, const Money& value);

}  // namespace netauction

template <>
struct std::hash<netauction::Money> {
  std::size_t operator()(const netauction::Money& m) const noexcept {
    return std::hash<std::int64_t>{}(m.numerator()) * 31u ^ std::hash<std::int64_t>{}(m.denominator());
  }
};
