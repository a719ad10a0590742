#include "netauction/money.hpp"

#include <charconv>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace netauction {
namespace {

__extension__ using Wide = __int128;

Wide gcd_wide(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(Wide v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

// Reduces num/den and narrows to 64 bits.
void narrow(Wide num, Wide den, std::int64_t& out_num, std::int64_t& out_den) {
  if (den == 0) throw std::domain_error("Money: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = gcd_wide(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits(num) || !fits(den)) throw std::overflow_error("Money: value exceeds 64-bit rational range");
  out_num = static_cast<std::int64_t>(num);
  out_den = static_cast<std::int64_t>(den);
}

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
    throw std::invalid_argument("Money: cannot parse '" + std::string(whole) + "'");
  return v;
}

std::string wide_to_string(Wide v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  if (neg) v = -v;
  std::string out;
  while (v > 0) {
    out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  if (neg) out.insert(out.begin(), '-');
  return out;
}

}  // namespace

Money::Money(std::int64_t numerator, std::int64_t denominator) {
  narrow(numerator, denominator, num_, den_);
}

Money Money::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("Money: empty string");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::int64_t n = parse_int(s.substr(0, slash), text);
    std::int64_t d = parse_int(s.substr(slash + 1), text);
    return Money(n, d);
  }

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  for (char ch : int_part)
    if (ch < '0' || ch > '9') throw std::invalid_argument("Money: cannot parse '" + std::string(text) + "'");
  if (int_part.empty() && frac_part.empty()) throw std::invalid_argument("Money: cannot parse '" + std::string(text) + "'");
  if (frac_part.size() > 18) throw std::invalid_argument("Money: too many fractional digits in '" + std::string(text) + "'");

  Wide num = int_part.empty() ? 0 : parse_int(int_part, text);
  Wide den = 1;
  for (char ch : frac_part) {
    if (ch < '0' || ch > '9') throw std::invalid_argument("Money: cannot parse '" + std::string(text) + "'");
    num = num * 10 + (ch - '0');
    den *= 10;
    if (!fits(num)) throw std::overflow_error("Money: value exceeds 64-bit rational range");
  }
  if (negative) num = -num;
  Money m;
  narrow(num, den, m.num_, m.den_);
  return m;
}

Money Money::from_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc{}) throw std::invalid_argument("Money: non-finite or oversized double");
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

double Money::to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

std::string Money::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Money::to_decimal(int fractional_digits) const {
  Wide scale = 1;
  for (int i = 0; i < fractional_digits; ++i) scale *= 10;
  Wide n = static_cast<Wide>(num_) * scale;
  Wide d = den_;
  bool neg = n < 0;
  if (neg) n = -n;
  Wide q = n / d;
  Wide r = n % d;
  if (2 * r >= d) ++q;
  std::string digits = wide_to_string(q);
  if (fractional_digits > 0) {
    while (static_cast<int>(digits.size()) <= fractional_digits) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - fractional_digits, '.');
  }
  if (neg && q != 0) digits.insert(digits.begin(), '-');
  return digits;
}

Money& Money::operator+=(const Money& rhs) {
  if (den_ == rhs.den_) {
    narrow(static_cast<Wide>(num_) + rhs.num_, den_, num_, den_);
    return *this;
  }
  Wide n = static_cast<Wide>(num_) * rhs.den_ + static_cast<Wide>(rhs.num_) * den_;
  Wide d = static_cast<Wide>(den_) * rhs.den_;
  narrow(n, d, num_, den_);
  return *this;
}

Money& Money::operator-=(const Money& rhs) { return *this += -rhs; }

Money& Money::operator*=(const Money& rhs) {
  narrow(static_cast<Wide>(num_) * rhs.num_, static_cast<Wide>(den_) * rhs.den_, num_, den_);
  return *this;
}

Money& Money::operator/=(const Money& rhs) {
  if (rhs.num_ == 0) throw std::domain_error("Money: division by zero");
  narrow(static_cast<Wide>(num_) * rhs.den_, static_cast<Wide>(den_) * rhs.num_, num_, den_);
  return *this;
}

Money Money::operator-() const {
  if (num_ == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("Money: negation overflow");
  Money m;
  m.num_ = -num_;
  m.den_ = den_;
  return m;
}

std::strong_ordering operator<=>(const Money& lhs, const Money& rhs) {
  if (lhs.den_ == rhs.den_) return lhs.num_ <=> rhs.num_;
  Wide l = static_cast<Wide>(lhs.num_) * rhs.den_;
  Wide r = static_cast<Wide>(rhs.num_) * lhs.den_;
  return l <=> r;
}

Money abs(const Money& value) { return value.is_negative() ? -value : value; }

Money midpoint(const Money& lo, const Money& hi) { return (lo + hi) / Money(2); }

std::ostream& operator<<(std::ostream& os, const Money& value) { return os << value.to_string(); }

}  // namespace netauction
