#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stabsec {

// Arbitrary-precision signed integer, base 2^32 limbs, little endian.
// Big enough and fast enough for game-tree values and binomial sums with
// n up to a few thousand; not a general-purpose bignum.
class BigInt {
 public:
  BigInt() = default;
  BigInt(std::int64_t v);
  static BigInt from_u64(std::uint64_t v);
  static BigInt from_string(std::string_view s);

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool is_negative() const { return sign_ < 0; }

  // value comparison, -1/0/+1
  static int compare(const BigInt& a, const BigInt& b);
  static int compare_magnitude(const BigInt& a, const BigInt& b);

  BigInt operator-() const;
  BigInt abs() const;

  friend BigInt operator+(const BigInt& a, const BigInt& b);
  friend BigInt operator-(const BigInt& a, const BigInt& b);
  friend BigInt operator*(const BigInt& a, const BigInt& b);

  // Truncated division (quotient rounds toward zero, remainder has the
  // sign of the dividend). b must be nonzero.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
  BigInt operator/(const BigInt& b) const;
  BigInt operator%(const BigInt& b) const;

  static BigInt gcd(BigInt a, BigInt b);  // nonnegative
  static BigInt binomial(int n, int k);
  static BigInt pow2(int e);

  bool fits_int64() const;
  std::int64_t as_int64() const;  // requires fits_int64()
  std::size_t bit_length() const;
  double to_double() const;   // rounded; overflows to +-inf past double range
  double mantissa64() const;  // top 64 bits / 2^64, in [0.5, 1); requires nonzero

  std::string to_string() const;

  friend bool operator==(const BigInt& a, const BigInt& b) { return compare(a, b) == 0; }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return compare(a, b) != 0; }
  friend bool operator<(const BigInt& a, const BigInt& b) { return compare(a, b) < 0; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return compare(a, b) <= 0; }
  friend bool operator>(const BigInt& a, const BigInt& b) { return compare(a, b) > 0; }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return compare(a, b) >= 0; }

 private:
  int sign_ = 0;                    // -1, 0, +1
  std::vector<std::uint32_t> mag_;  // no trailing zero limbs; empty iff zero

  void trim();
  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
  static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b);
  void mul_small(std::uint32_t m);
  std::uint32_t divmod_small(std::uint32_t d);  // in place, returns remainder
  friend class Rational;
};

// Exact rational with normalized representation: den > 0, gcd(|num|, den) = 1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t v) : num_(v), den_(1) {}
  Rational(std::int64_t num, std::int64_t den);
  Rational(BigInt num, BigInt den);

  static Rational from_string(std::string_view s);  // "a/b" or "a"

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
  Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
  Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  static int compare(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return compare(a, b) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

  double to_double() const;
  std::string to_string() const;  // "a/b", or "a" when den == 1

 private:
  BigInt num_, den_;
  void normalize();
};

}  // namespace stabsec
