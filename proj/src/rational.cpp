#include "stabsec/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace stabsec {

namespace {
constexpr std::uint64_t kBase = 1ULL << 32;
}

BigInt::BigInt(std::int64_t v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  std::uint64_t m = v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
  while (m) {
    mag_.push_back(static_cast<std::uint32_t>(m & 0xffffffffu));
    m >>= 32;
  }
}

BigInt BigInt::from_u64(std::uint64_t v) {
  BigInt x;
  if (v == 0) return x;
  x.sign_ = 1;
  while (v) {
    x.mag_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    v >>= 32;
  }
  return x;
}

BigInt BigInt::from_string(std::string_view s) {
  BigInt x;
  bool neg = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i >= s.size()) throw std::invalid_argument("BigInt: empty numeral");
  x.sign_ = 1;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
    x.mul_small(10);
    // add digit
    std::uint64_t carry = static_cast<std::uint64_t>(s[i] - '0');
    for (std::size_t j = 0; j < x.mag_.size() && carry; ++j) {
      carry += x.mag_[j];
      x.mag_[j] = static_cast<std::uint32_t>(carry & 0xffffffffu);
      carry >>= 32;
    }
    if (carry) x.mag_.push_back(static_cast<std::uint32_t>(carry));
  }
  x.trim();
  if (!x.mag_.empty() && neg) x.sign_ = -1;
  return x;
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

int BigInt::compare_magnitude(const BigInt& a, const BigInt& b) {
  if (a.mag_.size() != b.mag_.size()) return a.mag_.size() < b.mag_.size() ? -1 : 1;
  for (std::size_t i = a.mag_.size(); i-- > 0;) {
    if (a.mag_[i] != b.mag_[i]) return a.mag_[i] < b.mag_[i] ? -1 : 1;
  }
  return 0;
}

int BigInt::compare(const BigInt& a, const BigInt& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
  int m = compare_magnitude(a, b);
  return a.sign_ >= 0 ? m : -m;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  if (r.sign_ < 0) r.sign_ = 1;
  return r;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  const auto& lo = a.size() >= b.size() ? b : a;
  const auto& hi = a.size() >= b.size() ? a : b;
  std::vector<std::uint32_t> r(hi.size());
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < hi.size(); ++i) {
    std::uint64_t s = carry + hi[i] + (i < lo.size() ? lo[i] : 0u);
    r[i] = static_cast<std::uint32_t>(s & 0xffffffffu);
    carry = s >> 32;
  }
  if (carry) r.push_back(static_cast<std::uint32_t>(carry));
  return r;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> r(a.size());
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0u);
    if (d < 0) {
      d += static_cast<std::int64_t>(kBase);
      borrow = 1;
    } else {
      borrow = 0;
    }
    r[i] = static_cast<std::uint32_t>(d);
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

std::vector<std::uint32_t> BigInt::mul_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint32_t> r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t carry = 0;
    std::uint64_t ai = a[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint64_t cur = r[i + j] + ai * b[j] + carry;
      r[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
    }
    std::size_t k = i + b.size();
    while (carry) {
      std::uint64_t cur = r[k] + carry;
      r[k] = static_cast<std::uint32_t>(cur & 0xffffffffu);
      carry = cur >> 32;
      ++k;
    }
  }
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  BigInt r;
  if (a.sign_ == b.sign_) {
    r.mag_ = BigInt::add_mag(a.mag_, b.mag_);
    r.sign_ = a.sign_;
    return r;
  }
  int c = BigInt::compare_magnitude(a, b);
  if (c == 0) return BigInt();
  if (c > 0) {
    r.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
    r.sign_ = a.sign_;
  } else {
    r.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
    r.sign_ = b.sign_;
  }
  return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
  BigInt r;
  if (a.sign_ == 0 || b.sign_ == 0) return r;
  r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
  r.sign_ = a.sign_ * b.sign_;
  return r;
}

void BigInt::mul_small(std::uint32_t m) {
  if (sign_ == 0) return;
  if (m == 0) {
    *this = BigInt();
    return;
  }
  std::uint64_t carry = 0;
  for (auto& limb : mag_) {
    std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
    limb = static_cast<std::uint32_t>(cur & 0xffffffffu);
    carry = cur >> 32;
  }
  if (carry) mag_.push_back(static_cast<std::uint32_t>(carry));
}

std::uint32_t BigInt::divmod_small(std::uint32_t d) {
  if (d == 0) throw std::invalid_argument("BigInt: division by zero");
  std::uint64_t rem = 0;
  for (std::size_t i = mag_.size(); i-- > 0;) {
    std::uint64_t cur = (rem << 32) | mag_[i];
    mag_[i] = static_cast<std::uint32_t>(cur / d);
    rem = cur % d;
  }
  trim();
  return static_cast<std::uint32_t>(rem);
}

// Knuth algorithm D over 32-bit limbs.
void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.sign_ == 0) throw std::invalid_argument("BigInt: division by zero");
  int cmp = compare_magnitude(a, b);
  if (cmp < 0) {
    q = BigInt();
    r = a;
    return;
  }
  int qsign = a.sign_ * b.sign_;
  int rsign = a.sign_;
  if (b.mag_.size() == 1) {
    BigInt quo = a;
    std::uint32_t rem = quo.divmod_small(b.mag_[0]);
    quo.sign_ = quo.mag_.empty() ? 0 : qsign;
    q = std::move(quo);
    r = BigInt(static_cast<std::int64_t>(rem));
    if (!r.mag_.empty()) r.sign_ = rsign;
    return;
  }

  // normalize so the top limb of the divisor has its high bit set
  int shift = 0;
  {
    std::uint32_t top = b.mag_.back();
    while (!(top & 0x80000000u)) {
      top <<= 1;
      ++shift;
    }
  }
  auto shl = [&](const std::vector<std::uint32_t>& v) {
    std::vector<std::uint32_t> out(v.size() + 1, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] |= static_cast<std::uint32_t>((static_cast<std::uint64_t>(v[i]) << shift) & 0xffffffffu);
      out[i + 1] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(v[i]) << shift) >> 32);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
  };
  std::vector<std::uint32_t> u = shl(a.mag_);
  std::vector<std::uint32_t> v = shl(b.mag_);
  const std::size_t n = v.size();
  const std::size_t m = u.size() >= n ? u.size() - n : 0;
  u.resize(u.size() + 1, 0);

  std::vector<std::uint32_t> quo(m + 1, 0);
  const std::uint64_t vtop = v[n - 1];
  const std::uint64_t vsec = n >= 2 ? v[n - 2] : 0;

  for (std::size_t j = m + 1; j-- > 0;) {
    std::uint64_t num = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
    std::uint64_t qhat = num / vtop;
    std::uint64_t rhat = num % vtop;
    if (qhat > 0xffffffffu) {
      qhat = 0xffffffffu;
      rhat = num - qhat * vtop;
    }
    while (rhat <= 0xffffffffu &&
           qhat * vsec > ((rhat << 32) | (n >= 2 ? u[j + n - 2] : 0u))) {
      --qhat;
      rhat += vtop;
    }
    // u[j .. j+n] -= qhat * v
    std::int64_t borrow = 0;
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t p = qhat * v[i] + carry;
      carry = p >> 32;
      std::int64_t t = static_cast<std::int64_t>(u[i + j]) - static_cast<std::int64_t>(p & 0xffffffffu) - borrow;
      if (t < 0) {
        t += static_cast<std::int64_t>(kBase);
        borrow = 1;
      } else {
        borrow = 0;
      }
      u[i + j] = static_cast<std::uint32_t>(t);
    }
    std::int64_t t = static_cast<std::int64_t>(u[j + n]) - static_cast<std::int64_t>(carry) - borrow;
    if (t < 0) {
      // qhat was one too large; add v back
      t += static_cast<std::int64_t>(kBase);
      --qhat;
      std::uint64_t c2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = c2 + u[i + j] + v[i];
        u[i + j] = static_cast<std::uint32_t>(s & 0xffffffffu);
        c2 = s >> 32;
      }
      t += static_cast<std::int64_t>(c2);
      if (t >= static_cast<std::int64_t>(kBase)) t -= static_cast<std::int64_t>(kBase);
    }
    u[j + n] = static_cast<std::uint32_t>(t);
    quo[j] = static_cast<std::uint32_t>(qhat);
  }

  q = BigInt();
  q.mag_ = std::move(quo);
  q.trim();
  if (!q.mag_.empty()) q.sign_ = qsign;

  // remainder = u >> shift, first n limbs
  u.resize(n);
  std::vector<std::uint32_t> rm(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t cur = u[i] >> shift;
    if (shift && i + 1 < n) cur |= (static_cast<std::uint64_t>(u[i + 1]) << (32 - shift)) & 0xffffffffu;
    rm[i] = static_cast<std::uint32_t>(cur);
  }
  r = BigInt();
  r.mag_ = std::move(rm);
  r.trim();
  if (!r.mag_.empty()) r.sign_ = rsign;
}

BigInt BigInt::operator/(const BigInt& b) const {
  BigInt q, r;
  divmod(*this, b, q, r);
  return q;
}

BigInt BigInt::operator%(const BigInt& b) const {
  BigInt q, r;
  divmod(*this, b, q, r);
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.sign_ = a.mag_.empty() ? 0 : 1;
  b.sign_ = b.mag_.empty() ? 0 : 1;
  while (!b.is_zero()) {
    BigInt q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

BigInt BigInt::binomial(int n, int k) {
  if (k < 0 || k > n) return BigInt();
  if (k > n - k) k = n - k;
  BigInt r(1);
  for (int i = 1; i <= k; ++i) {
    r.mul_small(static_cast<std::uint32_t>(n - k + i));
    r.divmod_small(static_cast<std::uint32_t>(i));  // exact at every step
  }
  return r;
}

BigInt BigInt::pow2(int e) {
  BigInt r(1);
  r.mag_.assign(static_cast<std::size_t>(e / 32) + 1, 0);
  r.mag_.back() = 1u << (e % 32);
  return r;
}

bool BigInt::fits_int64() const {
  if (mag_.size() > 2) return false;
  if (mag_.size() < 2) return true;
  std::uint64_t v = (static_cast<std::uint64_t>(mag_[1]) << 32) | mag_[0];
  if (sign_ > 0) return v <= static_cast<std::uint64_t>(INT64_MAX);
  return v <= static_cast<std::uint64_t>(INT64_MAX) + 1;
}

std::int64_t BigInt::as_int64() const {
  std::uint64_t v = 0;
  if (mag_.size() >= 1) v = mag_[0];
  if (mag_.size() >= 2) v |= static_cast<std::uint64_t>(mag_[1]) << 32;
  return sign_ < 0 ? -static_cast<std::int64_t>(v) : static_cast<std::int64_t>(v);
}

std::size_t BigInt::bit_length() const {
  if (mag_.empty()) return 0;
  std::size_t bits = (mag_.size() - 1) * 32;
  std::uint32_t top = mag_.back();
  while (top) {
    ++bits;
    top >>= 1;
  }
  return bits;
}

double BigInt::mantissa64() const {
  const std::size_t bl = bit_length();
  std::uint64_t top = 0;
  std::size_t bit = bl;
  for (int need = 64; need > 0; --need) {
    std::uint64_t b = 0;
    if (bit > 0) {
      bit -= 1;
      b = (mag_[bit / 32] >> (bit % 32)) & 1u;
    }
    top = (top << 1) | b;
  }
  return static_cast<double>(top) * 0x1.0p-64;
}

double BigInt::to_double() const {
  if (mag_.empty()) return 0.0;
  std::size_t bl = bit_length();
  if (bl <= 63) {
    std::uint64_t v = mag_[0];
    if (mag_.size() >= 2) v |= static_cast<std::uint64_t>(mag_[1]) << 32;
    return sign_ * static_cast<double>(v);
  }
  return sign_ * std::ldexp(mantissa64(), static_cast<int>(bl));
}

std::string BigInt::to_string() const {
  if (mag_.empty()) return "0";
  BigInt t = *this;
  std::string out;
  while (!t.mag_.empty()) {
    std::uint32_t chunk = t.divmod_small(1000000000u);
    if (t.mag_.empty()) {
      out = std::to_string(chunk) + out;
    } else {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%09u", chunk);
      out = buf + out;
    }
  }
  return (sign_ < 0 ? "-" : "") + out;
}

// ---------------------------------------------------------------------------

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void Rational::normalize() {
  if (den_.is_zero()) throw std::invalid_argument("Rational: zero denominator");
  if (den_.is_negative()) {
    den_ = -den_;
    num_ = -num_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  // fast path: both operands in 64-bit range
  if (num_.fits_int64() && den_.fits_int64()) {
    std::int64_t n = num_.as_int64();
    std::int64_t d = den_.as_int64();
    std::uint64_t g = std::gcd(n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n),
                               static_cast<std::uint64_t>(d));
    if (g > 1) {
      num_ = BigInt(n / static_cast<std::int64_t>(g));
      den_ = BigInt(d / static_cast<std::int64_t>(g));
    }
    return;
  }
  BigInt g = BigInt::gcd(num_.abs(), den_);
  if (!(g == BigInt(1))) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
}

Rational Rational::from_string(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(BigInt::from_string(s), BigInt(1));
  return Rational(BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1)));
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::invalid_argument("Rational: division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

int Rational::compare(const Rational& a, const Rational& b) {
  return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
}

double Rational::to_double() const {
  if (num_.is_zero()) return 0.0;
  std::size_t bn = num_.bit_length();
  std::size_t bd = den_.bit_length();
  if (bn <= 900 && bd <= 900) return num_.to_double() / den_.to_double();
  // huge operands: ratio of top-64-bit windows, rescaled by bit lengths
  return num_.sign() * std::ldexp(num_.mantissa64() / den_.mantissa64(),
                                  static_cast<int>(bn) - static_cast<int>(bd));
}

std::string Rational::to_string() const {
  if (den_ == BigInt(1)) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

}  // namespace stabsec
