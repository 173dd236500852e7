#include "ssb/dyadic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssb {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("dyadic numerator overflow");
  }
  return static_cast<std::int64_t>(v);
}

// Lift a to exponent `exp` (exp >= a.exponent()).
i128 lift(const Dyadic& a, int exp) {
  const int shift = exp - a.exponent();
  if (shift >= 62) throw std::overflow_error("dyadic exponent spread too large");
  const i128 v = static_cast<i128>(a.numerator()) << shift;
  if ((v >> shift) != a.numerator()) throw std::overflow_error("dyadic numerator overflow");
  return v;
}

}  // namespace

Dyadic::Dyadic(std::int64_t num, int exp) : num_(num), exp_(exp) {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  while ((num_ & 1) == 0 && exp_ > 0) {
    num_ /= 2;
    --exp_;
  }
  while (exp_ < 0) {
    if (num_ > std::numeric_limits<std::int64_t>::max() / 2 ||
        num_ < std::numeric_limits<std::int64_t>::min() / 2) {
      throw std::overflow_error("dyadic numerator overflow");
    }
    num_ *= 2;
    ++exp_;
  }
}

Dyadic Dyadic::scaled(int k) const { return Dyadic(num_, exp_ + k); }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  return Dyadic(narrow(lift(a, e) + lift(b, e)), e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  return Dyadic(narrow(lift(a, e) - lift(b, e)), e);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  const int e = std::max(a.exp_, b.exp_);
  const i128 x = lift(a, e);
  const i128 y = lift(b, e);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num_), -exp_); }

double Dyadic::to_double_upper() const {
  const double d = to_double();
  const long double exact = std::ldexp(static_cast<long double>(num_), -exp_);
  return static_cast<long double>(d) < exact ? std::nextafter(d, std::numeric_limits<double>::infinity()) : d;
}

std::string Dyadic::to_string() const {
  if (exp_ == 0) return std::to_string(num_);
  return std::to_string(num_) + "/2^" + std::to_string(exp_);
}

}  // namespace ssb
