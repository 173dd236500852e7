#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ssb {

/// Exact dyadic rational num / 2^exp, kept normalized (num odd, or num == 0 with exp == 0).
/// Arithmetic throws std::overflow_error instead of wrapping.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  Dyadic(std::int64_t num, int exp = 0);

  static Dyadic from_int(std::int64_t v) { return Dyadic(v, 0); }

  std::int64_t numerator() const noexcept { return num_; }
  int exponent() const noexcept { return exp_; }
  bool is_zero() const noexcept { return num_ == 0; }
  int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  /// Multiply by 2^-k (k may be negative).
  Dyadic scaled(int k) const;
  Dyadic abs() const { return num_ < 0 ? Dyadic(-num_, exp_) : *this; }

  double to_double() const;
  /// Smallest double >= value.
  double to_double_upper() const;
  std::string to_string() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a) { return Dyadic(-a.num_, a.exp_); }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  std::int64_t num_ = 0;
  int exp_ = 0;
};

}  // namespace ssb
