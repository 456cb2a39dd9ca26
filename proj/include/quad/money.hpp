#pragma once
#include <compare>
#include <cmath>
#include <cstdint>
#include <string>

namespace quad {

/// Fixed-point currency amount stored as integer cents.
///
/// Every price, bid, ask, fee and utility in the library is a Money, and
/// the equilibrium scan steps over an exact cent grid.
class Money {
public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
  static constexpr Money whole(std::int64_t units) { return Money(units * 100); }
  // Rounds half away from zero to the nearest cent.
  static Money from_double(double units) { return Money(std::llround(units * 100.0)); }

  constexpr std::int64_t cents() const noexcept { return cents_; }
  constexpr double to_double() const noexcept { return static_cast<double>(cents_) / 100.0; }

  constexpr Money operator-() const noexcept { return Money(-cents_); }
  constexpr Money& operator+=(Money o) noexcept { cents_ += o.cents_; return *this; }
  constexpr Money& operator-=(Money o) noexcept { cents_ -= o.cents_; return *this; }

  friend constexpr Money operator+(Money a, Money b) noexcept { return Money(a.cents_ + b.cents_); }
  friend constexpr Money operator-(Money a, Money b) noexcept { return Money(a.cents_ - b.cents_); }
  friend constexpr Money operator*(Money a, std::int64_t k) noexcept { return Money(a.cents_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) noexcept { return Money(a.cents_ * k); }

  friend constexpr auto operator<=>(Money, Money) = default;
  friend constexpr bool operator==(Money, Money) = default;

  // "12.34", "-0.05"
  std::string str() const;

private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_{0};
};

inline std::string Money::str() const {
  const std::int64_t a = cents_ < 0 ? -cents_ : cents_;
  std::string frac = std::to_string(a % 100);
  if (frac.size() < 2) frac.insert(frac.begin(), '0');
  return (cents_ < 0 ? "-" : "") + std::to_string(a / 100) + "." + frac;
}

/// Whole task units.
using Units = std::int64_t;

}  // namespace quad
