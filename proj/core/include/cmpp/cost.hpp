#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace cmpp {

/// Non-negative congestion quantity backed by an unsigned 128-bit integer.
///
/// Every arithmetic operation is checked: overflow raises OverflowError and
/// subtraction below zero raises UnderflowError. Products of (f_e + 1) terms
/// grow quickly, so plain 64-bit counters are not enough for dense instances.
class Cost {
 public:
  using Rep = unsigned __int128;

  constexpr Cost() = default;
  constexpr Cost(std::uint64_t value) : value_(value) {}  // NOLINT(implicit)

  static constexpr Cost from_raw(Rep raw) {
    Cost c;
    c.value_ = raw;
    return c;
  }
  static constexpr Cost max() { return from_raw(~Rep{0}); }

  constexpr Rep raw() const { return value_; }

  bool fits_u64() const { return value_ <= Rep{UINT64_MAX}; }
  // Throws OverflowError when the value does not fit.
  std::uint64_t to_u64() const;
  long double to_long_double() const { return static_cast<long double>(value_); }
  std::string to_string() const;
  // Accepts decimal digits only.
  static Cost parse(const std::string& text);

  Cost& operator+=(Cost other);
  Cost& operator-=(Cost other);
  Cost& operator*=(Cost other);

  friend Cost operator+(Cost a, Cost b) { return a += b; }
  friend Cost operator-(Cost a, Cost b) { return a -= b; }
  friend Cost operator*(Cost a, Cost b) { return a *= b; }
  // Integer division; divisor must be non-zero.
  friend Cost operator/(Cost a, Cost b);

  friend constexpr bool operator==(Cost a, Cost b) { return a.value_ == b.value_; }
  friend constexpr std::strong_ordering operator<=>(Cost a, Cost b) {
    return a.value_ <=> b.value_;
  }

 private:
  Rep value_ = 0;
};

std::ostream& operator<<(std::ostream& os, Cost c);

}  // namespace cmpp
