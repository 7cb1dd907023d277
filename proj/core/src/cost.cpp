#include "cmpp/cost.hpp"

#include <algorithm>
#include <ostream>

#include "cmpp/error.hpp"

namespace cmpp {

std::uint64_t Cost::to_u64() const {
  if (!fits_u64()) throw OverflowError("congestion value " + to_string() + " exceeds 64 bits");
  return static_cast<std::uint64_t>(value_);
}

std::string Cost::to_string() const {
  if (value_ == 0) return "0";
  std::string digits;
  Rep v = value_;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Cost Cost::parse(const std::string& text) {
  if (text.empty()) throw Error("empty congestion value");
  Cost result;
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw Error("invalid congestion value '" + text + "'");
    result = result * Cost(10) + Cost(static_cast<std::uint64_t>(ch - '0'));
  }
  return result;
}

Cost& Cost::operator+=(Cost other) {
  Rep sum;
  if (__builtin_add_overflow(value_, other.value_, &sum)) {
    throw OverflowError("congestion sum overflows 128 bits");
  }
  value_ = sum;
  return *this;
}

Cost& Cost::operator-=(Cost other) {
  if (other.value_ > value_) throw UnderflowError("congestion difference below zero");
  value_ -= other.value_;
  return *this;
}

Cost& Cost::operator*=(Cost other) {
  Rep product;
  if (__builtin_mul_overflow(value_, other.value_, &product)) {
    throw OverflowError("congestion product overflows 128 bits");
  }
  value_ = product;
  return *this;
}

Cost operator/(Cost a, Cost b) {
  if (b.value_ == 0) throw Error("division of congestion by zero");
  return Cost::from_raw(a.value_ / b.value_);
}

std::ostream& operator<<(std::ostream& os, Cost c) { return os << c.to_string(); }

}  // namespace cmpp
