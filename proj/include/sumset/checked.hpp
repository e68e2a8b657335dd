#pragma once

#include <cstdint>
#include <stdexcept>

namespace sumset::checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 addition overflow");
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("int64 subtraction overflow");
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 multiplication overflow");
  return r;
}

inline std::int64_t abs(std::int64_t a) {
  if (a == INT64_MIN) throw std::overflow_error("int64 abs overflow");
  return a < 0 ? -a : a;
}

// Integer power; throws on overflow.
inline std::int64_t pow(std::int64_t base, std::int64_t exp) {
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < exp; ++i) r = mul(r, base);
  return r;
}

}  // namespace sumset::checked
