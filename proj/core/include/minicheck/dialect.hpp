#pragma once

#include <cstdint>

// Fixed target model. Every size/signedness assumption in the analyses and in
// the reference interpreter comes from here, so the two can never disagree.
//
//   char        8 bits, signed (but a distinct type from signed char)
//   short      16 bits
//   int        32 bits
//   long       64 bits
//   long long  64 bits
//   pointers   64 bits
//   float      32 bits, double / long double 64 bits
//   two's complement; signed overflow is a trapped runtime error, unsigned
//   arithmetic wraps. Shift counts are taken modulo the promoted width so
//   that evaluation is total.

namespace minicheck::dialect {

inline constexpr int char_bits = 8;
inline constexpr bool char_is_signed = true;
inline constexpr int short_bits = 16;
inline constexpr int int_bits = 32;
inline constexpr int long_bits = 64;
inline constexpr int long_long_bits = 64;
inline constexpr int pointer_bits = 64;
inline constexpr int float_bits = 32;
inline constexpr int double_bits = 64;

inline constexpr int eof_value = -1;
inline constexpr int erange_value = 34;

// Inclusive value range of a two's-complement integer of `bits` bits.
constexpr std::int64_t signed_min(int bits) {
  return bits >= 64 ? INT64_MIN : -(std::int64_t(1) << (bits - 1));
}
constexpr std::int64_t signed_max(int bits) {
  return bits >= 64 ? INT64_MAX : (std::int64_t(1) << (bits - 1)) - 1;
}
constexpr std::uint64_t unsigned_max(int bits) {
  return bits >= 64 ? UINT64_MAX : (std::uint64_t(1) << bits) - 1;
}

}  // namespace minicheck::dialect
