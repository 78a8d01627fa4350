#pragma once

#include <cstdint>
#include <string>

#include "minicheck/source.hpp"

namespace minicheck::frontend {

struct IntLiteralInfo {
  std::uint64_t value = 0;
  // Type per C99 6.4.4.1 collapsed onto the fixed dialect (long == long
  // long == 64 bits).
  int width = 32;
  bool is_unsigned = false;
};

IntLiteralInfo parse_int_literal(const std::string& text, SourceSpan span);

// Value of a character constant, including escapes, as the dialect's
// signed char.
std::int64_t parse_char_literal(const std::string& text_with_quotes,
                                SourceSpan span);

// Decodes a string literal's escapes; input includes the quotes.
std::string decode_string_literal(const std::string& text_with_quotes,
                                  SourceSpan span);

double parse_float_literal(const std::string& text, SourceSpan span);

}  // namespace minicheck::frontend
