#include "minicheck/literals.hpp"

#include <cctype>
#include <cstdlib>

#include "minicheck/dialect.hpp"

namespace minicheck::frontend {

IntLiteralInfo parse_int_literal(const std::string& text, SourceSpan span) {
  size_t i = 0;
  int base = 10;
  if (text.size() > 1 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    i = 2;
  } else if (text.size() > 1 && text[0] == '0' &&
             std::isdigit((unsigned char)text[1])) {
    base = 8;
    i = 1;
  }
  std::uint64_t v = 0;
  bool any = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (base == 16 && c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else if (base == 16 && c >= 'A' && c <= 'F')
      d = c - 'A' + 10;
    else
      break;
    if (d >= base) throw FatalError(span, "malformed integer constant");
    if (v > (UINT64_MAX - static_cast<std::uint64_t>(d)) / base)
      throw FatalError(span, "integer constant too large");
    v = v * base + static_cast<std::uint64_t>(d);
    any = true;
  }
  if (!any) throw FatalError(span, "malformed integer constant");

  bool suf_u = false, suf_l = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == 'u' || c == 'U')
      suf_u = true;
    else if (c == 'l' || c == 'L')
      suf_l = true;
    else
      throw FatalError(span, "malformed integer constant suffix");
  }

  IntLiteralInfo info;
  info.value = v;
  if (suf_u && suf_l) {
    info.is_unsigned = true;
    info.width = 64;
  } else if (suf_u) {
    info.is_unsigned = true;
    info.width = v <= dialect::unsigned_max(32) ? 32 : 64;
  } else if (suf_l) {
    info.is_unsigned = v > static_cast<std::uint64_t>(dialect::signed_max(64));
    info.width = 64;
  } else if (base == 10) {
    if (v <= static_cast<std::uint64_t>(dialect::signed_max(32))) {
      info.width = 32;
    } else if (v <= static_cast<std::uint64_t>(dialect::signed_max(64))) {
      info.width = 64;
    } else {
      info.width = 64;
      info.is_unsigned = true;
    }
  } else {
    // Octal/hex constants may land on unsigned types.
    if (v <= static_cast<std::uint64_t>(dialect::signed_max(32))) {
      info.width = 32;
    } else if (v <= dialect::unsigned_max(32)) {
      info.width = 32;
      info.is_unsigned = true;
    } else if (v <= static_cast<std::uint64_t>(dialect::signed_max(64))) {
      info.width = 64;
    } else {
      info.width = 64;
      info.is_unsigned = true;
    }
  }
  return info;
}

namespace {

std::int64_t decode_escape(std::string_view inner, size_t& i,
                           SourceSpan span) {
  // inner[i] == '\\' on entry; returns the decoded byte value.
  ++i;
  if (i >= inner.size()) throw FatalError(span, "malformed escape sequence");
  char e = inner[i];
  switch (e) {
    case 'n': ++i; return '\n';
    case 't': ++i; return '\t';
    case 'r': ++i; return '\r';
    case 'a': ++i; return '\a';
    case 'b': ++i; return '\b';
    case 'f': ++i; return '\f';
    case 'v': ++i; return '\v';
    case '\\': ++i; return '\\';
    case '\'': ++i; return '\'';
    case '"': ++i; return '"';
    case '?': ++i; return '?';
    case 'x': {
      ++i;
      if (i >= inner.size() || !std::isxdigit((unsigned char)inner[i]))
        throw FatalError(span, "malformed hex escape");
      std::int64_t v = 0;
      while (i < inner.size() && std::isxdigit((unsigned char)inner[i])) {
        char c = inner[i];
        int d = c <= '9' ? c - '0'
                         : (c >= 'a' ? c - 'a' + 10 : c - 'A' + 10);
        v = (v * 16 + d) & 0xFF;
        ++i;
      }
      return v;
    }
    default:
      if (e >= '0' && e <= '7') {
        std::int64_t v = 0;
        int digits = 0;
        while (i < inner.size() && inner[i] >= '0' && inner[i] <= '7' &&
               digits < 3) {
          v = v * 8 + (inner[i] - '0');
          ++i;
          ++digits;
        }
        return v & 0xFF;
      }
      throw FatalError(span, "unsupported escape sequence");
  }
}

}  // namespace

std::int64_t parse_char_literal(const std::string& text, SourceSpan span) {
  if (text.size() < 3 || text.front() != '\'' || text.back() != '\'')
    throw FatalError(span, "malformed character constant");
  std::string_view inner(text);
  inner.remove_prefix(1);
  inner.remove_suffix(1);
  size_t i = 0;
  std::int64_t v;
  if (inner[0] == '\\')
    v = decode_escape(inner, i, span);
  else {
    v = static_cast<unsigned char>(inner[0]);
    i = 1;
  }
  if (i != inner.size())
    throw FatalError(span, "multi-character constant is not supported");
  return static_cast<signed char>(v);  // chars are signed in this dialect
}

std::string decode_string_literal(const std::string& text, SourceSpan span) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"')
    throw FatalError(span, "malformed string literal");
  std::string_view inner(text);
  inner.remove_prefix(1);
  inner.remove_suffix(1);
  std::string out;
  size_t i = 0;
  while (i < inner.size()) {
    if (inner[i] == '\\')
      out.push_back(static_cast<char>(decode_escape(inner, i, span) & 0xFF));
    else
      out.push_back(inner[i++]);
  }
  return out;
}

double parse_float_literal(const std::string& text, SourceSpan span) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw FatalError(span, "malformed float constant");
  // Any remaining suffix (f/F/l/L) was validated by the lexer.
  return v;
}

}  // namespace minicheck::frontend
