#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace minicheck {

using FileId = int;

struct SourceSpan {
  FileId file = -1;
  int line = 0;  // 1-based
  int col = 0;   // 1-based, in bytes
  int length = 0;

  bool valid() const { return file >= 0 && line > 0; }
};

// One link in a macro-expansion chain: the macro's name and where it was
// defined. A token produced by expanding A, whose body invoked B, carries
// [B, A]: innermost expansion first.
struct MacroLink {
  std::string name;
  SourceSpan definition;

  bool operator==(const MacroLink& o) const {
    return name == o.name && definition.file == o.definition.file &&
           definition.line == o.definition.line;
  }
};

using MacroOrigin = std::vector<MacroLink>;

enum class TokenKind {
  Identifier,
  Keyword,
  IntConst,
  FloatConst,
  CharConst,
  StringLit,
  Punct,
  Eof,
};

struct Token {
  TokenKind kind = TokenKind::Eof;
  std::string text;
  SourceSpan span;
  MacroOrigin origin;
  // Comments that appeared immediately before this token, in source order.
  std::vector<std::string> leading_comments;
  // Macros this token must not re-expand (paint applied during expansion).
  std::vector<std::string> no_expand;

  bool is(TokenKind k) const { return kind == k; }
  bool is_punct(std::string_view p) const {
    return kind == TokenKind::Punct && text == p;
  }
  bool is_keyword(std::string_view k) const {
    return kind == TokenKind::Keyword && text == k;
  }
  bool is_ident(std::string_view n) const {
    return kind == TokenKind::Identifier && text == n;
  }
};

class SourceManager {
 public:
  FileId add_file(std::string name, std::string content);
  FileId find_file(std::string_view name) const;  // -1 when absent
  const std::string& file_name(FileId id) const;
  const std::string& file_content(FileId id) const;
  int file_count() const { return static_cast<int>(files_.size()); }

  // Text at a span, empty when out of range. Used to verify that a token
  // with an empty origin chain really is spelled in the file it points at.
  std::string_view text_at(const SourceSpan& span) const;

 private:
  struct File {
    std::string name;
    std::string content;
    std::vector<size_t> line_offsets;
  };
  std::vector<File> files_;
};

// Unrecoverable front-end or analysis error: unknown name, malformed
// construct, out-of-subset input. Carries the blamed location.
class FatalError : public std::runtime_error {
 public:
  FatalError(SourceSpan span, const std::string& message)
      : std::runtime_error(message), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

std::string format_location(const SourceManager& sm, const SourceSpan& span);
std::string format_origin(const MacroOrigin& origin);  // "A<-B" or "direct"

}  // namespace minicheck
