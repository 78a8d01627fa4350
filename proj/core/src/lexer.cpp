#include "minicheck/lexer.hpp"

#include <array>
#include <cctype>
#include <cstring>

namespace minicheck::frontend {

namespace {

constexpr std::array keywords = {
    "break",    "case",     "char",   "const",    "continue", "default",
    "do",       "double",   "else",   "enum",     "extern",   "float",
    "for",      "goto",     "if",     "inline",   "int",      "long",
    "register", "restrict", "return", "short",    "signed",   "sizeof",
    "static",   "struct",   "switch", "typedef",  "union",    "unsigned",
    "void",     "volatile", "while",  "_Bool",
};

// Longest first within each length group; scanning tries 3, then 2, then 1.
constexpr std::array punct3 = {"<<=", ">>=", "..."};
constexpr std::array punct2 = {"->", "++", "--", "<<", ">>", "<=", ">=",
                               "==", "!=", "&&", "||", "+=", "-=", "*=",
                               "/=", "%=", "&=", "|=", "^=", "##"};
constexpr const char* punct1 = "[](){}.&*+-~!/%<>^|?:;=,#";

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_'; }

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  bool done() const { return pos >= text.size(); }
  char peek(size_t ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
};

}  // namespace

bool is_keyword_text(std::string_view s) {
  for (const char* k : keywords)
    if (s == k) return true;
  return false;
}

std::vector<Token> lex(const SourceManager& sm, FileId file) {
  const std::string& text = sm.file_content(file);
  Cursor c{text};
  std::vector<Token> out;
  std::vector<std::string> pending_comments;

  auto make_span = [&](int line, int col, size_t begin) {
    SourceSpan s;
    s.file = file;
    s.line = line;
    s.col = col;
    s.length = static_cast<int>(c.pos - begin);
    return s;
  };
  auto fatal_here = [&](const std::string& msg) {
    SourceSpan s;
    s.file = file;
    s.line = c.line;
    s.col = c.col;
    s.length = 1;
    throw FatalError(s, msg);
  };

  while (!c.done()) {
    char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\v' ||
        ch == '\f') {
      c.advance();
      continue;
    }
    if (ch == '/' && c.peek(1) == '/') {
      size_t begin = c.pos;
      while (!c.done() && c.peek() != '\n') c.advance();
      pending_comments.push_back(text.substr(begin, c.pos - begin));
      continue;
    }
    if (ch == '/' && c.peek(1) == '*') {
      size_t begin = c.pos;
      int line = c.line, col = c.col;
      c.advance();
      c.advance();
      while (!(c.peek() == '*' && c.peek(1) == '/')) {
        if (c.done()) {
          SourceSpan s;
          s.file = file;
          s.line = line;
          s.col = col;
          s.length = 2;
          throw FatalError(s, "unterminated block comment");
        }
        c.advance();
      }
      c.advance();
      c.advance();
      pending_comments.push_back(text.substr(begin, c.pos - begin));
      continue;
    }

    Token tok;
    int line = c.line, col = c.col;
    size_t begin = c.pos;

    if (ident_start(ch)) {
      while (!c.done() && ident_char(c.peek())) c.advance();
      tok.text = text.substr(begin, c.pos - begin);
      tok.kind = is_keyword_text(tok.text) ? TokenKind::Keyword
                                           : TokenKind::Identifier;
      if (tok.text == "_Complex" || tok.text == "_Imaginary")
        throw FatalError(make_span(line, col, begin),
                         "complex types are outside the supported subset");
    } else if (std::isdigit((unsigned char)ch) ||
               (ch == '.' && std::isdigit((unsigned char)c.peek(1)))) {
      bool is_float = false;
      bool hex = false;
      if (ch == '0' && (c.peek(1) == 'x' || c.peek(1) == 'X')) {
        hex = true;
        c.advance();
        c.advance();
        while (std::isxdigit((unsigned char)c.peek())) c.advance();
      } else {
        while (std::isdigit((unsigned char)c.peek())) c.advance();
        if (c.peek() == '.') {
          is_float = true;
          c.advance();
          while (std::isdigit((unsigned char)c.peek())) c.advance();
        }
        if (c.peek() == 'e' || c.peek() == 'E') {
          is_float = true;
          c.advance();
          if (c.peek() == '+' || c.peek() == '-') c.advance();
          while (std::isdigit((unsigned char)c.peek())) c.advance();
        }
      }
      if (is_float) {
        if (c.peek() == 'f' || c.peek() == 'F' || c.peek() == 'l' ||
            c.peek() == 'L')
          c.advance();
      } else {
        // Integer suffixes: any order of u/U and l/L/ll/LL.
        while (c.peek() == 'u' || c.peek() == 'U' || c.peek() == 'l' ||
               c.peek() == 'L')
          c.advance();
      }
      if (!hex && ident_start(c.peek()))
        fatal_here("malformed numeric constant");
      tok.text = text.substr(begin, c.pos - begin);
      tok.kind = is_float ? TokenKind::FloatConst : TokenKind::IntConst;
    } else if (ch == '\'' || ch == '"') {
      char quote = ch;
      c.advance();
      while (c.peek() != quote) {
        if (c.done() || c.peek() == '\n')
          fatal_here(quote == '"' ? "unterminated string literal"
                                  : "unterminated character constant");
        if (c.peek() == '\\') c.advance();
        if (c.done()) fatal_here("unterminated literal");
        c.advance();
      }
      c.advance();
      tok.text = text.substr(begin, c.pos - begin);
      tok.kind = quote == '"' ? TokenKind::StringLit : TokenKind::CharConst;
      if (quote == '\'' && tok.text.size() < 3)
        throw FatalError(make_span(line, col, begin),
                         "empty character constant");
    } else {
      bool matched = false;
      for (const char* p : punct3) {
        if (text.compare(c.pos, 3, p) == 0) {
          c.advance();
          c.advance();
          c.advance();
          tok.text = p;
          matched = true;
          break;
        }
      }
      if (!matched) {
        for (const char* p : punct2) {
          if (text.compare(c.pos, 2, p) == 0) {
            c.advance();
            c.advance();
            tok.text = p;
            matched = true;
            break;
          }
        }
      }
      if (!matched && std::strchr(punct1, ch) != nullptr) {
        c.advance();
        tok.text = std::string(1, ch);
        matched = true;
      }
      if (!matched) fatal_here(std::string("stray character '") + ch + "'");
      tok.kind = TokenKind::Punct;
    }

    tok.span = make_span(line, col, begin);
    tok.leading_comments = std::move(pending_comments);
    pending_comments.clear();
    out.push_back(std::move(tok));
  }

  Token eof;
  eof.kind = TokenKind::Eof;
  eof.span.file = file;
  eof.span.line = c.line;
  eof.span.col = c.col;
  eof.span.length = 0;
  eof.leading_comments = std::move(pending_comments);
  out.push_back(std::move(eof));
  return out;
}

}  // namespace minicheck::frontend
