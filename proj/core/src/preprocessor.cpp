#include "minicheck/preprocessor.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "minicheck/lexer.hpp"
#include "minicheck/literals.hpp"

namespace minicheck::frontend {

namespace {

constexpr int max_include_depth = 32;

struct MacroDef {
  std::string name;
  bool function_like = false;
  std::vector<std::string> params;
  std::vector<Token> body;
  SourceSpan definition;
};

bool painted(const Token& t, const std::string& name) {
  return std::find(t.no_expand.begin(), t.no_expand.end(), name) !=
         t.no_expand.end();
}

// Constant-expression evaluator for #if lines. Operates on int64; any
// identifier left after `defined` handling and macro expansion counts as 0.
class CondParser {
 public:
  CondParser(const std::vector<Token>& toks, SourceSpan line)
      : toks_(toks), line_(line) {}

  std::int64_t parse() {
    std::int64_t v = ternary();
    if (pos_ < toks_.size())
      throw FatalError(toks_[pos_].span,
                       "trailing tokens in preprocessor condition");
    return v;
  }

 private:
  const std::vector<Token>& toks_;
  SourceSpan line_;
  size_t pos_ = 0;

  const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }
  bool eat(std::string_view p) {
    if (peek() && peek()->is_punct(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw FatalError(peek() ? peek()->span : line_, msg);
  }

  std::int64_t ternary() {
    std::int64_t c = logical_or();
    if (eat("?")) {
      std::int64_t a = ternary();
      if (!eat(":")) fail("expected ':' in preprocessor condition");
      std::int64_t b = ternary();
      return c ? a : b;
    }
    return c;
  }
  std::int64_t logical_or() {
    std::int64_t v = logical_and();
    while (eat("||")) v = (v != 0) | (logical_and() != 0);
    return v;
  }
  std::int64_t logical_and() {
    std::int64_t v = bit_or();
    while (eat("&&")) {
      std::int64_t r = bit_or();
      v = (v != 0) & (r != 0);
    }
    return v;
  }
  std::int64_t bit_or() {
    std::int64_t v = bit_xor();
    while (peek() && peek()->is_punct("|")) {
      ++pos_;
      v |= bit_xor();
    }
    return v;
  }
  std::int64_t bit_xor() {
    std::int64_t v = bit_and();
    while (eat("^")) v ^= bit_and();
    return v;
  }
  std::int64_t bit_and() {
    std::int64_t v = equality();
    while (peek() && peek()->is_punct("&")) {
      ++pos_;
      v &= equality();
    }
    return v;
  }
  std::int64_t equality() {
    std::int64_t v = relational();
    for (;;) {
      if (eat("=="))
        v = v == relational();
      else if (eat("!="))
        v = v != relational();
      else
        return v;
    }
  }
  std::int64_t relational() {
    std::int64_t v = shift();
    for (;;) {
      if (eat("<="))
        v = v <= shift();
      else if (eat(">="))
        v = v >= shift();
      else if (peek() && peek()->is_punct("<")) {
        ++pos_;
        v = v < shift();
      } else if (peek() && peek()->is_punct(">")) {
        ++pos_;
        v = v > shift();
      } else
        return v;
    }
  }
  std::int64_t shift() {
    std::int64_t v = additive();
    for (;;) {
      if (eat("<<"))
        v = static_cast<std::int64_t>(static_cast<std::uint64_t>(v)
                                      << (additive() & 63));
      else if (eat(">>"))
        v >>= (additive() & 63);
      else
        return v;
    }
  }
  std::int64_t additive() {
    std::int64_t v = multiplicative();
    for (;;) {
      if (eat("+"))
        v = static_cast<std::int64_t>(static_cast<std::uint64_t>(v) +
                                      static_cast<std::uint64_t>(multiplicative()));
      else if (eat("-"))
        v = static_cast<std::int64_t>(static_cast<std::uint64_t>(v) -
                                      static_cast<std::uint64_t>(multiplicative()));
      else
        return v;
    }
  }
  std::int64_t multiplicative() {
    std::int64_t v = unary();
    for (;;) {
      if (peek() && peek()->is_punct("*")) {
        ++pos_;
        v = static_cast<std::int64_t>(static_cast<std::uint64_t>(v) *
                                      static_cast<std::uint64_t>(unary()));
      } else if (eat("/")) {
        std::int64_t d = unary();
        if (d == 0) fail("division by zero in preprocessor condition");
        v /= d;
      } else if (eat("%")) {
        std::int64_t d = unary();
        if (d == 0) fail("division by zero in preprocessor condition");
        v %= d;
      } else
        return v;
    }
  }
  std::int64_t unary() {
    if (eat("!")) return unary() == 0;
    if (eat("~")) return ~unary();
    if (eat("-"))
      return static_cast<std::int64_t>(-static_cast<std::uint64_t>(unary()));
    if (eat("+")) return unary();
    return primary();
  }
  std::int64_t primary() {
    const Token* t = peek();
    if (!t) fail("unexpected end of preprocessor condition");
    if (t->is_punct("(")) {
      ++pos_;
      std::int64_t v = ternary();
      if (!eat(")")) fail("expected ')' in preprocessor condition");
      return v;
    }
    if (t->kind == TokenKind::IntConst) {
      ++pos_;
      return static_cast<std::int64_t>(
          parse_int_literal(t->text, t->span).value);
    }
    if (t->kind == TokenKind::CharConst) {
      ++pos_;
      return parse_char_literal(t->text, t->span);
    }
    if (t->kind == TokenKind::Identifier || t->kind == TokenKind::Keyword) {
      ++pos_;
      return 0;
    }
    fail("unexpected token in preprocessor condition");
  }
};

class Preprocessor {
 public:
  Preprocessor(SourceManager& sm, const PreprocessOptions& opts)
      : sm_(sm), opts_(opts) {}

  PreprocessResult run(FileId main_file) {
    apply_command_line_defines();
    process_file(main_file, 0);
    flush();
    Token eof;
    eof.kind = TokenKind::Eof;
    eof.span = main_eof_span_;
    result_.tokens.push_back(eof);
    return std::move(result_);
  }

 private:
  SourceManager& sm_;
  const PreprocessOptions& opts_;
  PreprocessResult result_;
  std::map<std::string, MacroDef> macros_;
  std::vector<Token> pending_;
  SourceSpan main_eof_span_;

  struct CondFrame {
    bool parent_active;
    bool active;
    bool taken;  // some branch of this #if chain already selected
    bool seen_else;
    SourceSpan span;
  };

  void apply_command_line_defines() {
    for (const std::string& d : opts_.defines) {
      std::string name = d, value = "1";
      if (auto eq = d.find('='); eq != std::string::npos) {
        name = d.substr(0, eq);
        value = d.substr(eq + 1);
      }
      FileId f = sm_.add_file("<command-line>", name + " " + value + "\n");
      std::vector<Token> toks = lex(sm_, f);
      if (toks.size() < 2 || toks[0].kind != TokenKind::Identifier)
        throw FatalError(toks.empty() ? SourceSpan{} : toks[0].span,
                         "malformed command-line define '" + d + "'");
      MacroDef def;
      def.name = toks[0].text;
      def.definition = toks[0].span;
      def.body.assign(toks.begin() + 1, toks.end() - 1);  // drop Eof
      macros_[def.name] = std::move(def);
    }
  }

  void flush() {
    if (pending_.empty()) return;
    std::vector<Token> in = std::move(pending_);
    pending_.clear();
    std::vector<Token> out = expand(in);
    result_.tokens.insert(result_.tokens.end(), out.begin(), out.end());
  }

  void process_file(FileId file, int depth) {
    if (depth > max_include_depth) {
      SourceSpan s;
      s.file = file;
      s.line = 1;
      s.col = 1;
      throw FatalError(s, "include depth limit exceeded");
    }
    std::vector<Token> toks = lex(sm_, file);
    if (depth == 0) main_eof_span_ = toks.back().span;

    std::vector<CondFrame> conds;
    auto active = [&]() {
      return conds.empty() || (conds.back().active && conds.back().parent_active);
    };

    size_t i = 0;
    size_t n = toks.size() - 1;  // exclude Eof
    while (i < n) {
      int line = toks[i].span.line;
      size_t line_end = i;
      while (line_end < n && toks[line_end].span.line == line) ++line_end;

      bool is_directive =
          toks[i].is_punct("#") &&
          (i == 0 || toks[i - 1].span.line != line);
      if (!is_directive) {
        if (active()) {
          for (size_t k = i; k < line_end; ++k) pending_.push_back(toks[k]);
        }
        i = line_end;
        continue;
      }

      std::vector<Token> dline(toks.begin() + static_cast<long>(i) + 1,
                               toks.begin() + static_cast<long>(line_end));
      SourceSpan dspan = toks[i].span;
      if (dline.empty()) {  // null directive
        i = line_end;
        continue;
      }
      const std::string& dname = dline[0].text;
      bool named = dline[0].kind == TokenKind::Identifier ||
                   dline[0].kind == TokenKind::Keyword;
      if (!named)
        throw FatalError(dline[0].span, "malformed preprocessor directive");

      if (dname == "if" || dname == "ifdef" || dname == "ifndef") {
        result_.conditional_lines.push_back(dspan);
        CondFrame f;
        f.parent_active = active();
        f.taken = false;
        f.seen_else = false;
        f.span = dspan;
        f.active = false;
        if (f.parent_active) {
          bool v = eval_condition(dname, dline, dspan);
          f.active = v;
          f.taken = v;
        }
        conds.push_back(f);
      } else if (dname == "elif") {
        result_.conditional_lines.push_back(dspan);
        if (conds.empty())
          throw FatalError(dspan, "#elif without matching #if");
        CondFrame& f = conds.back();
        if (f.seen_else) throw FatalError(dspan, "#elif after #else");
        f.active = false;
        if (f.parent_active && !f.taken) {
          bool v = eval_condition("if", dline, dspan);
          f.active = v;
          f.taken = v;
        }
      } else if (dname == "else") {
        result_.conditional_lines.push_back(dspan);
        if (conds.empty())
          throw FatalError(dspan, "#else without matching #if");
        CondFrame& f = conds.back();
        if (f.seen_else) throw FatalError(dspan, "duplicate #else");
        f.seen_else = true;
        f.active = f.parent_active && !f.taken;
        f.taken = true;
      } else if (dname == "endif") {
        result_.conditional_lines.push_back(dspan);
        if (conds.empty())
          throw FatalError(dspan, "#endif without matching #if");
        conds.pop_back();
      } else if (dname == "define") {
        if (active()) {
          flush();
          handle_define(dline, dspan);
        }
      } else if (dname == "undef") {
        if (active()) {
          flush();
          if (dline.size() < 2 || dline[1].kind != TokenKind::Identifier)
            throw FatalError(dspan, "#undef requires a macro name");
          macros_.erase(dline[1].text);
        }
      } else if (dname == "include") {
        if (active()) {
          flush();
          handle_include(dline, dspan, file, depth);
        }
      } else {
        if (active())
          throw FatalError(dspan, "unsupported directive '#" + dname + "'");
      }
      i = line_end;
    }

    if (!conds.empty())
      throw FatalError(conds.back().span,
                       "unterminated conditional directive");
  }

  bool eval_condition(const std::string& kind, std::vector<Token> dline,
                      SourceSpan dspan) {
    if (kind == "ifdef" || kind == "ifndef") {
      if (dline.size() < 2 || dline[1].kind != TokenKind::Identifier)
        throw FatalError(dspan, "#" + kind + " requires a macro name");
      bool defined = macros_.count(dline[1].text) > 0;
      return kind == "ifdef" ? defined : !defined;
    }
    // #if / #elif: resolve `defined`, expand, evaluate.
    std::vector<Token> resolved;
    for (size_t k = 1; k < dline.size(); ++k) {
      const Token& t = dline[k];
      if (t.is_ident("defined")) {
        std::string name;
        if (k + 1 < dline.size() &&
            dline[k + 1].kind == TokenKind::Identifier) {
          name = dline[k + 1].text;
          k += 1;
        } else if (k + 3 < dline.size() && dline[k + 1].is_punct("(") &&
                   dline[k + 2].kind == TokenKind::Identifier &&
                   dline[k + 3].is_punct(")")) {
          name = dline[k + 2].text;
          k += 3;
        } else {
          throw FatalError(t.span, "malformed 'defined' operator");
        }
        Token r;
        r.kind = TokenKind::IntConst;
        r.text = macros_.count(name) ? "1" : "0";
        r.span = t.span;
        resolved.push_back(std::move(r));
      } else {
        resolved.push_back(t);
      }
    }
    std::vector<Token> expanded = expand(resolved);
    if (expanded.empty())
      throw FatalError(dspan, "empty preprocessor condition");
    return CondParser(expanded, dspan).parse() != 0;
  }

  void handle_define(const std::vector<Token>& dline, SourceSpan dspan) {
    if (dline.size() < 2 || dline[1].kind != TokenKind::Identifier)
      throw FatalError(dspan, "#define requires a macro name");
    MacroDef def;
    def.name = dline[1].text;
    def.definition = dline[1].span;
    size_t body_start = 2;
    // Function-like only when '(' abuts the name.
    if (dline.size() > 2 && dline[2].is_punct("(") &&
        dline[2].span.col == dline[1].span.col + dline[1].span.length) {
      def.function_like = true;
      size_t k = 3;
      if (k < dline.size() && dline[k].is_punct(")")) {
        body_start = k + 1;
      } else {
        for (;;) {
          if (k >= dline.size() || dline[k].kind != TokenKind::Identifier)
            throw FatalError(dspan, "malformed macro parameter list");
          def.params.push_back(dline[k].text);
          ++k;
          if (k < dline.size() && dline[k].is_punct(",")) {
            ++k;
            continue;
          }
          if (k < dline.size() && dline[k].is_punct(")")) {
            body_start = k + 1;
            break;
          }
          throw FatalError(dspan, "malformed macro parameter list");
        }
      }
    }
    def.body.assign(dline.begin() + static_cast<long>(body_start), dline.end());
    for (const Token& t : def.body) {
      if (t.is_punct("#") || t.is_punct("##"))
        throw FatalError(t.span,
                         "'#' and '##' in macro bodies are not supported");
    }
    macros_[def.name] = std::move(def);
  }

  void handle_include(const std::vector<Token>& dline, SourceSpan dspan,
                      FileId includer, int depth) {
    if (dline.size() >= 2 && dline[1].kind == TokenKind::StringLit) {
      std::string name = dline[1].text.substr(1, dline[1].text.size() - 2);
      FileId f = resolve_include(name, includer, dline[1].span);
      process_file(f, depth + 1);
      return;
    }
    if (dline.size() >= 2 && dline[1].is_punct("<")) {
      std::string name;
      size_t k = 2;
      while (k < dline.size() && !dline[k].is_punct(">")) {
        name += dline[k].text;
        ++k;
      }
      if (k >= dline.size())
        throw FatalError(dspan, "malformed #include directive");
      result_.system_includes.push_back(name);
      return;
    }
    throw FatalError(dspan, "malformed #include directive");
  }

  FileId resolve_include(const std::string& name, FileId includer,
                         SourceSpan span) {
    namespace fs = std::filesystem;
    std::vector<fs::path> candidates;
    fs::path includer_dir = fs::path(sm_.file_name(includer)).parent_path();
    candidates.push_back(includer_dir / name);
    for (const std::string& dir : opts_.include_paths)
      candidates.push_back(fs::path(dir) / name);
    for (const fs::path& p : candidates) {
      std::ifstream in(p, std::ios::binary);
      if (!in) continue;
      std::ostringstream buf;
      buf << in.rdbuf();
      return sm_.add_file(p.string(), buf.str());
    }
    throw FatalError(span, "cannot open include file \"" + name + "\"");
  }

  // Macro expansion with rescanning. Body tokens take the use-site span and
  // append (macro, definition) to the invoking token's origin chain, so the
  // chain reads innermost-first. Paint accumulates along the same path and
  // stops self-reference.
  std::vector<Token> expand(const std::vector<Token>& input) {
    std::deque<Token> in(input.begin(), input.end());
    std::vector<Token> out;
    while (!in.empty()) {
      Token t = std::move(in.front());
      in.pop_front();
      if (t.kind != TokenKind::Identifier || painted(t, t.text) ||
          !macros_.count(t.text)) {
        out.push_back(std::move(t));
        continue;
      }
      const MacroDef& def = macros_.at(t.text);
      if (!def.function_like) {
        std::vector<Token> rep = substitute(def, {}, t);
        for (auto it = rep.rbegin(); it != rep.rend(); ++it)
          in.push_front(std::move(*it));
        continue;
      }
      if (in.empty() || !in.front().is_punct("(")) {
        out.push_back(std::move(t));  // name without call: plain identifier
        continue;
      }
      in.pop_front();  // '('
      std::vector<std::vector<Token>> args(1);
      int depth = 1;
      for (;;) {
        if (in.empty())
          throw FatalError(t.span, "unterminated invocation of macro '" +
                                       t.text + "'");
        Token a = std::move(in.front());
        in.pop_front();
        if (a.is_punct("(")) ++depth;
        if (a.is_punct(")")) {
          --depth;
          if (depth == 0) break;
        }
        if (a.is_punct(",") && depth == 1) {
          args.emplace_back();
          continue;
        }
        args.back().push_back(std::move(a));
      }
      if (def.params.empty() && args.size() == 1 && args[0].empty())
        args.clear();
      if (args.size() != def.params.size())
        throw FatalError(t.span, "macro '" + t.text + "' passed " +
                                     std::to_string(args.size()) +
                                     " arguments, expected " +
                                     std::to_string(def.params.size()));
      for (auto& arg : args) arg = expand(arg);
      std::vector<Token> rep = substitute(def, args, t);
      for (auto it = rep.rbegin(); it != rep.rend(); ++it)
        in.push_front(std::move(*it));
    }
    return out;
  }

  std::vector<Token> substitute(const MacroDef& def,
                                const std::vector<std::vector<Token>>& args,
                                const Token& use) {
    std::vector<Token> out;
    for (const Token& b : def.body) {
      if (b.kind == TokenKind::Identifier) {
        auto p = std::find(def.params.begin(), def.params.end(), b.text);
        if (p != def.params.end()) {
          const auto& arg = args[static_cast<size_t>(p - def.params.begin())];
          out.insert(out.end(), arg.begin(), arg.end());
          continue;
        }
      }
      Token t = b;
      t.span = use.span;
      t.origin.push_back(MacroLink{def.name, def.definition});
      t.origin.insert(t.origin.end(), use.origin.begin(), use.origin.end());
      t.no_expand.push_back(def.name);
      t.no_expand.insert(t.no_expand.end(), use.no_expand.begin(),
                         use.no_expand.end());
      out.push_back(std::move(t));
    }
    return out;
  }
};

}  // namespace

PreprocessResult preprocess(SourceManager& sm, FileId main_file,
                            const PreprocessOptions& opts) {
  return Preprocessor(sm, opts).run(main_file);
}

}  // namespace minicheck::frontend
