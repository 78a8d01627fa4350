#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "minicheck/diagnostics.hpp"
#include "minicheck/lexer.hpp"
#include "minicheck/literals.hpp"
#include "minicheck/preprocessor.hpp"
#include "minicheck/source.hpp"

using namespace minicheck;

namespace {

std::vector<Token> lex_text(SourceManager& sm, const std::string& text) {
  FileId id = sm.add_file("lex.c", text);
  return frontend::lex(sm, id);
}

std::vector<std::string> texts(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts)
    if (t.kind != TokenKind::Eof) out.push_back(t.text);
  return out;
}

frontend::PreprocessResult pp_text(SourceManager& sm, const std::string& text,
                                   frontend::PreprocessOptions opts = {}) {
  FileId id = sm.add_file("pp.c", text);
  return frontend::preprocess(sm, id, opts);
}

}  // namespace

TEST_CASE("lexer uses maximal munch on compound punctuators") {
  SourceManager sm;
  auto ts = lex_text(sm, "mask <<= 1U;");
  REQUIRE(ts.size() == 5);  // incl. Eof
  CHECK(ts[0].kind == TokenKind::Identifier);
  CHECK(ts[0].text == "mask");
  CHECK(ts[1].kind == TokenKind::Punct);
  CHECK(ts[1].text == "<<=");
  CHECK(ts[2].kind == TokenKind::IntConst);
  CHECK(ts[2].text == "1U");
  CHECK(ts[3].text == ";");
  CHECK(ts[4].kind == TokenKind::Eof);
}

TEST_CASE("lexer splits a+++b as a ++ + b") {
  SourceManager sm;
  auto ts = texts(lex_text(sm, "a+++b"));
  CHECK(ts == std::vector<std::string>{"a", "++", "+", "b"});
}

TEST_CASE("lexer splits x-->0 as x -- > 0") {
  SourceManager sm;
  auto ts = texts(lex_text(sm, "x-->0"));
  CHECK(ts == std::vector<std::string>{"x", "--", ">", "0"});
}

TEST_CASE("arrow and shift-assign are single tokens") {
  SourceManager sm;
  auto ts = texts(lex_text(sm, "p->q >>= r"));
  CHECK(ts == std::vector<std::string>{"p", "->", "q", ">>=", "r"});
}

TEST_CASE("keywords are classified, lookalike identifiers are not") {
  SourceManager sm;
  auto ts = lex_text(sm, "int intx");
  CHECK(ts[0].kind == TokenKind::Keyword);
  CHECK(ts[1].kind == TokenKind::Identifier);
  CHECK(ts[1].text == "intx");
}

TEST_CASE("comments attach to the following token as trivia") {
  SourceManager sm;
  auto ts = lex_text(sm, "/* note */ int x; // tail\n");
  CHECK(ts[0].text == "int");
  REQUIRE(ts[0].leading_comments.size() == 1);
  CHECK(ts[0].leading_comments[0].find("note") != std::string::npos);
}

TEST_CASE("file tokens carry valid spans that match the source text") {
  SourceManager sm;
  FileId id = sm.add_file("span.c", "int value = 42;\n");
  auto ts = frontend::lex(sm, id);
  for (const auto& t : ts) {
    if (t.kind == TokenKind::Eof) continue;
    REQUIRE(t.span.valid());
    CHECK(t.origin.empty());
    CHECK(sm.text_at(t.span) == t.text);
  }
  CHECK(ts[0].span.line == 1);
  CHECK(ts[0].span.col == 1);
  CHECK(ts[1].text == "value");
  CHECK(ts[1].span.col == 5);
}

TEST_CASE("self-referential macro expands once") {
  // #define A A must not loop: the inner A is painted and left alone.
  SourceManager sm;
  auto pp = pp_text(sm, "#define A A\nA\n");
  REQUIRE(pp.tokens.size() == 2);  // A + Eof
  CHECK(pp.tokens[0].kind == TokenKind::Identifier);
  CHECK(pp.tokens[0].text == "A");
  CHECK(origin_names(pp.tokens[0].origin) == std::vector<std::string>{"A"});
}

TEST_CASE("mutually recursive macros terminate") {
  SourceManager sm;
  auto pp = pp_text(sm, "#define A B\n#define B A\nA\n");
  REQUIRE(pp.tokens.size() == 2);
  CHECK(pp.tokens[0].text == "A");
}

TEST_CASE("origin chain lists macros innermost first") {
  SourceManager sm;
  auto pp = pp_text(sm, "#define INNER 1\n#define OUTER INNER\nint x = OUTER;\n");
  const Token* one = nullptr;
  for (const auto& t : pp.tokens)
    if (t.text == "1") one = &t;
  REQUIRE(one != nullptr);
  CHECK(origin_names(one->origin) ==
        std::vector<std::string>({"INNER", "OUTER"}));
  CHECK(origin_label(origin_names(one->origin)) == "INNER<-OUTER");
  // Expanded tokens keep the use-site span.
  CHECK(one->span.line == 3);
}

TEST_CASE("origin label for file tokens is 'direct'") {
  CHECK(origin_label({}) == "direct");
  CHECK(origin_label({"M"}) == "M");
}

TEST_CASE("function-like macro arguments are substituted") {
  SourceManager sm;
  auto pp = pp_text(sm, "#define SQ(v) ((v) * (v))\nint y = SQ(3);\n");
  auto ts = texts(pp.tokens);
  std::vector<std::string> want{"int", "y",  "=", "(", "(", "3", ")",
                                "*",   "(",  "3", ")", ")", ";"};
  CHECK(ts == want);
}

TEST_CASE("command-line defines act as a prologue") {
  SourceManager sm;
  frontend::PreprocessOptions opts;
  opts.defines = {"LIMIT=8", "FLAG"};
  auto pp = pp_text(sm, "#ifdef FLAG\nint n = LIMIT;\n#endif\n", opts);
  auto ts = texts(pp.tokens);
  CHECK(ts == std::vector<std::string>{"int", "n", "=", "8", ";"});
}

TEST_CASE("conditional directives are recorded even in skipped regions") {
  SourceManager sm;
  auto pp = pp_text(sm,
                    "#ifdef MISSING\n"
                    "#ifdef NESTED\n"
                    "#endif\n"
                    "#else\n"
                    "int k;\n"
                    "#endif\n");
  REQUIRE(pp.conditional_lines.size() == 5);
  std::vector<int> lines;
  for (const auto& s : pp.conditional_lines) lines.push_back(s.line);
  CHECK(lines == std::vector<int>({1, 2, 3, 4, 6}));
}

TEST_CASE("system includes are recorded, not resolved") {
  SourceManager sm;
  auto pp = pp_text(sm, "#include <stdio.h>\n#include <string.h>\nint x;\n");
  CHECK(pp.system_includes ==
        std::vector<std::string>({"stdio.h", "string.h"}));
  CHECK(texts(pp.tokens) == std::vector<std::string>{"int", "x", ";"});
}

// Integer constant typing follows the C ladder collapsed onto the fixed
// widths: decimal unsuffixed stays signed (int, then 64-bit), hex may
// land on unsigned at each width.
TEST_CASE("int literal typing: decimal") {
  auto a = frontend::parse_int_literal("1", {});
  CHECK(a.value == 1);
  CHECK(a.width == 32);
  CHECK_FALSE(a.is_unsigned);

  auto b = frontend::parse_int_literal("2147483647", {});
  CHECK(b.width == 32);
  CHECK_FALSE(b.is_unsigned);

  auto c = frontend::parse_int_literal("2147483648", {});
  CHECK(c.value == 2147483648ULL);
  CHECK(c.width == 64);
  CHECK_FALSE(c.is_unsigned);

  auto d = frontend::parse_int_literal("4294967295", {});
  CHECK(d.width == 64);
  CHECK_FALSE(d.is_unsigned);
}

TEST_CASE("int literal typing: hex prefers unsigned at each width") {
  auto a = frontend::parse_int_literal("0x7FFFFFFF", {});
  CHECK(a.width == 32);
  CHECK_FALSE(a.is_unsigned);

  auto b = frontend::parse_int_literal("0x80000000", {});
  CHECK(b.value == 0x80000000ULL);
  CHECK(b.width == 32);
  CHECK(b.is_unsigned);

  auto c = frontend::parse_int_literal("0xFFFFFFFF", {});
  CHECK(c.width == 32);
  CHECK(c.is_unsigned);

  auto d = frontend::parse_int_literal("0x100000000", {});
  CHECK(d.width == 64);
  CHECK_FALSE(d.is_unsigned);

  auto e = frontend::parse_int_literal("0xFFFFFFFFFFFFFFFF", {});
  CHECK(e.value == 0xFFFFFFFFFFFFFFFFULL);
  CHECK(e.width == 64);
  CHECK(e.is_unsigned);
}

TEST_CASE("int literal typing: suffixes") {
  auto a = frontend::parse_int_literal("1U", {});
  CHECK(a.width == 32);
  CHECK(a.is_unsigned);

  auto b = frontend::parse_int_literal("1L", {});
  CHECK(b.width == 64);
  CHECK_FALSE(b.is_unsigned);

  auto c = frontend::parse_int_literal("1UL", {});
  CHECK(c.width == 64);
  CHECK(c.is_unsigned);

  auto d = frontend::parse_int_literal("1ull", {});
  CHECK(d.width == 64);
  CHECK(d.is_unsigned);

  // U rides the ladder: too big for unsigned int, lands on unsigned 64.
  auto e = frontend::parse_int_literal("4294967296U", {});
  CHECK(e.width == 64);
  CHECK(e.is_unsigned);
}

TEST_CASE("int literal typing: octal") {
  auto a = frontend::parse_int_literal("0777", {});
  CHECK(a.value == 511);
  CHECK(a.width == 32);
  CHECK_FALSE(a.is_unsigned);

  auto b = frontend::parse_int_literal("0", {});
  CHECK(b.value == 0);
  CHECK(b.width == 32);
}

TEST_CASE("char constants are signed 8-bit values") {
  CHECK(frontend::parse_char_literal("'A'", {}) == 65);
  CHECK(frontend::parse_char_literal("'\\n'", {}) == 10);
  CHECK(frontend::parse_char_literal("'\\0'", {}) == 0);
  CHECK(frontend::parse_char_literal("'\\xFF'", {}) == -1);
  CHECK(frontend::parse_char_literal("'\\377'", {}) == -1);
  CHECK(frontend::parse_char_literal("'\\x7F'", {}) == 127);
}

TEST_CASE("string literals decode escapes") {
  CHECK(frontend::decode_string_literal("\"a\\tb\"", {}) == "a\tb");
  CHECK(frontend::decode_string_literal("\"\\\"\"", {}) == "\"");
  CHECK(frontend::decode_string_literal("\"\"", {}).empty());
}

TEST_CASE("float literals parse") {
  CHECK(frontend::parse_float_literal("1.5", {}) == 1.5);
  CHECK(frontend::parse_float_literal("1e3", {}) == 1000.0);
  CHECK(frontend::parse_float_literal("2.5f", {}) == 2.5);
}

TEST_CASE("quoted include resolves relative to the including file") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "minicheck_inc_test";
  fs::create_directories(dir);
  {
    std::ofstream h(dir / "header.h");
    h << "#define FROM_HEADER 7\n";
  }
  SourceManager sm;
  FileId id = sm.add_file((dir / "main.c").string(),
                          "#include \"header.h\"\nint v = FROM_HEADER;\n");
  auto pp = frontend::preprocess(sm, id);
  auto ts = texts(pp.tokens);
  CHECK(ts == std::vector<std::string>{"int", "v", "=", "7", ";"});
  CHECK(sm.file_count() == 2);
}

TEST_CASE("quoted include falls back to -I directories") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "minicheck_inc_dirs";
  fs::create_directories(dir);
  {
    std::ofstream h(dir / "lib.h");
    h << "#define WIDTH 4\n";
  }
  SourceManager sm;
  FileId id = sm.add_file("main.c", "#include \"lib.h\"\nint w = WIDTH;\n");
  frontend::PreprocessOptions opts;
  opts.include_paths = {dir.string()};
  auto pp = frontend::preprocess(sm, id, opts);
  CHECK(texts(pp.tokens) == std::vector<std::string>{"int", "w", "=", "4", ";"});
}

TEST_CASE("missing quoted include is a fatal front-end error") {
  SourceManager sm;
  FileId id = sm.add_file("main.c", "#include \"nope.h\"\n");
  CHECK_THROWS_AS(frontend::preprocess(sm, id), FatalError);
}

TEST_CASE("analyze_text reports front-end errors as FILE:LINE:COL") {
  try {
    mt::analyze("int x = ;\n", "bad.c");
    FAIL("expected FatalError");
  } catch (const FatalError& e) {
    std::string msg = e.what();
    CHECK(msg.rfind("bad.c:", 0) == 0);
    CHECK(msg.find(": error: ") != std::string::npos);
  }
}
