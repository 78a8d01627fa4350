#pragma once

#include <vector>

#include "minicheck/source.hpp"

namespace minicheck::frontend {

// Tokenizes one file's text. Comments become leading trivia on the next
// token; a trailing Eof token is always appended. Directives are not
// interpreted here: '#' is returned as an ordinary punctuator and the
// preprocessor decides whether it starts a directive line.
std::vector<Token> lex(const SourceManager& sm, FileId file);

bool is_keyword_text(std::string_view s);

}  // namespace minicheck::frontend
