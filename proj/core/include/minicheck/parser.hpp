#pragma once

#include <memory>
#include <vector>

#include "minicheck/ast.hpp"
#include "minicheck/source.hpp"

namespace minicheck::frontend {

// Builds the AST from a preprocessed token stream. Knows the builtin
// typedef names (size_t, the stdint widths, FILE) up front. Constructs
// types during parsing; name/type resolution of expressions happens later.
// Rejects constructs outside the supported subset with targeted messages.
// Statement ids are dense over the unit in lexical pre-order.
std::unique_ptr<TranslationUnit> parse(const std::vector<Token>& tokens);

}  // namespace minicheck::frontend
