#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "minicheck/ast.hpp"

namespace minicheck::sema {

// Environment for integer-constant evaluation. Two resolution modes:
// during parsing (no symbols yet) identifiers resolve through
// `named_values`; after name resolution they resolve through Expr::sym,
// taking enumerator values directly and const-qualified integer locals
// from `const_values`.
struct ConstEnv {
  const std::map<std::string, std::int64_t>* named_values = nullptr;
  const std::map<const Symbol*, std::int64_t>* const_values = nullptr;
  bool use_symbols = false;
};

// Integer-constant expression value, nullopt when the expression is not
// compile-time constant. Deliberately strict: calls, volatile accesses,
// assignments, plain variables and floating operands all yield nullopt,
// and both arms of && / || / ?: must be constant. When node types are
// available the result is normalized to each node's width/signedness.
std::optional<std::int64_t> const_eval(const Expr* e, const ConstEnv& env);

}  // namespace minicheck::sema
