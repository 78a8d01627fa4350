#pragma once

#include <cstdint>
#include <string>

#include "minicheck/ast.hpp"
#include "minicheck/types.hpp"

namespace minicheck {

// Behavioral tags for library-profile functions; the checks key off these
// rather than off names.
struct LibcTraits {
  bool eof_producing = false;   // returns a character-or-EOF int
  bool ctype_consumer = false;  // argument must stay in the ctype domain
  bool errno_setting = false;   // participates in the errno protocol
  bool acquire = false;         // returns an owned resource handle
  bool release = false;         // releases the handle in arg0
  bool release_arg0 = false;    // consumes arg0 while returning a new handle
  bool string_search = false;   // const-preserving search (strchr family)
  bool mem_compare = false;     // byte comparison (memcmp)
  bool errno_object = false;    // the errno lvalue itself
};

struct Symbol {
  enum class Kind { Variable, Parameter, Function, Enumerator, TypedefName };

  Kind kind = Kind::Variable;
  std::string name;
  const Type* type = nullptr;
  Storage storage = Storage::None;
  SourceSpan decl_span;
  bool is_global = false;
  bool address_taken = false;  // set while typing: operand of unary '&'
  std::int64_t enum_value = 0;
  bool is_libc = false;
  LibcTraits traits;
  FunctionDef* fn = nullptr;  // function symbols: definition when present
  VarDecl* decl = nullptr;    // variable/parameter symbols
  int ordinal = 0;            // creation order, for deterministic output

  bool is_local_object() const {
    return (kind == Kind::Variable && !is_global &&
            storage == Storage::None) ||
           kind == Kind::Parameter;
  }
  bool is_volatile_qualified() const { return type && type->is_volatile; }
};

}  // namespace minicheck
