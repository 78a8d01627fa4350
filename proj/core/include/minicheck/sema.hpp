#pragma once

#include <deque>
#include <map>
#include <memory>
#include <vector>

#include "minicheck/ast.hpp"
#include "minicheck/libc_profile.hpp"
#include "minicheck/source.hpp"
#include "minicheck/symbols.hpp"

namespace minicheck::sema {

// Name-resolved, fully typed translation unit. Owns the symbols; the AST
// stays owned by the TranslationUnit.
struct TypedUnit {
  TranslationUnit* tu = nullptr;
  const SourceManager* sm = nullptr;

  std::deque<Symbol> symbol_arena;
  std::vector<Symbol*> file_scope;  // declaration order

  // Synthetic conversion record: node -> type it implicitly converts to
  // (argument passing, assignment, arithmetic rebalancing, decay).
  std::map<const Expr*, const Type*> implicit_conv;

  // Per function: every definition (assignment/init/inc-dec) of each local,
  // by right-hand side; declarations without initializers contribute none.
  struct DefInfo {
    Expr* rhs = nullptr;     // null for ++/--/compound forms
    bool plain_assign = false;  // simple `x = rhs` or `x` init
  };
  std::map<const FunctionDef*, std::map<Symbol*, std::vector<DefInfo>>>
      def_table;

  // const-qualified integer locals with compile-time constant initializers.
  std::map<const Symbol*, std::int64_t> const_locals;

  Symbol* errno_sym = nullptr;

  Symbol* find_symbol(std::string_view name) const {
    for (Symbol* s : file_scope)
      if (s->name == name) return s;
    return nullptr;
  }
};

// Resolves every identifier, types every expression, records implicit
// conversions, resolves labels, and injects the library profile. Fatal on
// unknown names, call arity mismatches, sizeof over unsized types, and
// assignment to const.
std::unique_ptr<TypedUnit> resolve_and_type(TranslationUnit& tu,
                                            const SourceManager& sm);

// Classification of an expression against the character-classification
// domain (unsigned char values or EOF).
enum class EofDomain {
  EofCall,    // value comes straight from an EOF-producing call
  UcharSafe,  // provably within unsigned char (cast, type, or constant)
  Unsafe,
};

EofDomain eof_domain(const Expr* arg, const TypedUnit& typed);

}  // namespace minicheck::sema
