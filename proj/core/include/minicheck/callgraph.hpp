#pragma once

#include <map>
#include <set>
#include <vector>

#include "minicheck/ast.hpp"
#include "minicheck/sema.hpp"
#include "minicheck/symbols.hpp"

namespace minicheck::flow {

struct IndirectSite {
  const FunctionDef* caller = nullptr;
  const Expr* call = nullptr;
  SourceSpan span;
};

// Whole-unit call graph; nodes cover every declared or defined function.
// Direct edges come from calls through a plain function name; every other
// call lands in indirect_sites. Building it also marks every function whose
// designator is used as a value (address taken), since a set of candidate
// indirect callees is exactly the address-taken set.
struct CallGraph {
  std::vector<Symbol*> nodes;  // declaration order
  std::map<Symbol*, std::vector<Symbol*>> callees;  // deduped, stable order
  std::map<Symbol*, std::map<Symbol*, std::vector<SourceSpan>>> call_sites;
  std::vector<IndirectSite> indirect_sites;
  std::vector<std::vector<Symbol*>> sccs;  // every node is in exactly one
  std::set<Symbol*> recursive;  // member of a multi-node SCC or a self-loop

  bool is_recursive(Symbol* s) const { return recursive.count(s) != 0; }
};

CallGraph build_call_graph(sema::TypedUnit& typed);

}  // namespace minicheck::flow
