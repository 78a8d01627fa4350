#include "minicheck/callgraph.hpp"

#include <algorithm>
#include <functional>

namespace minicheck::flow {

namespace {

// Scans every evaluated expression of a function body, skipping sizeof
// operands, and reports calls and uses of function designators as values.
struct CallScan {
  CallGraph* cg;
  const FunctionDef* caller;
  Symbol* caller_sym;

  void scan(const Expr* e) {
    if (!e) return;
    if (e->kind == ExprKind::SizeofExpr || e->kind == ExprKind::SizeofType)
      return;
    if (e->kind == ExprKind::Call) {
      const Expr* callee = e->kids[0];
      if (callee->kind == ExprKind::Ident && callee->sym &&
          callee->sym->kind == Symbol::Kind::Function) {
        add_edge(callee->sym, e->span());
      } else {
        cg->indirect_sites.push_back({caller, e, e->span()});
        scan(callee);
      }
      for (std::size_t i = 1; i < e->kids.size(); ++i) scan(e->kids[i]);
      return;
    }
    if (e->kind == ExprKind::Ident && e->sym &&
        e->sym->kind == Symbol::Kind::Function) {
      e->sym->address_taken = true;
      return;
    }
    for (const Expr* k : e->kids) scan(k);
  }

  void scan_stmt(const Stmt* s) {
    scan(s->expr);
    scan(s->for_cond);
    for (const VarDecl* d : s->decls) scan(d->init);
  }

  void add_edge(Symbol* callee, SourceSpan span) {
    auto& list = cg->callees[caller_sym];
    if (std::find(list.begin(), list.end(), callee) == list.end())
      list.push_back(callee);
    cg->call_sites[caller_sym][callee].push_back(span);
  }
};

void tarjan(CallGraph& cg) {
  std::map<Symbol*, int> index, low;
  std::vector<Symbol*> stack;
  std::set<Symbol*> on_stack;
  int counter = 0;

  std::function<void(Symbol*)> strongconnect = [&](Symbol* v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    auto it = cg.callees.find(v);
    if (it != cg.callees.end()) {
      for (Symbol* w : it->second) {
        if (!index.count(w)) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.count(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
    }
    if (low[v] == index[v]) {
      std::vector<Symbol*> scc;
      Symbol* w = nullptr;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        scc.push_back(w);
      } while (w != v);
      cg.sccs.push_back(std::move(scc));
    }
  };

  for (Symbol* n : cg.nodes)
    if (!index.count(n)) strongconnect(n);

  for (const auto& scc : cg.sccs) {
    if (scc.size() > 1) {
      cg.recursive.insert(scc.begin(), scc.end());
      continue;
    }
    Symbol* only = scc.front();
    auto it = cg.callees.find(only);
    if (it != cg.callees.end() &&
        std::find(it->second.begin(), it->second.end(), only) !=
            it->second.end())
      cg.recursive.insert(only);
  }
}

}  // namespace

CallGraph build_call_graph(sema::TypedUnit& typed) {
  CallGraph cg;
  std::set<Symbol*> seen;
  for (Symbol* s : typed.file_scope) {
    if (s->kind != Symbol::Kind::Function) continue;
    if (seen.insert(s).second) cg.nodes.push_back(s);
  }

  for (FunctionDef* fn : typed.tu->functions) {
    if (!fn->is_definition || !fn->sym) continue;
    CallScan scan{&cg, fn, fn->sym};
    for (const Stmt* s : fn->stmts) scan.scan_stmt(s);
  }

  tarjan(cg);
  return cg;
}

}  // namespace minicheck::flow
