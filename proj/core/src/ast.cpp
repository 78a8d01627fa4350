#include "minicheck/ast.hpp"

namespace minicheck {

void for_each_expr_in(Expr* root, const std::function<void(Expr*)>& fn) {
  if (!root) return;
  fn(root);
  for (Expr* k : root->kids) for_each_expr_in(k, fn);
}

namespace {

void walk_stmt(Stmt* s, const std::function<void(Expr*)>& fn) {
  if (!s) return;
  for_each_expr_in(s->expr, fn);
  for_each_expr_in(s->for_cond, fn);
  for (VarDecl* d : s->decls) for_each_expr_in(d->init, fn);
  walk_stmt(s->then_branch, fn);
  walk_stmt(s->else_branch, fn);
  walk_stmt(s->body, fn);
  walk_stmt(s->for_init, fn);
  walk_stmt(s->for_incr, fn);
  for (Stmt* k : s->items) walk_stmt(k, fn);
}

}  // namespace

void for_each_expr(const TranslationUnit& tu,
                   const std::function<void(Expr*)>& fn) {
  for (FunctionDef* f : tu.functions)
    if (f->body) walk_stmt(f->body, fn);
  for (VarDecl* g : tu.globals) for_each_expr_in(g->init, fn);
  for (EnumDef* e : tu.enum_defs)
    for (const Enumerator& en : e->enumerators) for_each_expr_in(en.init, fn);
}

}  // namespace minicheck
