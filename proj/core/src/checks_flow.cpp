#include <functional>

#include "minicheck/checks.hpp"
#include "minicheck/const_eval.hpp"

namespace minicheck::checks {

namespace {

Diagnostic make(const char* rule, const char* check, VerdictKind v,
                Relation rel, const Token& tok, std::string msg) {
  Diagnostic d;
  d.rule_id = rule;
  d.check_id = check;
  d.verdict = v;
  d.relation = rel;
  d.span = tok.span;
  d.message = std::move(msg);
  d.origin = origin_names(tok.origin);
  return d;
}

Diagnostic make_at(const char* rule, const char* check, VerdictKind v,
                   Relation rel, SourceSpan span, std::string msg) {
  Diagnostic d;
  d.rule_id = rule;
  d.check_id = check;
  d.verdict = v;
  d.relation = rel;
  d.span = span;
  d.message = std::move(msg);
  return d;
}

}  // namespace

// R9.1: reading an uninitialized automatic object is undefined behavior and
// statically undecidable in general. The strict approximation requires every
// automatic object to be initialized where it is declared; the heuristic one
// only reports reads the assignment analysis cannot prove safe.
void check_init_at_decl(const CheckInput& in, std::vector<Diagnostic>& out) {
  if (in.profile == Profile::Strict) {
    for (const FunctionDef* fn : in.typed.tu->functions) {
      if (!fn->is_definition) continue;
      for (const Stmt* s : fn->stmts) {
        if (s->kind != StmtKind::Decl) continue;
        for (const VarDecl* vd : s->decls) {
          if (vd->init || !vd->sym) continue;
          if (!vd->sym->is_local_object()) continue;
          if (vd->sym->kind == Symbol::Kind::Parameter) continue;
          out.push_back(make("R9.1", "init-at-decl-r9-1",
                             VerdictKind::Definite, Relation::OverApprox,
                             vd->name_tok,
                             "'" + vd->name +
                                 "' has no initializer at its declaration"));
        }
      }
    }
    return;
  }

  if (!in.functions) return;
  for (const AnalyzedFunction& af : *in.functions) {
    auto span_of = [&](int stmt_id) {
      return in.typed.tu->all_stmts[stmt_id]->span();
    };
    for (const auto& [stmt_id, sym] : af.facts.maybe_uninit_reads) {
      out.push_back(make_at("R9.1", "init-at-decl-r9-1",
                            VerdictKind::Possible, Relation::OverApprox,
                            span_of(stmt_id),
                            "'" + sym->name +
                                "' may be read before it is assigned"));
    }
    for (const auto& [stmt_id, sym] : af.facts.unknown_reads) {
      out.push_back(make_at(
          "R9.1", "init-at-decl-r9-1", VerdictKind::Possible,
          Relation::OverApprox, span_of(stmt_id),
          "'" + sym->name +
              "' has no initializer and its element/alias writes are not "
              "tracked"));
    }
  }
}

namespace {

// Symbols assigned (must or may) by any statement in a subtree.
void collect_defs(const Stmt* s, std::set<Symbol*>& defs) {
  if (!s) return;
  flow::UseDef ud = flow::stmt_use_def(*s);
  defs.insert(ud.must_defs.begin(), ud.must_defs.end());
  defs.insert(ud.may_defs.begin(), ud.may_defs.end());
  for (const Stmt* k : s->items) collect_defs(k, defs);
  collect_defs(s->then_branch, defs);
  collect_defs(s->else_branch, defs);
  collect_defs(s->body, defs);
  collect_defs(s->for_init, defs);
  collect_defs(s->for_incr, defs);
}

// True when every identifier in `e` is safe to treat as fixed for the whole
// loop: enumerators, or objects neither assigned in the loop nor reachable
// through a pointer.
bool loop_invariant_expr(const Expr* e, const std::set<Symbol*>& loop_defs) {
  bool ok = true;
  for_each_expr_in(const_cast<Expr*>(e), [&](Expr* n) {
    switch (n->kind) {
      case ExprKind::Assign:
      case ExprKind::PostIncDec:
      case ExprKind::Call:
        ok = false;
        return;
      case ExprKind::Unary:
        if (n->op == "++" || n->op == "--") ok = false;
        return;
      case ExprKind::Ident: {
        Symbol* s = n->sym;
        if (!s) return;
        if (s->kind == Symbol::Kind::Enumerator) return;
        if (s->kind == Symbol::Kind::Function) return;  // sizeof only
        if (loop_defs.count(s) || s->address_taken ||
            s->is_volatile_qualified())
          ok = false;
        return;
      }
      default:
        return;
    }
  });
  return ok;
}

const Expr* strip_casts_e(const Expr* e) {
  while (e && e->kind == ExprKind::Cast) e = e->kids[0];
  return e;
}

bool is_ident_of(const Expr* e, const Symbol* sym) {
  return e && e->kind == ExprKind::Ident && e->sym == sym;
}

bool is_int_const(const Expr* e, const sema::TypedUnit& typed) {
  sema::ConstEnv env;
  env.use_symbols = true;
  env.const_values = &typed.const_locals;
  return sema::const_eval(e, env).has_value();
}

}  // namespace

// R14.1 / R14.2: a for loop is accepted only in the determinate shape: one
// integer counter, initialized in the init clause, compared against a
// loop-invariant bound, stepped by an integer constant, and left alone by
// the body. The first failed clause is reported; later clauses would often
// fail for the same cause.
void check_determinate_for(const CheckInput& in, std::vector<Diagnostic>& out) {
  auto flag2 = [&](const Stmt* where, const std::string& msg) {
    out.push_back(make("R14.2", "determinate-for-r14-1-2",
                       VerdictKind::Definite, Relation::OverApprox,
                       where->tok, msg));
  };

  for (const FunctionDef* fn : in.typed.tu->functions) {
    if (!fn->is_definition) continue;
    for (const Stmt* s : fn->stmts) {
      if (s->kind != StmtKind::For) continue;

      // Clause 1: the init clause establishes exactly one local counter.
      Symbol* counter = nullptr;
      const Stmt* init = s->for_init;
      if (init && init->kind == StmtKind::Decl && init->decls.size() == 1 &&
          init->decls[0]->init && init->decls[0]->sym &&
          init->decls[0]->sym->is_local_object()) {
        counter = init->decls[0]->sym;
      } else if (init && init->kind == StmtKind::Expr &&
                 init->expr->kind == ExprKind::Assign && init->expr->op == "=" &&
                 init->expr->kids[0]->kind == ExprKind::Ident &&
                 init->expr->kids[0]->sym &&
                 init->expr->kids[0]->sym->is_local_object()) {
        counter = init->expr->kids[0]->sym;
      }
      if (!counter) {
        flag2(s, "for loop does not initialize a single local counter");
        continue;
      }

      // Clause 2: integer counter; floating counters are their own rule.
      const Type* ct = counter->type;
      if (ct && ct->is_floating()) {
        out.push_back(make("R14.1", "determinate-for-r14-1-2",
                           VerdictKind::Definite, Relation::OverApprox,
                           s->tok,
                           "loop counter '" + counter->name +
                               "' has essentially floating type"));
        continue;
      }
      if (!ct || !ct->is_arith_integer() || ct->is_bool) {
        flag2(s, "loop counter '" + counter->name +
                     "' is not an integer object");
        continue;
      }

      std::set<Symbol*> loop_defs;
      collect_defs(s->body, loop_defs);
      collect_defs(s->for_incr, loop_defs);

      // Clause 3: condition compares the counter against an invariant bound.
      const Expr* cond = s->for_cond;
      const Expr* bound = nullptr;
      if (cond && cond->kind == ExprKind::Binary &&
          (cond->op == "<" || cond->op == "<=" || cond->op == ">" ||
           cond->op == ">=")) {
        if (is_ident_of(cond->kids[0], counter))
          bound = cond->kids[1];
        else if (is_ident_of(cond->kids[1], counter))
          bound = cond->kids[0];
      }
      if (!bound) {
        flag2(s, "loop condition does not compare the counter '" +
                     counter->name + "' with <, <=, > or >=");
        continue;
      }
      if (!loop_invariant_expr(bound, loop_defs)) {
        flag2(s, "loop bound is not invariant across the loop");
        continue;
      }

      // Clause 4: the increment steps the counter by an integer constant.
      const Expr* inc = (s->for_incr && s->for_incr->expr)
                            ? s->for_incr->expr
                            : nullptr;
      bool inc_ok = false;
      if (inc) {
        if ((inc->kind == ExprKind::PostIncDec ||
             (inc->kind == ExprKind::Unary &&
              (inc->op == "++" || inc->op == "--"))) &&
            is_ident_of(inc->kids[0], counter)) {
          inc_ok = true;
        } else if (inc->kind == ExprKind::Assign &&
                   (inc->op == "+=" || inc->op == "-=") &&
                   is_ident_of(inc->kids[0], counter) &&
                   is_int_const(inc->kids[1], in.typed)) {
          inc_ok = true;
        } else if (inc->kind == ExprKind::Assign && inc->op == "=" &&
                   is_ident_of(inc->kids[0], counter) &&
                   inc->kids[1]->kind == ExprKind::Binary &&
                   (inc->kids[1]->op == "+" || inc->kids[1]->op == "-")) {
          const Expr* l = inc->kids[1]->kids[0];
          const Expr* r = inc->kids[1]->kids[1];
          if (is_ident_of(l, counter) && is_int_const(r, in.typed))
            inc_ok = true;
          else if (inc->kids[1]->op == "+" && is_ident_of(r, counter) &&
                   is_int_const(l, in.typed))
            inc_ok = true;
        }
      }
      if (!inc_ok) {
        flag2(s, "loop increment does not step '" + counter->name +
                     "' by an integer constant");
        continue;
      }

      // Clause 5: the body leaves the counter alone.
      std::set<Symbol*> body_defs;
      collect_defs(s->body, body_defs);
      if (body_defs.count(counter)) {
        const Stmt* at = s;
        std::function<const Stmt*(const Stmt*)> find =
            [&](const Stmt* t) -> const Stmt* {
          if (!t) return nullptr;
          flow::UseDef ud = flow::stmt_use_def(*t);
          for (Symbol* d : ud.must_defs)
            if (d == counter) return t;
          for (Symbol* d : ud.may_defs)
            if (d == counter) return t;
          for (const Stmt* k : t->items)
            if (const Stmt* r = find(k)) return r;
          if (const Stmt* r = find(t->then_branch)) return r;
          if (const Stmt* r = find(t->else_branch)) return r;
          if (const Stmt* r = find(t->body)) return r;
          if (const Stmt* r = find(t->for_init)) return r;
          if (const Stmt* r = find(t->for_incr)) return r;
          return nullptr;
        };
        if (const Stmt* hit = find(s->body)) at = hit;
        flag2(at, "loop counter '" + counter->name +
                       "' is modified inside the loop body");
        continue;
      }

      // Clause 6: no address-taking of the counter inside the loop.
      const Expr* addr = nullptr;
      auto scan_addr = [&](Expr* n) {
        if (!addr && n->kind == ExprKind::Unary && n->op == "&" &&
            is_ident_of(n->kids[0], counter))
          addr = n;
      };
      std::function<void(const Stmt*)> walk_stmts = [&](const Stmt* t) {
        if (!t) return;
        if (t->expr) for_each_expr_in(t->expr, scan_addr);
        if (t->for_cond) for_each_expr_in(t->for_cond, scan_addr);
        if (t->kind == StmtKind::Decl)
          for (const VarDecl* vd : t->decls)
            if (vd->init) for_each_expr_in(vd->init, scan_addr);
        for (const Stmt* k : t->items) walk_stmts(k);
        walk_stmts(t->then_branch);
        walk_stmts(t->else_branch);
        walk_stmts(t->body);
        walk_stmts(t->for_init);
        walk_stmts(t->for_incr);
      };
      walk_stmts(s->body);
      if (addr) {
        out.push_back(make("R14.2", "determinate-for-r14-1-2",
                           VerdictKind::Definite, Relation::OverApprox,
                           addr->tok,
                           "address of loop counter '" + counter->name +
                               "' is taken inside the loop"));
        continue;
      }
    }
  }
}

// R17.2: recursion. Direct cycles are decided exactly on the call graph;
// calls through function pointers cannot be resolved, so they stay possible
// findings unless the unit gives no way to form a function pointer at all.
void check_no_recursion(const CheckInput& in, std::vector<Diagnostic>& out) {
  if (!in.callgraph) return;
  const flow::CallGraph& cg = *in.callgraph;

  for (const std::vector<Symbol*>& scc : cg.sccs) {
    bool cyclic = scc.size() > 1;
    if (scc.size() == 1) {
      Symbol* s = scc[0];
      cyclic = cg.recursive.count(s) != 0;
    }
    if (!cyclic) continue;
    std::string cycle;
    for (Symbol* m : scc) {
      if (!cycle.empty()) cycle += " -> ";
      cycle += m->name;
    }
    cycle += " -> " + scc.front()->name;
    for (Symbol* m : scc) {
      if (!m->fn || !m->fn->is_definition) continue;
      out.push_back(make("R17.2", "no-recursion-r17-2",
                         VerdictKind::Definite, Relation::OverApprox,
                         m->fn->name_tok,
                         scc.size() == 1
                             ? "function '" + m->name + "' calls itself"
                             : "function '" + m->name +
                                   "' participates in the recursion cycle " +
                                   cycle));
    }
  }

  bool any_fn_address_taken = false;
  for (Symbol* s : cg.nodes)
    if (s->address_taken) any_fn_address_taken = true;
  if (in.profile == Profile::Strict || any_fn_address_taken) {
    for (const flow::IndirectSite& site : cg.indirect_sites) {
      out.push_back(make_at(
          "R17.2", "no-recursion-r17-2", VerdictKind::Possible,
          Relation::OverApprox, site.span,
          "call through a function pointer cannot be shown recursion-free"));
    }
  }
}

namespace {

// The errno-setting call inside a statement's expressions, or null.
const Expr* errno_setting_call(const Stmt* s) {
  const Expr* found = nullptr;
  auto scan = [&](Expr* e) {
    if (found || e->kind != ExprKind::Call) return;
    const Expr* callee = e->kids[0];
    if (callee->kind == ExprKind::Ident && callee->sym &&
        callee->sym->traits.errno_setting)
      found = e;
  };
  if (s->expr) for_each_expr_in(s->expr, scan);
  if (s->kind == StmtKind::Decl)
    for (const VarDecl* vd : s->decls)
      if (vd->init) for_each_expr_in(vd->init, scan);
  return found;
}

// Symbol a statement assigns via plain `x = ...` or `T x = ...`, or null.
Symbol* plainly_assigned(const Stmt* s) {
  if (s->kind == StmtKind::Expr && s->expr &&
      s->expr->kind == ExprKind::Assign && s->expr->op == "=" &&
      s->expr->kids[0]->kind == ExprKind::Ident)
    return s->expr->kids[0]->sym;
  if (s->kind == StmtKind::Decl && s->decls.size() == 1 && s->decls[0]->init)
    return s->decls[0]->sym;
  return nullptr;
}

// Every errno read in the statement's expressions, as tokens.
std::vector<const Expr*> errno_reads(const Stmt* s, const Symbol* errno_sym) {
  std::vector<const Expr*> reads;
  std::function<void(const Expr*)> visit = [&](const Expr* e) {
    if (!e) return;
    if (e->kind == ExprKind::Ident) {
      if (e->sym == errno_sym) reads.push_back(e);
      return;
    }
    if (e->kind == ExprKind::Assign && e->op == "=" &&
        is_ident_of(e->kids[0], errno_sym)) {
      visit(e->kids[1]);  // plain store to errno is not a read
      return;
    }
    for (const Expr* k : e->kids) visit(k);
  };
  if (s->expr) visit(s->expr);
  if (s->kind == StmtKind::Decl)
    for (const VarDecl* vd : s->decls)
      if (vd->init) visit(vd->init);
  return reads;
}

// `errno ==/!= anything` somewhere in the statement's expressions.
bool tests_errno(const Stmt* s, const Symbol* errno_sym) {
  bool found = false;
  auto scan = [&](Expr* e) {
    if (e->kind == ExprKind::Binary && (e->op == "==" || e->op == "!=") &&
        (is_ident_of(e->kids[0], errno_sym) ||
         is_ident_of(e->kids[1], errno_sym)))
      found = true;
  };
  if (s->expr) for_each_expr_in(s->expr, scan);
  if (s->kind == StmtKind::Decl)
    for (const VarDecl* vd : s->decls)
      if (vd->init) for_each_expr_in(vd->init, scan);
  return found;
}

bool is_errno_zeroing(const Stmt* s, const Symbol* errno_sym) {
  if (s->kind != StmtKind::Expr || !s->expr) return false;
  const Expr* e = s->expr;
  if (e->kind != ExprKind::Assign || e->op != "=") return false;
  if (!is_ident_of(e->kids[0], errno_sym)) return false;
  sema::ConstEnv env;
  auto v = sema::const_eval(e->kids[1], env);
  return v.has_value() && *v == 0;
}

}  // namespace

// R22.8 / R22.9 / R22.10 as one syntactic protocol over statement
// sequences: zero errno immediately before an errno-setting call, test it
// immediately after (one copy of the call result may sit in between), and
// never look at errno anywhere else. Within this restatement the decision
// is exact.
void check_errno_protocol(const CheckInput& in, std::vector<Diagnostic>& out) {
  const Symbol* errno_sym = in.typed.errno_sym;
  if (!errno_sym) return;

  for (const FunctionDef* fn : in.typed.tu->functions) {
    if (!fn->is_definition) continue;

    std::set<const Stmt*> licensed;

    for (const Stmt* comp : fn->stmts) {
      if (comp->kind != StmtKind::Compound) continue;
      const auto& items = comp->items;
      for (std::size_t i = 0; i < items.size(); ++i) {
        const Expr* call = errno_setting_call(items[i]);
        if (!call) continue;
        const std::string callee =
            call->kids[0]->sym ? call->kids[0]->sym->name : "?";

        if (i == 0 || !is_errno_zeroing(items[i - 1], errno_sym)) {
          out.push_back(make("R22.8", "errno-protocol-r22-8-9-10",
                             VerdictKind::Definite, Relation::Exact,
                             call->tok,
                             "errno is not set to 0 immediately before this "
                             "call to '" + callee + "'"));
        }

        std::size_t t = i + 1;
        Symbol* result = plainly_assigned(items[i]);
        if (t < items.size() && result) {
          // One plain copy of the call result may sit between call and test.
          Symbol* copied = plainly_assigned(items[t]);
          const Expr* rhs = nullptr;
          if (copied && items[t]->kind == StmtKind::Expr)
            rhs = strip_casts_e(items[t]->expr->kids[1]);
          else if (copied && items[t]->kind == StmtKind::Decl)
            rhs = strip_casts_e(items[t]->decls[0]->init);
          if (rhs && is_ident_of(rhs, result) && copied != result) ++t;
        }
        bool tested = t < items.size() && tests_errno(items[t], errno_sym);
        if (t < items.size() && !errno_reads(items[t], errno_sym).empty())
          licensed.insert(items[t]);
        if (!tested) {
          out.push_back(make("R22.9", "errno-protocol-r22-8-9-10",
                             VerdictKind::Definite, Relation::Exact,
                             call->tok,
                             "errno is not tested with == or != by the "
                             "statement following this call to '" +
                                 callee + "'"));
        }
      }
    }

    for (const Stmt* s : fn->stmts) {
      if (licensed.count(s)) continue;
      for (const Expr* r : errno_reads(s, errno_sym)) {
        out.push_back(make("R22.10", "errno-protocol-r22-8-9-10",
                           VerdictKind::Definite, Relation::Exact, r->tok,
                           "errno is consulted outside the licensed "
                           "position after an errno-setting call"));
      }
    }
  }
}

}  // namespace minicheck::checks
