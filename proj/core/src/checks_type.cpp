#include "minicheck/checks.hpp"

#include <functional>

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

const Expr* strip_casts(const Expr* e) {
  while (e && e->kind == ExprKind::Cast) e = e->kids[0];
  return e;
}

bool is_opaque_ptr(const Type* t) {
  return t && t->is_pointer() && t->pointee->is_opaque();
}

// Pointee (for pointers) or element type (for arrays); null otherwise.
const Type* points_at(const Type* t) {
  if (!t) return nullptr;
  if (t->is_pointer() || t->is_array()) return t->pointee;
  return nullptr;
}

// Declared type of parameter slot `i` of the called function, looking
// through function pointers. Null when unknown (variadic tail, unspecified
// parameter list, arity overflow).
const Type* callee_param_type(const Expr* call, std::size_t i) {
  const Type* ft = call->kids[0]->type;
  if (ft && ft->is_pointer()) ft = ft->pointee;
  if (!ft || !ft->is_function() || ft->unspecified_params) return nullptr;
  if (i >= ft->params.size()) return nullptr;
  return ft->params[i];
}

bool param_pledges_const(const Expr* call, std::size_t i) {
  const Type* pt = callee_param_type(call, i);
  return pt && pt->is_pointer() && pt->pointee->is_const;
}

}  // namespace

// R22.5: a FILE object may only be reached through the standard functions;
// any direct use of the pointed-to object is flagged. The three dereference
// spellings cover reads, writes, and by-value copies alike, since a copy
// must spell a dereference first.
void check_file_deref(const CheckInput& in, std::vector<Diagnostic>& out) {
  for_each_expr(*in.typed.tu, [&](Expr* e) {
    const Expr* base = nullptr;
    const char* how = nullptr;
    if (e->kind == ExprKind::Unary && e->op == "*") {
      base = e->kids[0];
      how = "dereferenced";
    } else if (e->kind == ExprKind::Member && e->op == "->") {
      base = e->kids[0];
      how = "accessed through ->";
    } else if (e->kind == ExprKind::Subscript) {
      base = e->kids[0];
      how = "indexed";
    }
    if (!base || !is_opaque_ptr(base->type)) return;
    out.push_back(make(
        "R22.5", "file-deref-r22-5", VerdictKind::Definite,
        Relation::OverApprox, e->tok,
        "pointer to " + base->type->pointee->opaque_name + " is " + how +
            "; the pointed-to object must only be used through library "
            "calls"));
  });
}

// R21.13: arguments of the character classification functions must be
// representable as unsigned char or be EOF. Classification is type-based;
// anything not provably safe is flagged.
void check_eof_domain(const CheckInput& in, std::vector<Diagnostic>& out) {
  for_each_expr(*in.typed.tu, [&](Expr* e) {
    if (e->kind != ExprKind::Call) return;
    const Expr* callee = e->kids[0];
    if (callee->kind != ExprKind::Ident || !callee->sym) return;
    if (!callee->sym->traits.ctype_consumer) return;
    if (e->kids.size() < 2) return;
    const Expr* arg = e->kids[1];
    if (sema::eof_domain(arg, in.typed) != sema::EofDomain::Unsafe) return;
    out.push_back(make("R21.13", "eof-domain-r21-13", VerdictKind::Definite,
                       Relation::OverApprox, arg->tok,
                       "argument to '" + callee->sym->name +
                           "' is not provably an unsigned char value or "
                           "EOF"));
  });
}

// R21.14 and R21.19, both decided from declared pointee types.
void check_cstring(const CheckInput& in, std::vector<Diagnostic>& out) {
  // memcmp over plain char data: the buffers are being compared as strings.
  for_each_expr(*in.typed.tu, [&](Expr* e) {
    if (e->kind != ExprKind::Call) return;
    const Expr* callee = e->kids[0];
    if (callee->kind != ExprKind::Ident || !callee->sym) return;
    if (!callee->sym->traits.mem_compare) return;
    for (std::size_t i = 1; i < e->kids.size() && i <= 2; ++i) {
      const Type* at = points_at(strip_casts(e->kids[i])->type);
      if (at && at->is_plain_char_type()) {
        out.push_back(make(
            "R21.14", "cstring-r21-14-19", VerdictKind::Definite,
            Relation::OverApprox, e->kids[i]->tok,
            "memcmp argument has plain char pointee; string contents must "
            "not be compared with memcmp"));
        return;  // one finding per call is enough
      }
    }
  });

  // Search-function results over const data stored as modifiable pointers.
  auto flag_store = [&](const Expr* rhs, const Type* target_ty,
                        const Token& at) {
    rhs = strip_casts(rhs);
    if (!rhs || rhs->kind != ExprKind::Call) return;
    const Expr* callee = rhs->kids[0];
    if (callee->kind != ExprKind::Ident || !callee->sym) return;
    if (!callee->sym->traits.string_search) return;
    if (rhs->kids.size() < 2) return;
    const Type* searched = points_at(strip_casts(rhs->kids[1])->type);
    if (!searched || !searched->is_const) return;
    if (!target_ty || !target_ty->is_pointer()) return;
    if (target_ty->pointee->is_const) return;
    out.push_back(make(
        "R21.19", "cstring-r21-14-19", VerdictKind::Definite,
        Relation::OverApprox, at,
        "result of '" + callee->sym->name +
            "' over const-qualified data is stored as pointer to non-const"));
  };

  for_each_expr(*in.typed.tu, [&](Expr* e) {
    if (e->kind == ExprKind::Assign && e->op == "=")
      flag_store(e->kids[1], e->kids[0]->type, e->tok);
  });
  auto scan_decl = [&](const VarDecl* vd) {
    if (vd->init) flag_store(vd->init, vd->type, vd->name_tok);
  };
  for (const VarDecl* g : in.typed.tu->globals) scan_decl(g);
  for (const FunctionDef* fn : in.typed.tu->functions) {
    for (const Stmt* s : fn->stmts)
      if (s->kind == StmtKind::Decl)
        for (const VarDecl* vd : s->decls) scan_decl(vd);
  }
}

// R17.8: a parameter is treated as read-only for the whole body. Direct
// modification is flagged, and so is leaking its address anywhere a write
// could happen later.
void check_readonly_params(const CheckInput& in, std::vector<Diagnostic>& out) {
  auto is_param = [](const Expr* e) {
    return e && e->kind == ExprKind::Ident && e->sym &&
           e->sym->kind == Symbol::Kind::Parameter;
  };
  // &param after stripping casts, or null.
  auto addr_of_param = [&](const Expr* e) -> const Expr* {
    e = strip_casts(e);
    if (e && e->kind == ExprKind::Unary && e->op == "&" &&
        is_param(e->kids[0]))
      return e->kids[0];
    return nullptr;
  };

  for (const FunctionDef* fn : in.typed.tu->functions) {
    if (!fn->is_definition) continue;
    auto scan = [&](Expr* e) {
      if (e->kind == ExprKind::Assign && is_param(e->kids[0])) {
        out.push_back(make("R17.8", "readonly-params-r17-8",
                           VerdictKind::Definite, Relation::OverApprox,
                           e->kids[0]->tok,
                           "parameter '" + e->kids[0]->sym->name +
                               "' is modified"));
      }
      if ((e->kind == ExprKind::PostIncDec ||
           (e->kind == ExprKind::Unary && (e->op == "++" || e->op == "--"))) &&
          is_param(e->kids[0])) {
        out.push_back(make("R17.8", "readonly-params-r17-8",
                           VerdictKind::Definite, Relation::OverApprox,
                           e->kids[0]->tok,
                           "parameter '" + e->kids[0]->sym->name +
                               "' is modified"));
      }
      if (e->kind == ExprKind::Call) {
        for (std::size_t i = 1; i < e->kids.size(); ++i) {
          const Expr* p = addr_of_param(e->kids[i]);
          if (p && !param_pledges_const(e, i - 1)) {
            out.push_back(make(
                "R17.8", "readonly-params-r17-8", VerdictKind::Definite,
                Relation::OverApprox, e->kids[i]->tok,
                "address of parameter '" + p->sym->name +
                    "' passed where the callee may write through it"));
          }
        }
      }
      if (e->kind == ExprKind::Assign && e->op == "=") {
        const Expr* p = addr_of_param(e->kids[1]);
        if (p) {
          out.push_back(make("R17.8", "readonly-params-r17-8",
                             VerdictKind::Definite, Relation::OverApprox,
                             e->kids[1]->tok,
                             "address of parameter '" + p->sym->name +
                                 "' is stored"));
        }
      }
    };
    for (Stmt* s : fn->stmts) {
      if (s->expr) for_each_expr_in(s->expr, scan);
      if (s->for_cond) for_each_expr_in(s->for_cond, scan);
      if (s->kind == StmtKind::Decl) {
        for (const VarDecl* vd : s->decls) {
          if (!vd->init) continue;
          for_each_expr_in(vd->init, scan);
          const Expr* p = addr_of_param(vd->init);
          if (p) {
            out.push_back(make("R17.8", "readonly-params-r17-8",
                               VerdictKind::Definite, Relation::OverApprox,
                               vd->init->tok,
                               "address of parameter '" + p->sym->name +
                                   "' is stored"));
          }
        }
      }
    }
  }
}

namespace {

// Per-candidate facts for the const-candidate analysis.
struct PointerUse {
  bool written_through = false;
  bool escaped = false;
};

// Candidate pointers reachable from a value expression by address
// arithmetic: these are the pointers a store through `e` could write
// behind.
void pointer_roots(const Expr* e, std::map<Symbol*, PointerUse>& cands,
                   const std::function<void(Symbol*)>& hit) {
  if (!e) return;
  switch (e->kind) {
    case ExprKind::Ident:
      if (e->sym && cands.count(e->sym)) hit(e->sym);
      return;
    case ExprKind::Cast:
      pointer_roots(e->kids[0], cands, hit);
      return;
    case ExprKind::Binary:
      if (e->op == "+" || e->op == "-") {
        pointer_roots(e->kids[0], cands, hit);
        pointer_roots(e->kids[1], cands, hit);
      }
      return;
    case ExprKind::Conditional:
      pointer_roots(e->kids[1], cands, hit);
      pointer_roots(e->kids[2], cands, hit);
      return;
    default:
      return;
  }
}

// The candidate pointers whose pointee a store into lvalue `e` modifies.
void store_roots(const Expr* e, std::map<Symbol*, PointerUse>& cands,
                 const std::function<void(Symbol*)>& hit) {
  if (!e) return;
  switch (e->kind) {
    case ExprKind::Unary:
      if (e->op == "*") pointer_roots(e->kids[0], cands, hit);
      return;
    case ExprKind::Subscript:
      if (e->kids[0]->type && e->kids[0]->type->is_array())
        store_roots(e->kids[0], cands, hit);
      else
        pointer_roots(e->kids[0], cands, hit);
      return;
    case ExprKind::Member:
      if (e->op == "->")
        pointer_roots(e->kids[0], cands, hit);
      else
        store_roots(e->kids[0], cands, hit);
      return;
    default:
      return;
  }
}

}  // namespace

// R8.13: a pointer whose pointee is never written through it and whose
// value never leaves read-only contexts should have a const-qualified
// pointee. Escape is judged conservatively: any use that could let writes
// happen elsewhere disqualifies the candidate silently.
void check_const_candidates(const CheckInput& in, std::vector<Diagnostic>& out) {
  for (const FunctionDef* fn : in.typed.tu->functions) {
    if (!fn->is_definition) continue;

    std::map<Symbol*, PointerUse> cands;
    std::vector<Symbol*> order;
    auto consider = [&](Symbol* sym) {
      if (!sym || !sym->type || !sym->type->is_pointer()) return;
      const Type* pt = sym->type->pointee;
      if (pt->is_const || pt->is_function()) return;
      if (sym->address_taken) return;  // writes via aliases not tracked
      if (cands.emplace(sym, PointerUse{}).second) order.push_back(sym);
    };
    for (const VarDecl* p : fn->params) consider(p->sym);
    for (const Stmt* s : fn->stmts)
      if (s->kind == StmtKind::Decl)
        for (const VarDecl* vd : s->decls)
          if (vd->sym && vd->sym->is_local_object()) consider(vd->sym);
    if (cands.empty()) continue;

    auto mark_written = [&](Symbol* s) { cands[s].written_through = true; };
    auto mark_escaped = [&](Symbol* s) { cands[s].escaped = true; };

    // `escaping` says whether the value of `e` flows somewhere writes
    // could originate: stored, passed to a non-const parameter, returned.
    std::function<void(const Expr*, bool)> visit = [&](const Expr* e,
                                                       bool escaping) {
      if (!e) return;
      switch (e->kind) {
        case ExprKind::Ident:
          if (escaping && e->sym && cands.count(e->sym))
            mark_escaped(e->sym);
          return;
        case ExprKind::Cast:
          visit(e->kids[0], escaping);
          return;
        case ExprKind::Unary:
          if (e->op == "*" || e->op == "&") {
            visit(e->kids[0], false);
            return;
          }
          if (e->op == "++" || e->op == "--") {
            store_roots(e->kids[0], cands, mark_written);
            visit(e->kids[0], false);
            return;
          }
          visit(e->kids[0], false);
          return;
        case ExprKind::PostIncDec:
          store_roots(e->kids[0], cands, mark_written);
          visit(e->kids[0], false);
          return;
        case ExprKind::Member:
        case ExprKind::Subscript:
          for (const Expr* k : e->kids) visit(k, false);
          return;
        case ExprKind::Binary:
          if ((e->op == "+" || e->op == "-") && e->type &&
              e->type->is_pointer()) {
            visit(e->kids[0], escaping);
            visit(e->kids[1], escaping);
            return;
          }
          visit(e->kids[0], false);
          visit(e->kids[1], false);
          return;
        case ExprKind::Assign: {
          store_roots(e->kids[0], cands, mark_written);
          visit(e->kids[0], false);
          bool target_ptr = e->kids[0]->type && e->kids[0]->type->is_pointer();
          visit(e->kids[1], e->op == "=" && target_ptr);
          return;
        }
        case ExprKind::Conditional:
          visit(e->kids[0], false);
          visit(e->kids[1], escaping);
          visit(e->kids[2], escaping);
          return;
        case ExprKind::Call: {
          if (e->kids[0]->kind != ExprKind::Ident) visit(e->kids[0], false);
          for (std::size_t i = 1; i < e->kids.size(); ++i)
            visit(e->kids[i], !param_pledges_const(e, i - 1));
          return;
        }
        case ExprKind::InitList:
          for (const Expr* k : e->kids) visit(k, true);
          return;
        default:
          for (const Expr* k : e->kids) visit(k, escaping);
          return;
      }
    };

    for (const Stmt* s : fn->stmts) {
      bool returns_value = s->kind == StmtKind::Return && s->expr;
      if (s->expr) visit(s->expr, returns_value);
      if (s->for_cond) visit(s->for_cond, false);
      if (s->kind == StmtKind::Decl) {
        for (const VarDecl* vd : s->decls) {
          if (!vd->init) continue;
          bool ptr_target = vd->type && vd->type->is_pointer();
          visit(vd->init, ptr_target);
        }
      }
    }

    for (Symbol* sym : order) {
      const PointerUse& use = cands[sym];
      if (use.written_through || use.escaped) continue;
      TypeTable& types = in.typed.tu->types;
      const Type* suggested = types.pointer_to(
          types.qualified(sym->type->pointee, true, false));
      Token at;
      at.kind = TokenKind::Identifier;
      at.text = sym->name;
      at.span = sym->decl_span;
      out.push_back(make(
          "R8.13", "const-candidates-r8-13", VerdictKind::Definite,
          Relation::OverApprox, at,
          "'" + sym->name + "' never modifies its pointee; declare it as " +
              render_type(suggested)));
    }
  }
}

const std::vector<CheckDef>& all_checks() {
  static const std::vector<CheckDef> defs = {
      {"file-deref-r22-5", check_file_deref},
      {"readonly-params-r17-8", check_readonly_params},
      {"const-candidates-r8-13", check_const_candidates},
      {"eof-domain-r21-13", check_eof_domain},
      {"cstring-r21-14-19", check_cstring},
      {"init-at-decl-r9-1", check_init_at_decl},
      {"determinate-for-r14-1-2", check_determinate_for},
      {"no-recursion-r17-2", check_no_recursion},
      {"errno-protocol-r22-8-9-10", check_errno_protocol},
      {"stream-ownership-r22-1", check_stream_ownership},
  };
  return defs;
}

void run_checks(const CheckInput& in, const std::set<std::string>& enabled,
                std::vector<Diagnostic>& out) {
  for (const CheckDef& def : all_checks()) {
    if (!enabled.empty() && !enabled.count(def.id)) continue;
    def.run(in, out);
  }
}

}  // namespace minicheck::checks
