#include "minicheck/effectless.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <tuple>

#include "minicheck/const_eval.hpp"

namespace minicheck::effectless {

const char* operation_kind_name(OperationKind k) {
  switch (k) {
    case OperationKind::NoEffectExprStatement:
      return "no-effect-expression-statement";
    case OperationKind::NeutralOperand:
      return "neutral-operand-operation";
    case OperationKind::DeadStore:
      return "dead-store";
    case OperationKind::NoEffectCall:
      return "no-effect-call-candidate";
  }
  return "?";
}

const char* justification_name(Justification j) {
  switch (j) {
    case Justification::MacroAbstraction: return "macro-abstraction";
    case Justification::SizeofAbstraction: return "sizeof-abstraction";
    case Justification::EnumSeries: return "enum-series";
    case Justification::LoopControl: return "loop-control";
    case Justification::ConfigFunction: return "config-function";
    case Justification::LedgerEntry: return "ledger-entry";
    case Justification::Unjustified: return "unjustified";
  }
  return "?";
}

namespace {

bool reads_volatile(const Expr* e) {
  return e->type && e->type->is_volatile && e->lvalue;
}

bool side_effect_free(const Expr* root) {
  bool free_ = true;
  for_each_expr_in(const_cast<Expr*>(root), [&](Expr* e) {
    switch (e->kind) {
      case ExprKind::Assign:
      case ExprKind::PostIncDec:
      case ExprKind::Call:
        free_ = false;
        return;
      case ExprKind::Unary:
        if (e->op == "++" || e->op == "--") free_ = false;
        return;
      default:
        if (reads_volatile(e)) free_ = false;
        return;
    }
  });
  return free_;
}

const Expr* strip_casts(const Expr* e) {
  while (e && e->kind == ExprKind::Cast) e = e->kids[0];
  return e;
}

std::uint64_t all_ones(int width) {
  if (width <= 0 || width >= 64) return ~0ull;
  return (1ull << width) - 1;
}

struct Detector {
  const sema::TypedUnit& typed;
  const frontend::PreprocessResult& pp;
  std::vector<Finding>& out;
  sema::ConstEnv env;

  Detector(const sema::TypedUnit& t, const frontend::PreprocessResult& p,
           std::vector<Finding>& o)
      : typed(t), pp(p), out(o) {
    env.use_symbols = true;
    env.const_values = &typed.const_locals;
  }

  // side: 0 = left, 1 = right, 2 = either (commutative identity).
  struct NeutralRule {
    const char* op;
    int side;
    enum Value { Zero, One, AllOnes } value;
  };

  void neutral_in(const Expr* root, const Stmt* stmt, const EnumDef* en,
                  int en_index) {
    static const NeutralRule rules[] = {
        {"+", 2, NeutralRule::Zero},   {"-", 1, NeutralRule::Zero},
        {"*", 2, NeutralRule::One},    {"/", 1, NeutralRule::One},
        {"<<", 1, NeutralRule::Zero},  {">>", 1, NeutralRule::Zero},
        {"|", 2, NeutralRule::Zero},   {"&", 2, NeutralRule::AllOnes},
        {"^", 2, NeutralRule::Zero},
    };
    for_each_expr_in(const_cast<Expr*>(root), [&](Expr* e) {
      if (e->kind != ExprKind::Binary) return;
      for (const NeutralRule& r : rules) {
        if (e->op != r.op) continue;
        for (int side = 0; side < 2; ++side) {
          if (r.side != 2 && r.side != side) continue;
          const Expr* cand = e->kids[(std::size_t)side];
          auto v = sema::const_eval(cand, env);
          if (!v) continue;
          bool neutral = false;
          switch (r.value) {
            case NeutralRule::Zero: neutral = *v == 0; break;
            case NeutralRule::One: neutral = *v == 1; break;
            case NeutralRule::AllOnes: {
              int w = e->type && e->type->width ? e->type->width : 32;
              neutral =
                  (static_cast<std::uint64_t>(*v) & all_ones(w)) ==
                  all_ones(w);
              break;
            }
          }
          if (!neutral) continue;
          Finding f;
          f.kind = OperationKind::NeutralOperand;
          f.span = e->span();
          f.origin = origin_names(cand->tok.origin);
          f.detail = std::string("operand ") +
                     (side == 0 ? "left" : "right") + " of '" + e->op +
                     "' is neutral; the operation computes its other "
                     "operand";
          f.stmt = stmt;
          f.neutral_operand = cand;
          f.enum_ctx = en;
          f.enum_index = en_index;
          out.push_back(std::move(f));
          return;  // one finding per operator node
        }
      }
    });
  }

  void scan_stmt_exprs(const Stmt* s) {
    if (s->expr) neutral_in(s->expr, s, nullptr, -1);
    if (s->for_cond) neutral_in(s->for_cond, s, nullptr, -1);
    if (s->kind == StmtKind::Decl)
      for (const VarDecl* vd : s->decls)
        if (vd->init) neutral_in(vd->init, s, nullptr, -1);
  }

  void run(const std::vector<FunctionFacts>& flow_facts) {
    const TranslationUnit& tu = *typed.tu;

    for (const FunctionDef* fn : tu.functions) {
      if (!fn->is_definition) continue;
      for (const Stmt* s : fn->stmts) {
        scan_stmt_exprs(s);

        if (s->kind == StmtKind::Expr && s->expr &&
            side_effect_free(s->expr)) {
          Finding f;
          f.kind = OperationKind::NoEffectExprStatement;
          f.span = s->span();
          f.origin = origin_names(s->tok.origin);
          f.detail =
              "expression statement has no side effect and its value is "
              "unused";
          f.stmt = s;
          out.push_back(std::move(f));
        }

        // Calls to empty-bodied unit functions.
        auto scan_calls = [&](Expr* e) {
          if (e->kind != ExprKind::Call) return;
          const Expr* callee = e->kids[0];
          if (callee->kind != ExprKind::Ident || !callee->sym) return;
          const FunctionDef* def = callee->sym->fn;
          if (!def || !def->is_definition || !def->body) return;
          if (!def->body->items.empty()) return;
          Finding f;
          f.kind = OperationKind::NoEffectCall;
          f.span = e->span();
          f.origin = origin_names(e->tok.origin);
          f.detail = "call to '" + def->name + "', whose body is empty";
          f.stmt = s;
          f.callee = def;
          out.push_back(std::move(f));
        };
        if (s->expr) for_each_expr_in(s->expr, scan_calls);
        if (s->for_cond) for_each_expr_in(s->for_cond, scan_calls);
        if (s->kind == StmtKind::Decl)
          for (const VarDecl* vd : s->decls)
            if (vd->init) for_each_expr_in(vd->init, scan_calls);
      }
    }

    for (const VarDecl* g : tu.globals)
      if (g->init) neutral_in(g->init, nullptr, nullptr, -1);

    for (const EnumDef* en : tu.enum_defs) {
      for (std::size_t i = 0; i < en->enumerators.size(); ++i) {
        const Expr* init = en->enumerators[i].init;
        if (init) neutral_in(init, nullptr, en, (int)i);
      }
    }

    for (const FunctionFacts& ff : flow_facts) {
      if (!ff.facts) continue;
      for (const auto& [stmt_id, sym] : ff.facts->dead_stores) {
        const Stmt* s = tu.all_stmts[(std::size_t)stmt_id];
        Finding f;
        f.kind = OperationKind::DeadStore;
        f.span = s->span();
        f.origin = origin_names(s->tok.origin);
        f.detail = "value stored to '" + sym->name + "' is never read";
        f.stmt = s;
        f.symbol = sym;
        out.push_back(std::move(f));
      }
    }
  }
};

}  // namespace

std::vector<Finding> detect(const sema::TypedUnit& typed,
                            const std::vector<FunctionFacts>& flow_facts,
                            const frontend::PreprocessResult& pp) {
  std::vector<Finding> out;
  Detector d(typed, pp, out);
  d.run(flow_facts);

  // A fully effect-free expression statement built around a neutral
  // operation reports once, as the neutral operand.
  std::set<const Stmt*> neutral_stmts;
  for (const Finding& f : out)
    if (f.kind == OperationKind::NeutralOperand && f.stmt)
      neutral_stmts.insert(f.stmt);
  out.erase(std::remove_if(out.begin(), out.end(),
                           [&](const Finding& f) {
                             return f.kind ==
                                        OperationKind::NoEffectExprStatement &&
                                    neutral_stmts.count(f.stmt);
                           }),
            out.end());

  std::stable_sort(out.begin(), out.end(),
                   [](const Finding& a, const Finding& b) {
                     return std::make_tuple(a.span.file, a.span.line,
                                            a.span.col, (int)a.kind) <
                            std::make_tuple(b.span.file, b.span.line,
                                            b.span.col, (int)b.kind);
                   });
  return out;
}

std::vector<LedgerEntry> parse_ledger(const std::string& text,
                                      const std::string& ledger_name) {
  std::vector<LedgerEntry> entries;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;

    SourceSpan at;
    at.line = lineno;
    auto fail = [&](const char* why) -> FatalError {
      return FatalError(at, ledger_name + ":" + std::to_string(lineno) +
                                ": malformed ledger entry: " + why);
    };

    std::size_t c1 = line.find(':', first);
    if (c1 == std::string::npos) throw fail("expected FILE:LINE:CHECK: text");
    std::size_t c2 = line.find(':', c1 + 1);
    if (c2 == std::string::npos) throw fail("expected FILE:LINE:CHECK: text");
    std::size_t c3 = line.find(':', c2 + 1);
    if (c3 == std::string::npos) throw fail("expected FILE:LINE:CHECK: text");

    LedgerEntry e;
    e.file = line.substr(first, c1 - first);
    std::string num = line.substr(c1 + 1, c2 - c1 - 1);
    if (num.empty() ||
        num.find_first_not_of("0123456789") != std::string::npos)
      throw fail("line number is not a positive integer");
    e.line = std::stoi(num);
    if (e.line <= 0) throw fail("line number is not a positive integer");
    e.check_id = line.substr(c2 + 1, c3 - c2 - 1);
    if (e.check_id.empty()) throw fail("empty check id");
    std::size_t rs = line.find_first_not_of(" \t", c3 + 1);
    e.reason = rs == std::string::npos ? "" : line.substr(rs);
    if (e.reason.empty()) throw fail("empty reason text");
    entries.push_back(std::move(e));
  }
  return entries;
}

namespace {

std::string basename_of(const std::string& path) {
  std::size_t p = path.find_last_of('/');
  return p == std::string::npos ? path : path.substr(p + 1);
}

// Innermost while/do/for statement lexically containing `target`.
const Stmt* enclosing_loop(const FunctionDef* fn, const Stmt* target) {
  const Stmt* found = nullptr;
  std::vector<const Stmt*> loops;
  std::function<void(const Stmt*)> walk = [&](const Stmt* s) {
    if (!s || found) return;
    if (s == target) {
      if (!loops.empty()) found = loops.back();
      return;
    }
    bool is_loop = s->kind == StmtKind::While || s->kind == StmtKind::Do ||
                   s->kind == StmtKind::For;
    if (is_loop) loops.push_back(s);
    for (const Stmt* k : s->items) walk(k);
    walk(s->then_branch);
    walk(s->else_branch);
    walk(s->body);
    walk(s->for_init);
    walk(s->for_incr);
    if (is_loop && !found) loops.pop_back();
  };
  if (fn && fn->body) walk(fn->body);
  return found;
}

bool symbol_used_in(const Stmt* s, const Symbol* sym, const Stmt* skip) {
  if (!s) return false;
  if (s != skip) {
    flow::UseDef ud = flow::stmt_use_def(*s);
    for (Symbol* u : ud.uses)
      if (u == sym) return true;
  }
  for (const Stmt* k : s->items)
    if (symbol_used_in(k, sym, skip)) return true;
  return symbol_used_in(s->then_branch, sym, skip) ||
         symbol_used_in(s->else_branch, sym, skip) ||
         symbol_used_in(s->body, sym, skip) ||
         symbol_used_in(s->for_init, sym, skip) ||
         symbol_used_in(s->for_incr, sym, skip);
}

}  // namespace

void classify(std::vector<Finding>& findings, const sema::TypedUnit& typed,
              const frontend::PreprocessResult& pp,
              const std::vector<LedgerEntry>& ledger,
              const SourceManager& sm) {
  for (Finding& f : findings) {
    // (1) The decisive token came out of a macro: the neutral value is an
    // abstraction that happens to be neutral in this configuration.
    if (!f.origin.empty()) {
      f.justification = Justification::MacroAbstraction;
      continue;
    }

    // (2) sizeof that evaluates to 1 still documents a unit.
    if (f.kind == OperationKind::NeutralOperand) {
      const Expr* cand = strip_casts(f.neutral_operand);
      if (cand && (cand->kind == ExprKind::SizeofExpr ||
                   cand->kind == ExprKind::SizeofType)) {
        f.justification = Justification::SizeofAbstraction;
        continue;
      }
    }

    // (3) Enumerator shaped like its series siblings.
    if (f.kind == OperationKind::NeutralOperand && f.enum_ctx &&
        f.enum_index >= 0) {
      const Expr* own = f.enum_ctx->enumerators[(std::size_t)f.enum_index].init;
      int same_shape = 0;
      for (std::size_t i = 0; i < f.enum_ctx->enumerators.size(); ++i) {
        if ((int)i == f.enum_index) continue;
        const Expr* sib = f.enum_ctx->enumerators[i].init;
        if (sib && own && sib->kind == own->kind && sib->op == own->op)
          ++same_shape;
      }
      if (same_shape >= 2) {
        f.justification = Justification::EnumSeries;
        continue;
      }
    }

    // (4) Dead store whose symbol the enclosing loop reads elsewhere: the
    // value is loop-carried and only the last iteration wastes it.
    if (f.kind == OperationKind::DeadStore && f.stmt && f.stmt->fn) {
      const Stmt* loop = enclosing_loop(f.stmt->fn, f.stmt);
      if (loop && symbol_used_in(loop, f.symbol, f.stmt)) {
        f.justification = Justification::LoopControl;
        continue;
      }
    }

    // (5) Empty body that a different preprocessing configuration fills in.
    if (f.kind == OperationKind::NoEffectCall && f.callee &&
        f.callee->body) {
      int lo = f.callee->body->span().line;
      int hi = f.callee->body->close_span.valid()
                   ? f.callee->body->close_span.line
                   : lo;
      FileId file = f.callee->body->span().file;
      bool config = false;
      for (const SourceSpan& d : pp.conditional_lines)
        if (d.file == file && d.line >= lo && d.line <= hi) config = true;
      if (config) {
        f.justification = Justification::ConfigFunction;
        continue;
      }
    }

    // (6) A human wrote it down.
    const std::string file = sm.file_name(f.span.file);
    const std::string base = basename_of(file);
    bool matched = false;
    for (const LedgerEntry& e : ledger) {
      if (e.check_id != "effectless") continue;
      if (e.line != f.span.line) continue;
      if (e.file != file && e.file != base && basename_of(e.file) != base)
        continue;
      f.justification = Justification::LedgerEntry;
      f.ledger_entry = e.file + ":" + std::to_string(e.line) + ":effectless";
      matched = true;
      break;
    }
    if (matched) continue;

    f.justification = Justification::Unjustified;
  }
}

std::vector<Diagnostic> report(const std::vector<Finding>& findings,
                               ReportMode mode) {
  std::vector<Diagnostic> out;
  if (mode == ReportMode::Off) return out;
  for (const Finding& f : findings) {
    if (mode == ReportMode::Directive &&
        f.justification != Justification::Unjustified)
      continue;
    Diagnostic d;
    if (mode == ReportMode::Directive) {
      d.rule_id = "D-EFFECTLESS";
      d.relation = Relation::Exact;
      d.message = std::string(operation_kind_name(f.kind)) + ": " + f.detail;
    } else {
      d.rule_id = "R2.2";
      d.relation = Relation::UnderApprox;
      d.message = std::string(operation_kind_name(f.kind)) + ": " + f.detail;
      if (f.justification != Justification::Unjustified)
        d.message += std::string(" [justified: ") +
                     justification_name(f.justification) + "]";
    }
    d.check_id = "effectless";
    d.verdict = VerdictKind::Possible;
    d.span = f.span;
    d.origin = f.origin;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace minicheck::effectless
