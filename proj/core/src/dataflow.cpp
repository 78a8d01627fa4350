#include "minicheck/dataflow.hpp"

#include <algorithm>
#include <map>

#include "minicheck/const_eval.hpp"

namespace minicheck::flow {

namespace {

void add_sym(std::vector<Symbol*>& v, Symbol* s) {
  if (!s || !s->is_local_object()) return;
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

// Walks one statement's expressions. `conditional` is true under the right
// operand of && / || and under ?: arms, where side effects may not happen.
struct Collector {
  UseDef ud;

  void use(Symbol* s) { add_sym(ud.uses, s); }
  void def(Symbol* s, bool conditional) {
    add_sym(conditional ? ud.may_defs : ud.must_defs, s);
  }

  void walk(const Expr* e, bool conditional) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::Ident:
        use(e->sym);
        break;
      case ExprKind::Assign: {
        const Expr* lhs = e->kids[0];
        walk(e->kids[1], conditional);
        if (lhs->kind == ExprKind::Ident) {
          if (e->op != "=") use(lhs->sym);  // compound forms read first
          def(lhs->sym, conditional);
        } else {
          walk_lvalue(lhs, conditional);
        }
        break;
      }
      case ExprKind::Unary:
        if (e->op == "&") {
          // Address computation: the object's value is not read.
          if (e->kids[0]->kind != ExprKind::Ident)
            walk_lvalue(e->kids[0], conditional);
        } else if (e->op == "++" || e->op == "--") {
          incdec(e->kids[0], conditional);
        } else if (e->op == "sizeof") {
          // unevaluated
        } else {
          walk(e->kids[0], conditional);
        }
        break;
      case ExprKind::PostIncDec:
        incdec(e->kids[0], conditional);
        break;
      case ExprKind::Binary:
        if (e->op == "&&" || e->op == "||") {
          walk(e->kids[0], conditional);
          walk(e->kids[1], true);
        } else {
          walk(e->kids[0], conditional);
          walk(e->kids[1], conditional);
        }
        break;
      case ExprKind::Conditional:
        walk(e->kids[0], conditional);
        walk(e->kids[1], true);
        walk(e->kids[2], true);
        break;
      case ExprKind::Call: {
        const Expr* callee = e->kids[0];
        bool named_fn = callee->kind == ExprKind::Ident && callee->sym &&
                        callee->sym->kind == Symbol::Kind::Function;
        if (!named_fn) walk(callee, conditional);
        for (std::size_t i = 1; i < e->kids.size(); ++i)
          walk(e->kids[i], conditional);
        break;
      }
      case ExprKind::SizeofExpr:
      case ExprKind::SizeofType:
        break;
      default:
        for (const Expr* k : e->kids) walk(k, conditional);
        break;
    }
  }

  void incdec(const Expr* lv, bool conditional) {
    if (lv->kind == ExprKind::Ident) {
      use(lv->sym);
      def(lv->sym, conditional);
    } else {
      walk_lvalue(lv, conditional);
    }
  }

  // Evaluates the address-forming parts of a stored-to lvalue. Writing
  // through an array element or a struct member touches the aggregate, not
  // a trackable scalar, so the designated object itself contributes nothing.
  void walk_lvalue(const Expr* lv, bool conditional) {
    switch (lv->kind) {
      case ExprKind::Ident:
        break;
      case ExprKind::Unary:
        if (lv->op == "*")
          walk(lv->kids[0], conditional);
        else
          walk(lv, conditional);
        break;
      case ExprKind::Subscript:
        if (lv->kids[0]->type && lv->kids[0]->type->is_array())
          walk_lvalue(lv->kids[0], conditional);
        else
          walk(lv->kids[0], conditional);
        walk(lv->kids[1], conditional);
        break;
      case ExprKind::Member:
        if (lv->op == "->")
          walk(lv->kids[0], conditional);
        else
          walk_lvalue(lv->kids[0], conditional);
        break;
      default:
        walk(lv, conditional);
        break;
    }
  }
};

}  // namespace

UseDef stmt_use_def(const Stmt& s) {
  Collector c;
  switch (s.kind) {
    case StmtKind::Expr:
    case StmtKind::If:
    case StmtKind::While:
    case StmtKind::Do:
    case StmtKind::Switch:
    case StmtKind::Return:
      c.walk(s.expr, false);
      break;
    case StmtKind::For:
      c.walk(s.for_cond, false);
      break;
    case StmtKind::Decl:
      for (const VarDecl* d : s.decls) {
        if (!d->init) continue;
        c.walk(d->init, false);
        c.def(d->sym, false);
      }
      break;
    default:
      break;
  }
  return c.ud;
}

std::map<const Stmt*, std::int64_t> constant_conditions(
    const Cfg& cfg, const sema::TypedUnit& typed) {
  sema::ConstEnv env;
  env.use_symbols = true;
  env.const_values = &typed.const_locals;

  std::map<const Stmt*, std::int64_t> folded;
  for (const BasicBlock& b : cfg.blocks) {
    if (b.stmts.empty()) continue;
    const Stmt* s = b.stmts.back();
    const Expr* cond = nullptr;
    switch (s->kind) {
      case StmtKind::If:
      case StmtKind::While:
      case StmtKind::Do:
      case StmtKind::Switch:
        cond = s->expr;
        break;
      case StmtKind::For:
        cond = s->for_cond;
        break;
      default:
        continue;
    }
    if (!cond) continue;
    auto v = sema::const_eval(cond, env);
    if (v) folded.emplace(s, *v);
  }
  return folded;
}

std::set<int> static_unreachable(const Cfg& cfg,
                                 const sema::TypedUnit& typed) {
  const std::map<const Stmt*, std::int64_t> folded =
      constant_conditions(cfg, typed);

  std::vector<bool> enabled(cfg.edges.size(), true);
  for (const BasicBlock& b : cfg.blocks) {
    if (b.stmts.empty()) continue;
    const Stmt* s = b.stmts.back();
    auto it = folded.find(s);
    if (it == folded.end()) continue;
    const std::int64_t v0 = it->second;
    const std::int64_t* v = &v0;

    if (s->kind == StmtKind::Switch) {
      bool matched = false;
      for (int ei : b.succ_edges) {
        const CfgEdge& e = cfg.edges[static_cast<std::size_t>(ei)];
        if (e.kind == EdgeKind::SwitchCase && !e.is_default &&
            e.case_value == *v)
          matched = true;
      }
      for (int ei : b.succ_edges) {
        const CfgEdge& e = cfg.edges[static_cast<std::size_t>(ei)];
        if (e.kind != EdgeKind::SwitchCase) continue;
        bool keep = matched ? (!e.is_default && e.case_value == *v)
                            : e.is_default;
        if (!keep) enabled[static_cast<std::size_t>(ei)] = false;
      }
    } else {
      for (int ei : b.succ_edges) {
        const CfgEdge& e = cfg.edges[static_cast<std::size_t>(ei)];
        if (e.kind == EdgeKind::BranchTrue && *v == 0)
          enabled[static_cast<std::size_t>(ei)] = false;
        if (e.kind == EdgeKind::BranchFalse && *v != 0)
          enabled[static_cast<std::size_t>(ei)] = false;
      }
    }
  }

  std::vector<bool> reached(cfg.blocks.size(), false);
  std::vector<int> work{cfg.entry};
  reached[static_cast<std::size_t>(cfg.entry)] = true;
  while (!work.empty()) {
    int b = work.back();
    work.pop_back();
    for (int ei : cfg.blocks[static_cast<std::size_t>(b)].succ_edges) {
      if (!enabled[static_cast<std::size_t>(ei)]) continue;
      int to = cfg.edges[static_cast<std::size_t>(ei)].to;
      if (!reached[static_cast<std::size_t>(to)]) {
        reached[static_cast<std::size_t>(to)] = true;
        work.push_back(to);
      }
    }
  }

  std::set<int> unreachable;
  for (const BasicBlock& b : cfg.blocks) {
    if (reached[static_cast<std::size_t>(b.id)]) continue;
    for (const Stmt* s : b.stmts) unreachable.insert(s->id);
  }
  return unreachable;
}

namespace {

bool tracked_scalar(const Symbol* s) {
  return s && s->is_local_object() && !s->address_taken &&
         !s->is_volatile_qualified() && s->type && s->type->is_scalar();
}

std::set<Symbol*> filter_tracked(const std::vector<Symbol*>& v) {
  std::set<Symbol*> out;
  for (Symbol* s : v)
    if (tracked_scalar(s)) out.insert(s);
  return out;
}

}  // namespace

std::set<StmtSym> liveness_dead_stores(const Cfg& cfg) {
  struct StmtFacts {
    const Stmt* s;
    std::set<Symbol*> uses, must_defs;
  };
  std::vector<std::vector<StmtFacts>> block_facts(cfg.blocks.size());
  for (const BasicBlock& b : cfg.blocks) {
    for (const Stmt* s : b.stmts) {
      UseDef ud = stmt_use_def(*s);
      block_facts[static_cast<std::size_t>(b.id)].push_back(
          {s, filter_tracked(ud.uses), filter_tracked(ud.must_defs)});
    }
  }

  std::vector<std::set<Symbol*>> live_out(cfg.blocks.size());
  auto transfer_in = [&](int bid) {
    std::set<Symbol*> live = live_out[static_cast<std::size_t>(bid)];
    const auto& facts = block_facts[static_cast<std::size_t>(bid)];
    for (auto it = facts.rbegin(); it != facts.rend(); ++it) {
      for (Symbol* d : it->must_defs) live.erase(d);
      for (Symbol* u : it->uses) live.insert(u);
    }
    return live;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto bit = cfg.blocks.rbegin(); bit != cfg.blocks.rend(); ++bit) {
      std::set<Symbol*> out;
      for (int ei : bit->succ_edges) {
        int to = cfg.edges[static_cast<std::size_t>(ei)].to;
        std::set<Symbol*> succ_in = transfer_in(to);
        out.insert(succ_in.begin(), succ_in.end());
      }
      if (out != live_out[static_cast<std::size_t>(bit->id)]) {
        live_out[static_cast<std::size_t>(bit->id)] = std::move(out);
        changed = true;
      }
    }
  }

  std::set<StmtSym> dead;
  for (const BasicBlock& b : cfg.blocks) {
    std::set<Symbol*> live = live_out[static_cast<std::size_t>(b.id)];
    const auto& facts = block_facts[static_cast<std::size_t>(b.id)];
    for (auto it = facts.rbegin(); it != facts.rend(); ++it) {
      if (it->s->kind != StmtKind::Decl) {
        for (Symbol* d : it->must_defs)
          if (!live.count(d)) dead.insert({it->s->id, d});
      }
      for (Symbol* d : it->must_defs) live.erase(d);
      for (Symbol* u : it->uses) live.insert(u);
    }
  }
  return dead;
}

void definite_assignment(const Cfg& cfg, DataflowFacts& facts) {
  // Per-symbol state: may be unassigned / must be unassigned.
  struct Bits {
    bool may = false;
    bool must = false;
  };
  using State = std::map<Symbol*, Bits>;

  std::set<Symbol*> tracked;
  std::set<Symbol*> opaque_locals;  // arrays, aggregates, address-taken, ...
  for (const BasicBlock& b : cfg.blocks) {
    for (const Stmt* s : b.stmts) {
      if (s->kind != StmtKind::Decl) continue;
      for (const VarDecl* d : s->decls) {
        Symbol* sym = d->sym;
        if (!sym || !sym->is_local_object()) continue;
        if (tracked_scalar(sym))
          tracked.insert(sym);
        else if (!d->init && sym->kind != Symbol::Kind::Parameter)
          opaque_locals.insert(sym);
      }
    }
  }

  State entry_state;
  for (Symbol* s : tracked) entry_state[s] = {true, true};

  std::vector<State> in(cfg.blocks.size());
  std::vector<bool> seen(cfg.blocks.size(), false);
  in[static_cast<std::size_t>(cfg.entry)] = entry_state;
  seen[static_cast<std::size_t>(cfg.entry)] = true;

  auto transfer = [&](const BasicBlock& b, State st) {
    for (const Stmt* s : b.stmts) {
      UseDef ud = stmt_use_def(*s);
      for (Symbol* d : ud.must_defs)
        if (tracked.count(d)) st[d] = {false, false};
      for (Symbol* d : ud.may_defs)
        if (tracked.count(d)) st[d].must = false;
    }
    return st;
  };

  std::vector<int> work{cfg.entry};
  while (!work.empty()) {
    int bid = work.back();
    work.pop_back();
    State out = transfer(cfg.block(bid), in[static_cast<std::size_t>(bid)]);
    for (int ei : cfg.block(bid).succ_edges) {
      int to = cfg.edges[static_cast<std::size_t>(ei)].to;
      State& tin = in[static_cast<std::size_t>(to)];
      bool changed = false;
      if (!seen[static_cast<std::size_t>(to)]) {
        tin = out;
        seen[static_cast<std::size_t>(to)] = true;
        changed = true;
      } else {
        for (const auto& [sym, bits] : out) {
          Bits& t = tin[sym];
          bool nm = t.may || bits.may;
          bool nu = t.must && bits.must;
          if (nm != t.may || nu != t.must) {
            t = {nm, nu};
            changed = true;
          }
        }
      }
      if (changed) work.push_back(to);
    }
  }

  // Recording pass over the stable states. Reads are inspected before the
  // statement's own definitions take effect.
  for (const BasicBlock& b : cfg.blocks) {
    if (!seen[static_cast<std::size_t>(b.id)]) continue;
    State st = in[static_cast<std::size_t>(b.id)];
    for (const Stmt* s : b.stmts) {
      UseDef ud = stmt_use_def(*s);
      for (Symbol* u : ud.uses) {
        if (tracked.count(u)) {
          const Bits& bits = st[u];
          if (bits.may) facts.maybe_uninit_reads.insert({s->id, u});
          if (bits.must) facts.definite_uninit_reads.insert({s->id, u});
        } else if (opaque_locals.count(u)) {
          facts.unknown_reads.insert({s->id, u});
        }
      }
      for (Symbol* d : ud.must_defs)
        if (tracked.count(d)) st[d] = {false, false};
      for (Symbol* d : ud.may_defs)
        if (tracked.count(d)) st[d].must = false;
    }
  }
}

DataflowFacts analyze_function(const Cfg& cfg, const sema::TypedUnit& typed) {
  DataflowFacts facts;
  facts.unreachable = static_unreachable(cfg, typed);
  for (const Stmt* s : cfg.fn->stmts)
    if (!facts.unreachable.count(s->id)) facts.reachable.insert(s->id);
  facts.dead_stores = liveness_dead_stores(cfg);
  definite_assignment(cfg, facts);
  return facts;
}

}  // namespace minicheck::flow
