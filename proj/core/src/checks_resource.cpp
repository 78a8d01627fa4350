#include <deque>
#include <functional>

#include "minicheck/checks.hpp"
#include "minicheck/const_eval.hpp"

namespace minicheck::checks {

namespace {

// Ownership facts for one handle variable, as a bit set so merge points can
// hold several at once.
enum : unsigned {
  kUnowned = 1,   // no live resource (never acquired, or acquire failed)
  kOwned = 2,     // holds a resource this function must release
  kReleased = 4,  // resource given back
  kEscaped = 8,   // value left local tracking; absorbing
};

struct Event {
  enum Kind { Acquire, Release, Escape } kind;
  Symbol* sym;
  SourceSpan span;
};

struct Finding {
  const char* what;
  VerdictKind verdict;
  SourceSpan span;
  std::string msg;
};

const Expr* strip_casts(const Expr* e) {
  while (e && e->kind == ExprKind::Cast) e = e->kids[0];
  return e;
}

bool is_acquire_call(const Expr* e) {
  e = strip_casts(e);
  return e && e->kind == ExprKind::Call &&
         e->kids[0]->kind == ExprKind::Ident && e->kids[0]->sym &&
         e->kids[0]->sym->traits.acquire;
}

// The per-function automaton. Tracked handles are local pointer variables
// that receive an acquire-call result through a plain assignment or
// initializer; anything else (globals, fields, address-taken locals) is
// deliberately out of scope and reached only through escape events.
struct Ownership {
  const sema::TypedUnit& typed;
  const flow::Cfg& cfg;
  Profile profile;
  std::vector<Diagnostic>& out;

  std::vector<Symbol*> tracked;            // report order
  std::map<Symbol*, int> index;
  std::map<Symbol*, SourceSpan> first_acquire;

  using State = std::vector<unsigned>;

  Ownership(const sema::TypedUnit& t, const flow::Cfg& c, Profile p,
            std::vector<Diagnostic>& o)
      : typed(t), cfg(c), profile(p), out(o) {}

  void push(VerdictKind v, SourceSpan span, std::string msg) {
    Diagnostic d;
    d.rule_id = "R22.1";
    d.check_id = "stream-ownership-r22-1";
    d.verdict = v;
    d.relation = Relation::OverApprox;
    d.span = span;
    d.message = std::move(msg);
    out.push_back(std::move(d));
  }

  bool tracks(Symbol* s) const { return s && index.count(s); }

  void find_tracked() {
    for (const Stmt* s : cfg.fn->stmts) {
      auto consider = [&](Symbol* sym, const Expr* rhs, SourceSpan span) {
        if (!sym || !sym->is_local_object() || sym->address_taken) return;
        if (!sym->type || !sym->type->is_pointer()) return;
        if (!is_acquire_call(rhs)) return;
        if (index.emplace(sym, (int)tracked.size()).second) {
          tracked.push_back(sym);
          first_acquire[sym] = span;
        }
      };
      if (s->kind == StmtKind::Decl) {
        for (const VarDecl* vd : s->decls)
          if (vd->init) consider(vd->sym, vd->init, vd->init->span());
      }
      if (s->expr) {
        for_each_expr_in(const_cast<Expr*>(s->expr), [&](Expr* e) {
          if (e->kind == ExprKind::Assign && e->op == "=" &&
              e->kids[0]->kind == ExprKind::Ident)
            consider(e->kids[0]->sym, e->kids[1], e->kids[1]->span());
        });
      }
    }
  }

  // Ordered ownership events of one statement.
  std::vector<Event> events_of(const Stmt* s) const {
    std::vector<Event> ev;
    std::function<void(const Expr*)> visit = [&](const Expr* e) {
      if (!e) return;
      switch (e->kind) {
        case ExprKind::Call: {
          const Expr* callee = e->kids[0];
          Symbol* csym = callee->kind == ExprKind::Ident ? callee->sym
                                                         : nullptr;
          bool releases = csym && (csym->traits.release ||
                                   csym->traits.release_arg0);
          for (std::size_t i = 1; i < e->kids.size(); ++i) {
            const Expr* arg = strip_casts(e->kids[i]);
            visit(e->kids[i]);
            if (arg->kind == ExprKind::Ident && tracks(arg->sym)) {
              if (releases && i == 1)
                ev.push_back({Event::Release, arg->sym, e->span()});
              else if (!csym || !csym->is_libc)
                ev.push_back({Event::Escape, arg->sym, arg->span()});
            }
          }
          return;
        }
        case ExprKind::Assign: {
          visit(e->kids[1]);
          const Expr* rhs = strip_casts(e->kids[1]);
          const Expr* target = e->kids[0];
          bool plain_to_tracked = e->op == "=" &&
                                  target->kind == ExprKind::Ident &&
                                  tracks(target->sym);
          if (plain_to_tracked && is_acquire_call(rhs)) {
            ev.push_back({Event::Acquire, target->sym, e->span()});
          } else if (rhs->kind == ExprKind::Ident && tracks(rhs->sym)) {
            // Handle value copied somewhere else: alias leaves tracking.
            ev.push_back({Event::Escape, rhs->sym, rhs->span()});
          }
          if (!plain_to_tracked) visit(target);
          return;
        }
        default:
          for (const Expr* k : e->kids) visit(k);
          return;
      }
    };

    if (s->kind == StmtKind::Decl) {
      for (const VarDecl* vd : s->decls) {
        if (!vd->init) continue;
        visit(vd->init);
        const Expr* rhs = strip_casts(vd->init);
        if (tracks(vd->sym) && is_acquire_call(rhs))
          ev.push_back({Event::Acquire, vd->sym, vd->init->span()});
        else if (rhs->kind == ExprKind::Ident && tracks(rhs->sym))
          ev.push_back({Event::Escape, rhs->sym, rhs->span()});
      }
      return ev;
    }
    if (s->kind == StmtKind::Return && s->expr) {
      const Expr* v = strip_casts(s->expr);
      visit(s->expr);
      if (v->kind == ExprKind::Ident && tracks(v->sym))
        ev.push_back({Event::Escape, v->sym, v->span()});
      return ev;
    }
    if (s->expr) visit(s->expr);
    if (s->for_cond) visit(s->for_cond);
    return ev;
  }

  void apply(State& st, const Event& e, bool record) {
    unsigned& bits = st[(std::size_t)index.at(e.sym)];
    if (bits & kEscaped) return;
    switch (e.kind) {
      case Event::Acquire:
        if (record && (bits & kOwned))
          push(VerdictKind::Definite, e.span,
               "handle '" + e.sym->name +
                   "' is overwritten while it still owns a resource");
        bits = kOwned;
        return;
      case Event::Release:
        if (record && (bits & kReleased))
          push(VerdictKind::Definite, e.span,
               "handle '" + e.sym->name + "' is released twice");
        bits = kReleased;
        return;
      case Event::Escape:
        if (record && profile == Profile::Strict)
          push(VerdictKind::Possible, e.span,
               "handle '" + e.sym->name +
                   "' escapes local ownership tracking");
        bits = kEscaped;
        return;
    }
  }

  // Null-comparison refinement: on the edge where the handle is known to be
  // null, a pending acquisition is known to have failed.
  void refine(State& st, const flow::CfgEdge& edge) const {
    if (edge.kind != flow::EdgeKind::BranchTrue &&
        edge.kind != flow::EdgeKind::BranchFalse)
      return;
    const flow::BasicBlock& b = cfg.block(edge.from);
    if (b.stmts.empty()) return;
    const Stmt* last = b.stmts.back();
    const Expr* cond = nullptr;
    if (last->kind == StmtKind::If || last->kind == StmtKind::While ||
        last->kind == StmtKind::Do || last->kind == StmtKind::Switch)
      cond = last->expr;
    else if (last->kind == StmtKind::For)
      cond = last->for_cond;
    if (!cond) return;

    Symbol* h = nullptr;
    bool null_on_true = false;
    const Expr* c = strip_casts(cond);
    auto const_zero = [&](const Expr* e) {
      sema::ConstEnv env;
      auto v = sema::const_eval(e, env);
      return v.has_value() && *v == 0;
    };
    if (c->kind == ExprKind::Ident && tracks(c->sym)) {
      h = c->sym;
      null_on_true = false;
    } else if (c->kind == ExprKind::Unary && c->op == "!" &&
               c->kids[0]->kind == ExprKind::Ident && tracks(c->kids[0]->sym)) {
      h = c->kids[0]->sym;
      null_on_true = true;
    } else if (c->kind == ExprKind::Binary &&
               (c->op == "==" || c->op == "!=")) {
      const Expr* l = strip_casts(c->kids[0]);
      const Expr* r = strip_casts(c->kids[1]);
      const Expr* id = nullptr;
      if (l->kind == ExprKind::Ident && tracks(l->sym) && const_zero(r))
        id = l;
      else if (r->kind == ExprKind::Ident && tracks(r->sym) && const_zero(l))
        id = r;
      if (!id) return;
      h = id->sym;
      null_on_true = c->op == "==";
    } else {
      return;
    }

    bool null_edge = (edge.kind == flow::EdgeKind::BranchTrue) == null_on_true;
    if (!null_edge) return;
    unsigned& bits = st[(std::size_t)index.at(h)];
    if (bits & kOwned) bits = (bits & ~kOwned) | kUnowned;
  }

  // Merge with the owned/released conflict collapsed so the fixpoint stays
  // stable; the conflict itself is reported in the recording pass.
  static unsigned merge_bits(unsigned a, unsigned b) {
    unsigned m = a | b;
    if ((m & kOwned) && (m & kReleased)) m &= ~kReleased;
    return m;
  }

  void run() {
    find_tracked();
    if (tracked.empty()) return;

    const std::size_t n = cfg.blocks.size();
    State init(tracked.size(), kUnowned);
    std::vector<State> in(n, State(tracked.size(), 0u)), outs = in;
    in[(std::size_t)cfg.entry] = init;

    std::deque<int> work;
    std::vector<bool> seen(n, false), queued(n, false);
    work.push_back(cfg.entry);
    seen[(std::size_t)cfg.entry] = true;
    while (!work.empty()) {
      int b = work.front();
      work.pop_front();
      queued[(std::size_t)b] = false;
      State st = in[(std::size_t)b];
      for (const Stmt* s : cfg.block(b).stmts)
        for (const Event& e : events_of(s)) apply(st, e, false);
      outs[(std::size_t)b] = st;
      for (int ei : cfg.block(b).succ_edges) {
        const flow::CfgEdge& edge = cfg.edges[(std::size_t)ei];
        State refined = st;
        refine(refined, edge);
        State& tin = in[(std::size_t)edge.to];
        bool changed = false;
        if (!seen[(std::size_t)edge.to]) {
          tin = refined;
          seen[(std::size_t)edge.to] = true;
          changed = true;
        } else {
          for (std::size_t i = 0; i < tin.size(); ++i) {
            unsigned m = merge_bits(tin[i], refined[i]);
            if (m != tin[i]) {
              tin[i] = m;
              changed = true;
            }
          }
        }
        if (changed && !queued[(std::size_t)edge.to]) {
          work.push_back(edge.to);
          queued[(std::size_t)edge.to] = true;
        }
      }
    }

    // Recording pass: replay each reached block once over the stable
    // in-states, and surface path-dependent release at the merges that
    // combined an owned path with a released one.
    std::set<Symbol*> conflicted;
    for (std::size_t b = 0; b < n; ++b) {
      if (!seen[b]) continue;
      if (cfg.block((int)b).pred_edges.size() > 1) {
        std::vector<unsigned> acc(tracked.size(), 0u);
        for (int ei : cfg.block((int)b).pred_edges) {
          const flow::CfgEdge& edge = cfg.edges[(std::size_t)ei];
          if (!seen[(std::size_t)edge.from]) continue;
          State contrib = outs[(std::size_t)edge.from];
          refine(contrib, edge);
          for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] |= contrib[i];
        }
        for (std::size_t i = 0; i < acc.size(); ++i) {
          if ((acc[i] & kOwned) && (acc[i] & kReleased) &&
              !conflicted.count(tracked[i])) {
            conflicted.insert(tracked[i]);
            SourceSpan at = cfg.block((int)b).stmts.empty()
                                ? cfg.fn->span()
                                : cfg.block((int)b).stmts.front()->span();
            push(VerdictKind::Definite, at,
                 "handle '" + tracked[i]->name +
                     "' is released on some paths to this point but not "
                     "others");
          }
        }
      }
      State st = in[b];
      for (const Stmt* s : cfg.block((int)b).stmts)
        for (const Event& e : events_of(s)) apply(st, e, true);
    }

    const State& at_exit = in[(std::size_t)cfg.exit];
    for (std::size_t i = 0; i < tracked.size(); ++i) {
      if (!(at_exit[i] & kOwned)) continue;
      if (conflicted.count(tracked[i])) continue;
      push(VerdictKind::Definite, first_acquire[tracked[i]],
           "resource acquired into '" + tracked[i]->name +
               "' is not released on every path");
    }
  }
};

}  // namespace

// R22.1: resources must be released. Local handle variables move through
// unowned/owned/released states; whatever the automaton cannot follow is an
// escape, reported as possible under the strict profile only. An acquire
// whose value an expression statement drops on the floor never had a handle
// at all and is flagged directly.
void check_stream_ownership(const CheckInput& in, std::vector<Diagnostic>& out) {
  if (in.functions) {
    for (const AnalyzedFunction& af : *in.functions) {
      Ownership o(in.typed, af.cfg, in.profile, out);
      o.run();
    }
  }
  for (const FunctionDef* fn : in.typed.tu->functions) {
    if (!fn->is_definition) continue;
    for (const Stmt* s : fn->stmts) {
      if (s->kind != StmtKind::Expr || !s->expr) continue;
      const Expr* e = strip_casts(s->expr);
      if (is_acquire_call(e)) {
        Diagnostic d;
        d.rule_id = "R22.1";
        d.check_id = "stream-ownership-r22-1";
        d.verdict = VerdictKind::Definite;
        d.relation = Relation::OverApprox;
        d.span = e->span();
        d.message = "acquired resource is immediately discarded";
        d.origin = origin_names(e->tok.origin);
        out.push_back(std::move(d));
      }
    }
  }
}

}  // namespace minicheck::checks
