#include "minicheck/cfg.hpp"

#include <map>
#include <sstream>
#include <utility>

#include "minicheck/const_eval.hpp"
#include "minicheck/source.hpp"

namespace minicheck::flow {

std::vector<int> Cfg::succs(int id) const {
  std::vector<int> out;
  for (int ei : blocks[static_cast<std::size_t>(id)].succ_edges)
    out.push_back(edges[static_cast<std::size_t>(ei)].to);
  return out;
}

std::vector<int> Cfg::preds(int id) const {
  std::vector<int> out;
  for (int ei : blocks[static_cast<std::size_t>(id)].pred_edges)
    out.push_back(edges[static_cast<std::size_t>(ei)].from);
  return out;
}

namespace {

class Builder {
 public:
  explicit Builder(const FunctionDef& fn) {
    cfg_.fn = &fn;
    cfg_.entry = new_block();
    cfg_.exit = new_block();
    cur_ = cfg_.entry;
  }

  Cfg take(Stmt* body) {
    visit(body);
    link(cur_, cfg_.exit, EdgeKind::Fallthrough);
    for (const auto& g : pending_gotos_) {
      auto it = labels_.find(g.second);
      if (it == labels_.end())
        throw FatalError(cfg_.fn->span(),
                         "goto target '" + g.second + "' is not defined");
      link(g.first, it->second, EdgeKind::Goto);
    }
    drop_dead_empty_blocks();
    merge_straight_lines();
    renumber();
    return std::move(cfg_);
  }

 private:
  struct LoopCtx {
    int break_to;
    int continue_to;  // -1 inside a switch: continue passes through
  };

  Cfg cfg_;
  int cur_ = 0;
  std::vector<LoopCtx> loops_;
  std::map<std::string, int> labels_;
  std::vector<std::pair<int, std::string>> pending_gotos_;
  // Per active switch: dispatch block, break target, seen case values.
  struct SwitchCtx {
    int dispatch;
    std::map<std::int64_t, SourceSpan> values;
    bool seen_default = false;
  };
  std::vector<SwitchCtx> switches_;

  int new_block() {
    int id = static_cast<int>(cfg_.blocks.size());
    cfg_.blocks.push_back({});
    cfg_.blocks.back().id = id;
    return id;
  }

  void link(int from, int to, EdgeKind kind, std::int64_t case_value = 0,
            bool is_default = false) {
    int ei = static_cast<int>(cfg_.edges.size());
    cfg_.edges.push_back({from, to, kind, case_value, is_default});
    cfg_.blocks[static_cast<std::size_t>(from)].succ_edges.push_back(ei);
    cfg_.blocks[static_cast<std::size_t>(to)].pred_edges.push_back(ei);
  }

  void append(const Stmt* s) {
    cfg_.blocks[static_cast<std::size_t>(cur_)].stmts.push_back(s);
  }

  // Ends the current block after an already-linked transfer; statements
  // that follow land in a fresh block. If nothing ever links to it, the
  // block is dead code (or cleanup fodder when it stays empty).
  void seal() { cur_ = new_block(); }

  // Starts a new block that control falls into from the current one.
  int start_linked_block() {
    int b = new_block();
    link(cur_, b, EdgeKind::Fallthrough);
    cur_ = b;
    return b;
  }

  LoopCtx* innermost_loop() {
    for (auto it = loops_.rbegin(); it != loops_.rend(); ++it)
      if (it->continue_to >= 0) return &*it;
    return nullptr;
  }

  void visit(Stmt* s) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Compound:
        append(s);
        for (Stmt* item : s->items) visit(item);
        break;
      case StmtKind::Expr:
      case StmtKind::Decl:
      case StmtKind::Null:
        append(s);
        break;
      case StmtKind::Return:
        append(s);
        link(cur_, cfg_.exit, EdgeKind::Jump);
        seal();
        break;
      case StmtKind::Break: {
        append(s);
        if (loops_.empty())
          throw FatalError(s->span(), "break used outside loop or switch");
        link(cur_, loops_.back().break_to, EdgeKind::Jump);
        seal();
        break;
      }
      case StmtKind::Continue: {
        append(s);
        LoopCtx* loop = innermost_loop();
        if (!loop)
          throw FatalError(s->span(), "continue used outside a loop");
        link(cur_, loop->continue_to, EdgeKind::Jump);
        seal();
        break;
      }
      case StmtKind::Goto: {
        append(s);
        auto it = labels_.find(s->label);
        if (it != labels_.end())
          link(cur_, it->second, EdgeKind::Goto);
        else
          pending_gotos_.push_back({cur_, s->label});
        seal();
        break;
      }
      case StmtKind::Label: {
        int b = start_linked_block();
        labels_[s->label] = b;
        append(s);
        visit(s->body);
        break;
      }
      case StmtKind::If:
        visit_if(s);
        break;
      case StmtKind::While:
        visit_while(s);
        break;
      case StmtKind::Do:
        visit_do(s);
        break;
      case StmtKind::For:
        visit_for(s);
        break;
      case StmtKind::Switch:
        visit_switch(s);
        break;
      case StmtKind::Case:
      case StmtKind::Default:
        visit_case(s);
        break;
    }
  }

  void visit_if(Stmt* s) {
    append(s);
    int cond = cur_;

    int then_b = new_block();
    link(cond, then_b, EdgeKind::BranchTrue);
    cur_ = then_b;
    visit(s->then_branch);
    int then_end = cur_;

    int join = -1;
    if (s->else_branch) {
      int else_b = new_block();
      link(cond, else_b, EdgeKind::BranchFalse);
      cur_ = else_b;
      visit(s->else_branch);
      int else_end = cur_;
      join = new_block();
      link(then_end, join, EdgeKind::Fallthrough);
      link(else_end, join, EdgeKind::Fallthrough);
    } else {
      join = new_block();
      link(cond, join, EdgeKind::BranchFalse);
      link(then_end, join, EdgeKind::Fallthrough);
    }
    cur_ = join;
  }

  void visit_while(Stmt* s) {
    int header = start_linked_block();
    append(s);
    int body = new_block();
    int after = new_block();
    link(header, body, EdgeKind::BranchTrue);
    link(header, after, EdgeKind::BranchFalse);

    loops_.push_back({after, header});
    cur_ = body;
    visit(s->body);
    link(cur_, header, EdgeKind::LoopBack);
    loops_.pop_back();

    cur_ = after;
  }

  void visit_do(Stmt* s) {
    int body = start_linked_block();
    int cond = new_block();
    int after = new_block();

    loops_.push_back({after, cond});
    cur_ = body;
    visit(s->body);
    link(cur_, cond, EdgeKind::Fallthrough);
    loops_.pop_back();

    // The statement itself stands for its per-iteration condition check.
    cur_ = cond;
    append(s);
    link(cond, body, EdgeKind::BranchTrue);
    link(cond, after, EdgeKind::BranchFalse);

    cur_ = after;
  }

  void visit_for(Stmt* s) {
    if (s->for_init) visit(s->for_init);
    int header = start_linked_block();
    append(s);
    int body = new_block();
    int incr = s->for_incr ? new_block() : -1;
    int after = new_block();

    if (s->for_cond) {
      link(header, body, EdgeKind::BranchTrue);
      link(header, after, EdgeKind::BranchFalse);
    } else {
      link(header, body, EdgeKind::Fallthrough);
    }

    int continue_to = incr >= 0 ? incr : header;
    loops_.push_back({after, continue_to});
    cur_ = body;
    visit(s->body);
    link(cur_, continue_to,
         incr >= 0 ? EdgeKind::Fallthrough : EdgeKind::LoopBack);
    loops_.pop_back();

    if (incr >= 0) {
      cur_ = incr;
      visit(s->for_incr);
      link(cur_, header, EdgeKind::LoopBack);
    }

    cur_ = after;
  }

  void visit_switch(Stmt* s) {
    append(s);
    int dispatch = cur_;
    int after = new_block();

    switches_.push_back({dispatch, {}, false});
    loops_.push_back({after, -1});

    // Statements before the first label are unreachable by construction.
    cur_ = new_block();
    visit(s->body);
    link(cur_, after, EdgeKind::Fallthrough);

    loops_.pop_back();
    SwitchCtx ctx = switches_.back();
    switches_.pop_back();
    // The implicit default path: no label matched, fall to the join.
    if (!ctx.seen_default)
      link(dispatch, after, EdgeKind::SwitchCase, 0, true);

    cur_ = after;
  }

  void visit_case(Stmt* s) {
    if (switches_.empty())
      throw FatalError(s->span(), "case label outside a switch");
    SwitchCtx& ctx = switches_.back();

    int b = start_linked_block();
    append(s);
    if (s->kind == StmtKind::Default) {
      if (ctx.seen_default)
        throw FatalError(s->span(), "duplicate default label");
      ctx.seen_default = true;
      link(ctx.dispatch, b, EdgeKind::SwitchCase, 0, true);
    } else {
      sema::ConstEnv env;
      env.use_symbols = true;
      auto v = sema::const_eval(s->expr, env);
      if (!v)
        throw FatalError(s->span(), "case label is not an integer constant");
      if (!ctx.values.emplace(*v, s->span()).second)
        throw FatalError(s->span(), "duplicate case value");
      link(ctx.dispatch, b, EdgeKind::SwitchCase, *v, false);
    }
    visit(s->body);
  }

  // Blocks left behind by jump sealing: empty and predecessor-free. They
  // carry no statements, so removing them loses nothing.
  void drop_dead_empty_blocks() {
    bool changed = true;
    std::vector<bool> dead(cfg_.blocks.size(), false);
    while (changed) {
      changed = false;
      for (BasicBlock& b : cfg_.blocks) {
        if (dead[static_cast<std::size_t>(b.id)] || b.id == cfg_.entry ||
            b.id == cfg_.exit)
          continue;
        if (!b.stmts.empty()) continue;
        bool has_pred = false;
        for (int ei : b.pred_edges) {
          const CfgEdge& e = cfg_.edges[static_cast<std::size_t>(ei)];
          if (!dead[static_cast<std::size_t>(e.from)]) has_pred = true;
        }
        if (!has_pred) {
          dead[static_cast<std::size_t>(b.id)] = true;
          changed = true;
        }
      }
    }
    erase_blocks(dead);
  }

  // Folds B into A when A's only successor edge is a fallthrough to B and
  // B's only predecessor is A, keeping blocks maximal straight lines.
  void merge_straight_lines() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (BasicBlock& a : cfg_.blocks) {
        if (a.succ_edges.size() != 1 || a.id == cfg_.exit) continue;
        CfgEdge& e = cfg_.edges[static_cast<std::size_t>(a.succ_edges[0])];
        if (e.kind != EdgeKind::Fallthrough) continue;
        BasicBlock& b = cfg_.blocks[static_cast<std::size_t>(e.to)];
        if (b.pred_edges.size() != 1 || b.id == cfg_.exit ||
            b.id == cfg_.entry || b.id == a.id)
          continue;
        a.stmts.insert(a.stmts.end(), b.stmts.begin(), b.stmts.end());
        a.succ_edges = b.succ_edges;
        for (int ei : a.succ_edges)
          cfg_.edges[static_cast<std::size_t>(ei)].from = a.id;
        b.succ_edges.clear();
        b.pred_edges.clear();
        b.stmts.clear();
        std::vector<bool> dead(cfg_.blocks.size(), false);
        dead[static_cast<std::size_t>(b.id)] = true;
        erase_blocks(dead);
        changed = true;
        break;
      }
    }
  }

  void erase_blocks(const std::vector<bool>& dead) {
    std::vector<int> remap(cfg_.blocks.size(), -1);
    std::vector<BasicBlock> kept;
    for (BasicBlock& b : cfg_.blocks) {
      if (dead[static_cast<std::size_t>(b.id)]) continue;
      remap[static_cast<std::size_t>(b.id)] = static_cast<int>(kept.size());
      kept.push_back(std::move(b));
    }
    std::vector<CfgEdge> kept_edges;
    std::vector<int> edge_remap(cfg_.edges.size(), -1);
    for (std::size_t i = 0; i < cfg_.edges.size(); ++i) {
      const CfgEdge& e = cfg_.edges[i];
      if (remap[static_cast<std::size_t>(e.from)] < 0 ||
          remap[static_cast<std::size_t>(e.to)] < 0)
        continue;
      edge_remap[i] = static_cast<int>(kept_edges.size());
      CfgEdge ne = e;
      ne.from = remap[static_cast<std::size_t>(e.from)];
      ne.to = remap[static_cast<std::size_t>(e.to)];
      kept_edges.push_back(ne);
    }
    for (BasicBlock& b : kept) {
      b.id = remap[static_cast<std::size_t>(b.id)];
      auto rewrite = [&](std::vector<int>& list) {
        std::vector<int> out;
        for (int ei : list)
          if (edge_remap[static_cast<std::size_t>(ei)] >= 0)
            out.push_back(edge_remap[static_cast<std::size_t>(ei)]);
        list = std::move(out);
      };
      rewrite(b.succ_edges);
      rewrite(b.pred_edges);
    }
    cfg_.entry = remap[static_cast<std::size_t>(cfg_.entry)];
    cfg_.exit = remap[static_cast<std::size_t>(cfg_.exit)];
    cfg_.blocks = std::move(kept);
    cfg_.edges = std::move(kept_edges);
    cur_ = cur_ >= 0 && remap[static_cast<std::size_t>(cur_)] >= 0
               ? remap[static_cast<std::size_t>(cur_)]
               : cur_;
  }

  // Final ids: entry first, exit last, everything else in creation order.
  void renumber() {
    std::vector<int> order;
    order.push_back(cfg_.entry);
    for (const BasicBlock& b : cfg_.blocks)
      if (b.id != cfg_.entry && b.id != cfg_.exit) order.push_back(b.id);
    order.push_back(cfg_.exit);

    std::vector<int> remap(cfg_.blocks.size(), -1);
    for (std::size_t i = 0; i < order.size(); ++i)
      remap[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    std::vector<BasicBlock> blocks(cfg_.blocks.size());
    for (BasicBlock& b : cfg_.blocks) {
      int nid = remap[static_cast<std::size_t>(b.id)];
      b.id = nid;
      blocks[static_cast<std::size_t>(nid)] = std::move(b);
    }
    for (CfgEdge& e : cfg_.edges) {
      e.from = remap[static_cast<std::size_t>(e.from)];
      e.to = remap[static_cast<std::size_t>(e.to)];
    }
    cfg_.blocks = std::move(blocks);
    cfg_.entry = 0;
    cfg_.exit = static_cast<int>(cfg_.blocks.size()) - 1;
  }
};

}  // namespace

Cfg build_cfg(const FunctionDef& fn) {
  Builder b(fn);
  return b.take(fn.body);
}

std::string edge_kind_name(const CfgEdge& e) {
  switch (e.kind) {
    case EdgeKind::Fallthrough: return "fallthrough";
    case EdgeKind::BranchTrue: return "branch-true";
    case EdgeKind::BranchFalse: return "branch-false";
    case EdgeKind::SwitchCase:
      return e.is_default ? "switch-case(default)"
                          : "switch-case(" + std::to_string(e.case_value) +
                                ")";
    case EdgeKind::LoopBack: return "loop-back";
    case EdgeKind::Goto: return "goto";
    case EdgeKind::Jump: return "jump";
  }
  return "?";
}

std::string dump_cfg(const Cfg& cfg) {
  std::ostringstream os;
  for (const BasicBlock& b : cfg.blocks) {
    os << "block " << b.id << ": [";
    for (std::size_t i = 0; i < b.stmts.size(); ++i) {
      if (i) os << ' ';
      os << b.stmts[i]->id;
    }
    os << "] ->";
    for (int ei : b.succ_edges) {
      const CfgEdge& e = cfg.edges[static_cast<std::size_t>(ei)];
      os << ' ' << e.to << '(' << edge_kind_name(e) << ')';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace minicheck::flow
