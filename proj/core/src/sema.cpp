#include "minicheck/sema.hpp"

#include <cassert>
#include <set>

#include "minicheck/const_eval.hpp"
#include "minicheck/dialect.hpp"
#include "minicheck/literals.hpp"

namespace minicheck::sema {

namespace {

class SemaPass {
 public:
  SemaPass(TranslationUnit& tu, const SourceManager& sm)
      : tu_(tu), out_(std::make_unique<TypedUnit>()) {
    out_->tu = &tu;
    out_->sm = &sm;
  }

  std::unique_ptr<TypedUnit> run() {
    push_scope();
    inject_profile();
    register_enumerators();

    for (VarDecl* g : tu_.globals) declare_global(g);
    for (FunctionDef* f : tu_.functions) declare_function(f);

    for (VarDecl* g : tu_.globals)
      if (g->init) type_initializer(g);
    for (FunctionDef* f : tu_.functions)
      if (f->is_definition) process_function(f);
    for (EnumDef* e : tu_.enum_defs)
      for (Enumerator& en : e->enumerators)
        if (en.init) type_expr(en.init);

    pop_scope();
    return std::move(out_);
  }

 private:
  TranslationUnit& tu_;
  std::unique_ptr<TypedUnit> out_;
  std::vector<std::map<std::string, Symbol*>> scopes_;
  FunctionDef* cur_fn_ = nullptr;
  std::map<std::string, Stmt*> labels_;
  std::vector<Stmt*> gotos_;
  int next_ordinal_ = 0;

  TypeTable& types() { return tu_.types; }

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }

  Symbol* make_symbol(Symbol::Kind kind, const std::string& name,
                      const Type* type, SourceSpan span) {
    out_->symbol_arena.push_back({});
    Symbol* s = &out_->symbol_arena.back();
    s->kind = kind;
    s->name = name;
    s->type = type;
    s->decl_span = span;
    s->ordinal = next_ordinal_++;
    return s;
  }

  Symbol* lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return f->second;
    }
    return nullptr;
  }

  void inject_profile() {
    LibcProfile profile = builtin_profile(types());
    for (const ProfileFunction& pf : profile.functions) {
      Symbol* s = make_symbol(Symbol::Kind::Function, pf.name, pf.type, {});
      s->is_libc = true;
      s->traits = pf.traits;
      s->is_global = true;
      scopes_[0][pf.name] = s;
      out_->file_scope.push_back(s);
    }
    for (const ProfileObject& po : profile.objects) {
      Symbol* s = make_symbol(Symbol::Kind::Variable, po.name, po.type, {});
      s->is_libc = true;
      s->traits = po.traits;
      s->is_global = true;
      scopes_[0][po.name] = s;
      out_->file_scope.push_back(s);
      if (po.traits.errno_object) out_->errno_sym = s;
    }
  }

  void register_enumerators() {
    for (EnumDef* e : tu_.enum_defs) {
      const Type* et = types().enum_type(e);
      for (const Enumerator& en : e->enumerators) {
        Symbol* s =
            make_symbol(Symbol::Kind::Enumerator, en.name, et, en.span);
        s->enum_value = en.value;
        s->is_global = true;
        scopes_[0][en.name] = s;
        out_->file_scope.push_back(s);
      }
    }
  }

  void declare_global(VarDecl* g) {
    if (Symbol* prev = scopes_[0].count(g->name) ? scopes_[0][g->name] : nullptr) {
      // Redeclaration; keep the first symbol, prefer a definition's type.
      g->sym = prev;
      if (!prev->decl) prev->decl = g;
      return;
    }
    Symbol* s = make_symbol(Symbol::Kind::Variable, g->name, g->type,
                            g->span());
    s->storage = g->storage;
    s->is_global = true;
    s->decl = g;
    g->sym = s;
    scopes_[0][g->name] = s;
    out_->file_scope.push_back(s);
  }

  void declare_function(FunctionDef* f) {
    Symbol* prev = scopes_[0].count(f->name) ? scopes_[0][f->name] : nullptr;
    if (prev) {
      f->sym = prev;
      if (f->is_definition) {
        if (prev->is_libc) {
          // User definition replaces the library meaning of the name.
          prev->is_libc = false;
          prev->traits = {};
        }
        prev->fn = f;
        prev->type = f->type;
        prev->decl_span = f->span();
        prev->storage = f->storage;
      }
      return;
    }
    Symbol* s =
        make_symbol(Symbol::Kind::Function, f->name, f->type, f->span());
    s->storage = f->storage;
    s->is_global = true;
    if (f->is_definition) s->fn = f;
    f->sym = s;
    scopes_[0][f->name] = s;
    out_->file_scope.push_back(s);
  }

  // ---- functions ----

  void process_function(FunctionDef* f) {
    cur_fn_ = f;
    labels_.clear();
    gotos_.clear();
    collect_labels(f->body);

    push_scope();
    for (VarDecl* p : f->params) {
      Symbol* s = make_symbol(Symbol::Kind::Parameter, p->name, p->type,
                              p->span());
      s->decl = p;
      p->sym = s;
      scopes_.back()[p->name] = s;
    }
    type_stmt(f->body);
    pop_scope();

    for (Stmt* g : gotos_)
      if (!labels_.count(g->label))
        throw FatalError(g->span(), "use of undeclared label '" + g->label + "'");
    cur_fn_ = nullptr;
  }

  void collect_labels(Stmt* s) {
    if (!s) return;
    if (s->kind == StmtKind::Label) {
      if (labels_.count(s->label))
        throw FatalError(s->span(), "duplicate label '" + s->label + "'");
      labels_[s->label] = s;
    }
    collect_labels(s->then_branch);
    collect_labels(s->else_branch);
    collect_labels(s->body);
    collect_labels(s->for_init);
    collect_labels(s->for_incr);
    for (Stmt* k : s->items) collect_labels(k);
  }

  void type_stmt(Stmt* s) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Compound:
        push_scope();
        for (Stmt* k : s->items) type_stmt(k);
        pop_scope();
        return;
      case StmtKind::Decl:
        for (VarDecl* d : s->decls) declare_local(d);
        return;
      case StmtKind::Expr:
        type_expr(s->expr);
        return;
      case StmtKind::If:
        require_scalar(type_rvalue(s->expr), s->expr);
        type_stmt(s->then_branch);
        type_stmt(s->else_branch);
        return;
      case StmtKind::Switch: {
        const Type* t = type_rvalue(s->expr);
        if (!t->is_arith_integer())
          throw FatalError(s->expr->span(),
                           "switch controlling expression must have integer type");
        type_stmt(s->body);
        return;
      }
      case StmtKind::While:
      case StmtKind::Do:
        require_scalar(type_rvalue(s->expr), s->expr);
        type_stmt(s->body);
        return;
      case StmtKind::For:
        push_scope();
        type_stmt(s->for_init);
        if (s->for_cond) require_scalar(type_rvalue(s->for_cond), s->for_cond);
        type_stmt(s->for_incr);
        type_stmt(s->body);
        pop_scope();
        return;
      case StmtKind::Return:
        if (s->expr) {
          type_rvalue(s->expr);
          record_conv(s->expr, cur_fn_->type->ret);
        }
        return;
      case StmtKind::Goto:
        gotos_.push_back(s);
        return;
      case StmtKind::Label:
        type_stmt(s->body);
        return;
      case StmtKind::Case: {
        auto v = const_value(s->expr);
        if (!v)
          throw FatalError(s->expr ? s->expr->span() : s->span(),
                           "case label is not a constant expression");
        type_stmt(s->body);
        return;
      }
      case StmtKind::Default:
        type_stmt(s->body);
        return;
      case StmtKind::Break:
      case StmtKind::Continue:
      case StmtKind::Null:
        return;
    }
  }

  void declare_local(VarDecl* d) {
    Symbol* s = make_symbol(Symbol::Kind::Variable, d->name, d->type,
                            d->span());
    s->storage = d->storage;
    s->decl = d;
    d->sym = s;
    scopes_.back()[d->name] = s;
    if (d->init) type_initializer(d);

    if (d->type->is_const && !d->type->is_volatile &&
        d->type->is_arith_integer() && d->storage == Storage::None &&
        d->init) {
      auto v = const_value(d->init);
      if (v) out_->const_locals[s] = *v;
    }
    if (d->init && cur_fn_) {
      TypedUnit::DefInfo di;
      di.rhs = d->init;
      di.plain_assign = d->init->kind != ExprKind::InitList;
      out_->def_table[cur_fn_][s].push_back(di);
    }
  }

  void type_initializer(VarDecl* d) {
    type_init_against(d->init, d->type, d);
  }

  void type_init_against(Expr* init, const Type* target, VarDecl* complete) {
    if (init->kind != ExprKind::InitList) {
      const Type* t = type_rvalue(init);
      if (target->is_record() && t->is_record() &&
          target->record != t->record)
        throw FatalError(init->span(), "initializer has incompatible struct type");
      // String literal initializing a char array.
      if (target->is_array() && init->kind == ExprKind::StringLit) {
        std::string text = frontend::decode_string_literal(init->tok.text,
                                                           init->span());
        std::uint64_t need = text.size() + 1;
        if (!target->array_size && complete) {
          complete->type = types().array_of(target->pointee, need);
          if (complete->sym) complete->sym->type = complete->type;
        } else if (target->array_size && *target->array_size < need - 1) {
          throw FatalError(init->span(), "string literal does not fit array");
        }
        return;
      }
      record_conv(init, target);
      return;
    }
    init->type = target;
    if (target->is_array()) {
      if (!target->array_size && complete) {
        complete->type = types().array_of(target->pointee,
                                          init->kids.size());
        if (complete->sym) complete->sym->type = complete->type;
        target = complete->type;
      }
      if (target->array_size && init->kids.size() > *target->array_size)
        throw FatalError(init->span(), "too many initializers for array");
      for (Expr* k : init->kids)
        type_init_against(k, target->pointee, nullptr);
      return;
    }
    if (target->is_record()) {
      const RecordDef* rec = target->record;
      if (!rec->complete)
        throw FatalError(init->span(), "initializer for incomplete type");
      size_t limit = rec->is_union ? 1 : rec->members.size();
      if (init->kids.size() > limit)
        throw FatalError(init->span(), "too many initializers for aggregate");
      for (size_t i = 0; i < init->kids.size(); ++i)
        type_init_against(init->kids[i], rec->members[i].type, nullptr);
      return;
    }
    if (init->kids.size() != 1)
      throw FatalError(init->span(), "invalid initializer for scalar");
    type_init_against(init->kids[0], target, nullptr);
  }

  // ---- expressions ----

  std::optional<std::int64_t> const_value(Expr* e) {
    if (!e) return std::nullopt;
    if (!e->type) type_expr(e);
    ConstEnv env;
    env.use_symbols = true;
    env.const_values = &out_->const_locals;
    return const_eval(e, env);
  }

  void record_conv(Expr* e, const Type* to) {
    if (!to) return;
    const Type* from = e->type;
    if (!from) return;
    const Type* uf = types().unqualified(from);
    const Type* ut = types().unqualified(to);
    if (uf != ut) out_->implicit_conv[e] = to;
  }

  const Type* promote(const Type* t) {
    if (t->is_enum()) return types().int32();
    if (t->is_integer() && (t->width < dialect::int_bits || t->is_bool))
      return types().int32();
    return types().unqualified(t);
  }

  const Type* uac(const Type* a, const Type* b) {
    if (a->is_floating() || b->is_floating()) {
      int w = 0;
      if (a->is_floating()) w = a->width;
      if (b->is_floating() && b->width > w) w = b->width;
      return types().float_type(w);
    }
    const Type* pa = promote(a);
    const Type* pb = promote(b);
    if (pa == pb) return pa;
    if (pa->is_signed == pb->is_signed)
      return pa->width >= pb->width ? pa : pb;
    const Type* su = pa->is_signed ? pb : pa;  // unsigned one
    const Type* ss = pa->is_signed ? pa : pb;
    if (su->width >= ss->width) return su;
    return ss;  // signed type can represent all unsigned values
  }

  void require_scalar(const Type* t, const Expr* e) {
    if (!t->is_scalar())
      throw FatalError(e->span(), "expected a scalar value");
  }

  // Type with array/function decay applied and the conversion recorded.
  const Type* type_rvalue(Expr* e) {
    const Type* t = type_expr(e);
    if (t->is_array()) {
      const Type* d = types().pointer_to(t->pointee);
      out_->implicit_conv[e] = d;
      return d;
    }
    if (t->is_function()) {
      // Function designator used as a value: counts as taking its address.
      if (e->kind == ExprKind::Ident && e->sym) e->sym->address_taken = true;
      const Type* d = types().pointer_to(t);
      out_->implicit_conv[e] = d;
      return d;
    }
    return types().unqualified(t);
  }

  void mark_address_taken(Expr* e) {
    // Root symbol of the lvalue expression, if any.
    while (e) {
      if (e->kind == ExprKind::Ident) {
        if (e->sym) e->sym->address_taken = true;
        return;
      }
      if (e->kind == ExprKind::Subscript || e->kind == ExprKind::Member) {
        if (e->kind == ExprKind::Member && e->op == "->") return;  // via pointer
        e = e->kids[0];
        continue;
      }
      return;  // deref or other: address of somewhere else already
    }
  }

  const Type* type_expr(Expr* e) {
    if (e->type) return e->type;
    switch (e->kind) {
      case ExprKind::IntLit: {
        auto info = frontend::parse_int_literal(e->tok.text, e->span());
        e->type = types().int_type(info.width, !info.is_unsigned);
        return e->type;
      }
      case ExprKind::FloatLit: {
        char last = e->tok.text.back();
        e->type = types().float_type(
            last == 'f' || last == 'F' ? dialect::float_bits
                                       : dialect::double_bits);
        return e->type;
      }
      case ExprKind::CharLit:
        e->type = types().int32();
        return e->type;
      case ExprKind::StringLit: {
        std::string text =
            frontend::decode_string_literal(e->tok.text, e->span());
        e->type = types().array_of(types().plain_char(), text.size() + 1);
        e->lvalue = true;
        return e->type;
      }
      case ExprKind::Ident: {
        Symbol* s = lookup(e->tok.text);
        if (!s)
          throw FatalError(e->span(),
                           "use of undeclared identifier '" + e->tok.text + "'");
        if (s->kind == Symbol::Kind::TypedefName)
          throw FatalError(e->span(),
                           "type name used as an expression");
        e->sym = s;
        e->type = s->type;
        e->lvalue = s->kind == Symbol::Kind::Variable ||
                    s->kind == Symbol::Kind::Parameter;
        return e->type;
      }
      case ExprKind::Unary:
        return type_unary(e);
      case ExprKind::PostIncDec: {
        const Type* t = type_expr(e->kids[0]);
        require_modifiable(e->kids[0]);
        require_scalar(types().unqualified(t), e);
        e->type = types().unqualified(t);
        note_incdec(e->kids[0]);
        return e->type;
      }
      case ExprKind::Binary:
        return type_binary(e);
      case ExprKind::Assign:
        return type_assign(e);
      case ExprKind::Conditional: {
        require_scalar(type_rvalue(e->kids[0]), e->kids[0]);
        const Type* a = type_rvalue(e->kids[1]);
        const Type* b = type_rvalue(e->kids[2]);
        if (a->is_arithmetic() && b->is_arithmetic()) {
          e->type = uac(a, b);
          record_conv(e->kids[1], e->type);
          record_conv(e->kids[2], e->type);
        } else if (a->is_pointer() && b->is_pointer()) {
          e->type = a;
        } else if (a->is_pointer() || b->is_pointer()) {
          e->type = a->is_pointer() ? a : b;  // null pointer constant arm
        } else if (a->is_void() || b->is_void()) {
          e->type = types().void_type();
        } else if (a->is_record() && a == b) {
          e->type = a;
        } else {
          throw FatalError(e->span(), "incompatible conditional operands");
        }
        return e->type;
      }
      case ExprKind::Call:
        return type_call(e);
      case ExprKind::Subscript: {
        const Type* base = type_rvalue(e->kids[0]);
        const Type* idx = type_rvalue(e->kids[1]);
        if (!base->is_pointer() && idx->is_pointer()) std::swap(base, idx);
        if (!base->is_pointer())
          throw FatalError(e->span(), "subscript of non-pointer value");
        if (!idx->is_arith_integer())
          throw FatalError(e->span(), "array subscript must be an integer");
        if (base->pointee->is_void() || base->pointee->is_function())
          throw FatalError(e->span(), "subscript of pointer to void or function");
        e->type = base->pointee;
        e->lvalue = true;
        return e->type;
      }
      case ExprKind::Member: {
        const Type* t;
        if (e->op == "->") {
          t = type_rvalue(e->kids[0]);
          if (!t->is_pointer())
            throw FatalError(e->span(), "'->' applied to non-pointer");
          t = t->pointee;
        } else {
          t = type_expr(e->kids[0]);
        }
        if (t->is_opaque()) {
          // Layout is unknown; give the access a placeholder type so the
          // checks can still see the dereference pattern.
          e->type = types().int32();
          e->lvalue = true;
          return e->type;
        }
        if (!t->is_record())
          throw FatalError(e->span(), "member access on non-struct value");
        const RecordMember* m = t->record->find(e->member);
        if (!m)
          throw FatalError(e->span(), "no member named '" + e->member +
                                          "' in " + render_type(t));
        e->type = types().qualified(m->type, t->is_const, t->is_volatile);
        e->lvalue = true;
        return e->type;
      }
      case ExprKind::Cast: {
        const Type* src = type_rvalue(e->kids[0]);
        const Type* dst = e->cast_type;
        if (dst->is_opaque() || (dst->is_record() && !dst->record->complete))
          throw FatalError(e->span(), "cast to incomplete or opaque type");
        if (!dst->is_void() && !dst->is_scalar() && !dst->is_record())
          throw FatalError(e->span(), "invalid cast target type");
        if (dst->is_record() && src != dst)
          throw FatalError(e->span(), "cannot cast to struct type");
        e->type = dst;
        return e->type;
      }
      case ExprKind::SizeofExpr: {
        const Type* t = type_expr(e->kids[0]);
        if (!type_size(t))
          throw FatalError(e->span(),
                           "cannot take the size of an opaque or incomplete type");
        e->type = types().uint64();
        return e->type;
      }
      case ExprKind::SizeofType: {
        if (!type_size(e->cast_type))
          throw FatalError(e->span(),
                           "cannot take the size of an opaque or incomplete type");
        e->type = types().uint64();
        return e->type;
      }
      case ExprKind::Comma: {
        const Type* last = nullptr;
        for (Expr* k : e->kids) last = type_rvalue(k);
        e->type = last;
        return e->type;
      }
      case ExprKind::InitList:
        throw FatalError(e->span(),
                         "brace initializer outside a declaration");
    }
    throw FatalError(e->span(), "internal: unhandled expression kind");
  }

  void require_modifiable(Expr* lhs) {
    if (!lhs->lvalue)
      throw FatalError(lhs->span(), "expression is not assignable");
    if (lhs->type->is_const)
      throw FatalError(lhs->span(), "assignment to const-qualified lvalue");
    if (lhs->type->is_array())
      throw FatalError(lhs->span(), "array is not assignable");
  }

  const Type* type_unary(Expr* e) {
    const std::string& op = e->op;
    if (op == "&") {
      const Type* t = type_expr(e->kids[0]);
      if (!e->kids[0]->lvalue && !t->is_function())
        throw FatalError(e->span(), "cannot take the address of an rvalue");
      mark_address_taken(e->kids[0]);
      e->type = types().pointer_to(t);
      return e->type;
    }
    if (op == "*") {
      const Type* t = type_rvalue(e->kids[0]);
      if (!t->is_pointer())
        throw FatalError(e->span(), "dereference of non-pointer value");
      if (t->pointee->is_void())
        throw FatalError(e->span(), "dereference of void pointer");
      e->type = t->pointee;
      e->lvalue = !t->pointee->is_function();
      return e->type;
    }
    if (op == "++" || op == "--") {
      const Type* t = type_expr(e->kids[0]);
      require_modifiable(e->kids[0]);
      require_scalar(types().unqualified(t), e);
      e->type = types().unqualified(t);
      note_incdec(e->kids[0]);
      return e->type;
    }
    const Type* t = type_rvalue(e->kids[0]);
    if (op == "!") {
      require_scalar(t, e->kids[0]);
      e->type = types().int32();
      return e->type;
    }
    if (op == "~") {
      if (!t->is_arith_integer())
        throw FatalError(e->span(), "'~' requires an integer operand");
      e->type = promote(t);
      record_conv(e->kids[0], e->type);
      return e->type;
    }
    // unary + -
    if (!t->is_arithmetic())
      throw FatalError(e->span(), "unary '" + op + "' requires an arithmetic operand");
    e->type = promote(t);
    record_conv(e->kids[0], e->type);
    return e->type;
  }

  const Type* type_binary(Expr* e) {
    const std::string& op = e->op;
    const Type* a = type_rvalue(e->kids[0]);
    const Type* b = type_rvalue(e->kids[1]);

    if (op == "&&" || op == "||") {
      require_scalar(a, e->kids[0]);
      require_scalar(b, e->kids[1]);
      e->type = types().int32();
      return e->type;
    }
    if (op == "<<" || op == ">>") {
      if (!a->is_arith_integer() || !b->is_arith_integer())
        throw FatalError(e->span(), "shift requires integer operands");
      e->type = promote(a);
      record_conv(e->kids[0], e->type);
      return e->type;
    }
    if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" ||
        op == ">=") {
      if (a->is_arithmetic() && b->is_arithmetic()) {
        const Type* c = uac(a, b);
        record_conv(e->kids[0], c);
        record_conv(e->kids[1], c);
      } else if (!(a->is_pointer() || b->is_pointer())) {
        throw FatalError(e->span(), "invalid comparison operands");
      }
      e->type = types().int32();
      return e->type;
    }
    if (op == "+" || op == "-") {
      if (a->is_pointer() && b->is_arith_integer()) {
        check_pointer_arith(a, e);
        e->type = a;
        return e->type;
      }
      if (op == "+" && a->is_arith_integer() && b->is_pointer()) {
        check_pointer_arith(b, e);
        e->type = b;
        return e->type;
      }
      if (op == "-" && a->is_pointer() && b->is_pointer()) {
        e->type = types().int64();
        return e->type;
      }
    }
    if (!a->is_arithmetic() || !b->is_arithmetic())
      throw FatalError(e->span(),
                       "invalid operands to binary '" + op + "'");
    if ((op == "%" || op == "&" || op == "|" || op == "^") &&
        (!a->is_arith_integer() || !b->is_arith_integer()))
      throw FatalError(e->span(), "'" + op + "' requires integer operands");
    const Type* c = uac(a, b);
    record_conv(e->kids[0], c);
    record_conv(e->kids[1], c);
    e->type = c;
    return e->type;
  }

  void check_pointer_arith(const Type* p, const Expr* e) {
    if (p->pointee->is_void() || p->pointee->is_function() ||
        !type_size(p->pointee))
      throw FatalError(e->span(),
                       "pointer arithmetic requires a sized pointee");
  }

  const Type* type_assign(Expr* e) {
    Expr* lhs = e->kids[0];
    const Type* lt = type_expr(lhs);
    require_modifiable(lhs);
    const Type* rt = type_rvalue(e->kids[1]);
    if (e->op != "=") {
      // Compound assignment follows the matching binary operator's rules.
      std::string bin_op = e->op.substr(0, e->op.size() - 1);
      bool int_only = bin_op == "%" || bin_op == "&" || bin_op == "|" ||
                      bin_op == "^" || bin_op == "<<" || bin_op == ">>";
      const Type* ult = types().unqualified(lt);
      if (ult->is_pointer()) {
        if (!(bin_op == "+" || bin_op == "-") || !rt->is_arith_integer())
          throw FatalError(e->span(), "invalid compound assignment to pointer");
        check_pointer_arith(ult, e);
      } else if (int_only && (!ult->is_arith_integer() ||
                              !rt->is_arith_integer())) {
        throw FatalError(e->span(),
                         "'" + e->op + "' requires integer operands");
      } else if (!ult->is_arithmetic() || !rt->is_arithmetic()) {
        throw FatalError(e->span(), "invalid compound assignment operands");
      }
    } else {
      const Type* ult = types().unqualified(lt);
      if (ult->is_record()) {
        if (!rt->is_record() || rt->record != ult->record)
          throw FatalError(e->span(), "incompatible struct assignment");
      } else if (ult->is_opaque()) {
        // Assignment into an opaque lvalue; tolerated for pattern checks.
      } else if (!ult->is_scalar()) {
        throw FatalError(e->span(), "invalid assignment target type");
      } else if (!rt->is_scalar()) {
        throw FatalError(e->span(), "invalid assignment source type");
      }
      record_conv(e->kids[1], lt);
    }
    e->type = types().unqualified(lt);

    note_def(e);
    return e->type;
  }

  void note_incdec(Expr* lhs) {
    if (!cur_fn_ || lhs->kind != ExprKind::Ident || !lhs->sym) return;
    if (!lhs->sym->is_local_object()) return;
    TypedUnit::DefInfo di;  // not a plain assignment; blocks EOF-ability
    out_->def_table[cur_fn_][lhs->sym].push_back(di);
  }

  // Record definitions of plain locals for the definition table.
  void note_def(Expr* assign) {
    if (!cur_fn_) return;
    Expr* lhs = assign->kids[0];
    if (lhs->kind != ExprKind::Ident || !lhs->sym) return;
    Symbol* s = lhs->sym;
    if (!s->is_local_object()) return;
    TypedUnit::DefInfo di;
    di.rhs = assign->kids[1];
    di.plain_assign = assign->op == "=";
    out_->def_table[cur_fn_][s].push_back(di);
  }

  const Type* type_call(Expr* e) {
    Expr* callee = e->kids[0];
    const Type* fn_type = nullptr;
    if (callee->kind == ExprKind::Ident) {
      type_expr(callee);
      const Type* t = callee->type;
      if (t->is_pointer() && t->pointee->is_function()) t = t->pointee;
      if (!t->is_function())
        throw FatalError(callee->span(),
                         "called object '" + callee->tok.text +
                             "' is not a function");
      fn_type = t;
    } else {
      const Type* t = type_rvalue(callee);
      if (t->is_pointer() && t->pointee->is_function()) t = t->pointee;
      if (!t->is_function())
        throw FatalError(callee->span(), "called object is not a function");
      fn_type = t;
    }

    size_t nargs = e->kids.size() - 1;
    if (!fn_type->unspecified_params) {
      if (fn_type->variadic ? nargs < fn_type->params.size()
                            : nargs != fn_type->params.size())
        throw FatalError(
            e->span(), "call with " + std::to_string(nargs) +
                           " arguments, expected " +
                           std::to_string(fn_type->params.size()) +
                           (fn_type->variadic ? " or more" : ""));
    }
    for (size_t i = 0; i < nargs; ++i) {
      Expr* arg = e->kids[i + 1];
      type_rvalue(arg);
      if (i < fn_type->params.size()) record_conv(arg, fn_type->params[i]);
    }
    e->type = fn_type->ret;
    return e->type;
  }
};

}  // namespace

std::unique_ptr<TypedUnit> resolve_and_type(TranslationUnit& tu,
                                            const SourceManager& sm) {
  return SemaPass(tu, sm).run();
}

// ---- EOF-domain classification ----

namespace {

bool is_unsigned_char(const Type* t) {
  return t && t->is_integer() && t->width == 8 && !t->is_signed &&
         !t->is_plain_char && !t->is_bool;
}

// Least fixpoint of "int local whose every definition is an EOF-producing
// call or another EOF-able local". Parameters and address-taken variables
// never qualify.
class EofSets {
 public:
  explicit EofSets(const TypedUnit& typed) : typed_(typed) {}

  bool var_is_eofable(const Symbol* s, const FunctionDef* fn) {
    compute(fn);
    return eofable_.count(s) > 0;
  }

 private:
  const TypedUnit& typed_;
  std::set<const Symbol*> eofable_;
  std::set<const FunctionDef*> done_;

  static bool is_eof_call(const Expr* e) {
    if (e->kind != ExprKind::Call) return false;
    const Expr* callee = e->kids[0];
    return callee->kind == ExprKind::Ident && callee->sym &&
           callee->sym->is_libc && callee->sym->traits.eof_producing;
  }

  void compute(const FunctionDef* fn) {
    if (done_.count(fn)) return;
    done_.insert(fn);
    auto it = typed_.def_table.find(fn);
    if (it == typed_.def_table.end()) return;
    const auto& defs = it->second;

    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [sym, infos] : defs) {
        if (eofable_.count(sym)) continue;
        if (sym->kind != Symbol::Kind::Variable || sym->address_taken)
          continue;
        const Type* t = sym->type;
        if (!(t->is_integer() && t->width == dialect::int_bits &&
              t->is_signed && !t->is_const))
          continue;
        if (infos.empty()) continue;
        bool all_ok = true;
        for (const auto& di : infos) {
          if (!di.plain_assign || !di.rhs) {
            all_ok = false;
            break;
          }
          if (is_eof_call(di.rhs)) continue;
          if (di.rhs->kind == ExprKind::Ident && di.rhs->sym &&
              eofable_.count(di.rhs->sym))
            continue;
          all_ok = false;
          break;
        }
        if (all_ok) {
          eofable_.insert(sym);
          changed = true;
        }
      }
    }
  }
};

}  // namespace

EofDomain eof_domain(const Expr* arg, const TypedUnit& typed) {
  if (!arg) return EofDomain::Unsafe;

  if (arg->kind == ExprKind::Call) {
    const Expr* callee = arg->kids[0];
    if (callee->kind == ExprKind::Ident && callee->sym &&
        callee->sym->is_libc && callee->sym->traits.eof_producing)
      return EofDomain::EofCall;
  }
  if (arg->kind == ExprKind::Cast && is_unsigned_char(arg->cast_type))
    return EofDomain::UcharSafe;
  if (is_unsigned_char(arg->type)) return EofDomain::UcharSafe;

  {
    ConstEnv env;
    env.use_symbols = true;
    env.const_values = &typed.const_locals;
    auto v = const_eval(arg, env);
    if (v && *v >= dialect::eof_value && *v <= 255)
      return EofDomain::UcharSafe;
  }

  if (arg->kind == ExprKind::Ident && arg->sym &&
      arg->sym->kind == Symbol::Kind::Variable && !arg->sym->is_global) {
    // Find the owning function through the definition table.
    for (const auto& [fn, defs] : typed.def_table) {
      if (!defs.count(arg->sym)) continue;
      EofSets sets(typed);
      if (sets.var_is_eofable(arg->sym, fn)) return EofDomain::EofCall;
    }
  }
  return EofDomain::Unsafe;
}

}  // namespace minicheck::sema
