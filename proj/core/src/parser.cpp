#include "minicheck/parser.hpp"

#include <map>
#include <optional>

#include "minicheck/const_eval.hpp"
#include "minicheck/dialect.hpp"
#include "minicheck/libc_profile.hpp"

namespace minicheck::frontend {

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks)
      : toks_(toks), tu_(std::make_unique<TranslationUnit>()) {
    push_scope();
    for (const TypedefDecl& d : sema::builtin_typedefs(tu_->types)) {
      ScopeEntry e;
      e.kind = ScopeEntry::Kind::Typedef;
      e.type = d.type;
      scopes_.back()[d.name] = e;
    }
  }

  std::unique_ptr<TranslationUnit> run() {
    while (!peek().is(TokenKind::Eof)) parse_external_declaration();
    number_statements();
    return std::move(tu_);
  }

 private:
  struct ScopeEntry {
    enum class Kind { Typedef, EnumConst, Other };
    Kind kind = Kind::Other;
    const Type* type = nullptr;
    std::int64_t value = 0;
  };
  struct TagEntry {
    RecordDef* record = nullptr;
    EnumDef* enum_def = nullptr;
  };

  const std::vector<Token>& toks_;
  std::unique_ptr<TranslationUnit> tu_;
  size_t pos_ = 0;
  std::vector<std::map<std::string, ScopeEntry>> scopes_;
  std::vector<std::map<std::string, TagEntry>> tag_scopes_;
  std::vector<VarDecl*> pending_params_;
  bool pending_params_valid_ = false;

  // ---- token helpers ----

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool eat_punct(std::string_view p) {
    if (peek().is_punct(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_keyword(std::string_view k) {
    if (peek().is_keyword(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect_punct(std::string_view p) {
    if (!peek().is_punct(p))
      throw FatalError(peek().span, "expected '" + std::string(p) +
                                        "' before '" + describe(peek()) + "'");
    return advance();
  }
  Token expect_ident() {
    if (!peek().is(TokenKind::Identifier))
      throw FatalError(peek().span,
                       "expected identifier, found '" + describe(peek()) + "'");
    return advance();
  }
  static std::string describe(const Token& t) {
    return t.kind == TokenKind::Eof ? "<end of input>" : t.text;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw FatalError(peek().span, msg);
  }

  // ---- scopes ----

  void push_scope() {
    scopes_.emplace_back();
    tag_scopes_.emplace_back();
  }
  void pop_scope() {
    scopes_.pop_back();
    tag_scopes_.pop_back();
  }
  const ScopeEntry* lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }
  TagEntry* lookup_tag(const std::string& name) {
    for (auto it = tag_scopes_.rbegin(); it != tag_scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    return nullptr;
  }
  bool is_typedef_name(const Token& t) const {
    if (!t.is(TokenKind::Identifier)) return false;
    const ScopeEntry* e = lookup(t.text);
    return e && e->kind == ScopeEntry::Kind::Typedef;
  }

  std::map<std::string, std::int64_t> visible_consts() const {
    std::map<std::string, std::int64_t> out;
    for (const auto& scope : scopes_)
      for (const auto& [name, e] : scope)
        if (e.kind == ScopeEntry::Kind::EnumConst) out[name] = e.value;
    return out;
  }

  std::optional<std::int64_t> eval_const(Expr* e) {
    auto consts = visible_consts();
    sema::ConstEnv env;
    env.named_values = &consts;
    return sema::const_eval(e, env);
  }

  // ---- declaration specifiers ----

  struct DeclSpec {
    const Type* type = nullptr;
    Storage storage = Storage::None;
  };

  bool is_type_start(const Token& t) const {
    if (t.kind == TokenKind::Keyword) {
      static const char* starts[] = {
          "void",   "char",     "short",  "int",      "long",    "float",
          "double", "signed",   "unsigned", "_Bool",  "struct",  "union",
          "enum",   "const",    "volatile", "restrict", "static", "extern",
          "typedef", "register", "inline"};
      for (const char* s : starts)
        if (t.text == s) return true;
      return false;
    }
    return is_typedef_name(t);
  }

  DeclSpec parse_decl_specs() {
    DeclSpec ds;
    int n_void = 0, n_char = 0, n_short = 0, n_int = 0, n_long = 0;
    int n_float = 0, n_double = 0, n_signed = 0, n_unsigned = 0, n_bool = 0;
    bool is_const = false, is_volatile = false;
    const Type* named = nullptr;  // struct/union/enum/typedef type
    SourceSpan where = peek().span;

    auto set_storage = [&](Storage s) {
      if (ds.storage != Storage::None)
        fail("multiple storage class specifiers");
      ds.storage = s;
    };

    for (;;) {
      const Token& t = peek();
      if (t.kind == TokenKind::Keyword) {
        const std::string& k = t.text;
        if (k == "typedef") { set_storage(Storage::Typedef); advance(); continue; }
        if (k == "static") { set_storage(Storage::Static); advance(); continue; }
        if (k == "extern") { set_storage(Storage::Extern); advance(); continue; }
        if (k == "register" || k == "inline" || k == "restrict") {
          advance();
          continue;
        }
        if (k == "const") { is_const = true; advance(); continue; }
        if (k == "volatile") { is_volatile = true; advance(); continue; }
        if (k == "void") { ++n_void; advance(); continue; }
        if (k == "char") { ++n_char; advance(); continue; }
        if (k == "short") { ++n_short; advance(); continue; }
        if (k == "int") { ++n_int; advance(); continue; }
        if (k == "long") { ++n_long; advance(); continue; }
        if (k == "float") { ++n_float; advance(); continue; }
        if (k == "double") { ++n_double; advance(); continue; }
        if (k == "signed") { ++n_signed; advance(); continue; }
        if (k == "unsigned") { ++n_unsigned; advance(); continue; }
        if (k == "_Bool") { ++n_bool; advance(); continue; }
        if (k == "struct" || k == "union") {
          if (named) fail("multiple type specifiers");
          named = parse_record_spec(k == "union");
          continue;
        }
        if (k == "enum") {
          if (named) fail("multiple type specifiers");
          named = parse_enum_spec();
          continue;
        }
        break;
      }
      if (is_typedef_name(t) && !named && n_void + n_char + n_short + n_int +
                                              n_long + n_float + n_double +
                                              n_signed + n_unsigned + n_bool ==
                                          0) {
        named = lookup(t.text)->type;
        advance();
        continue;
      }
      break;
    }

    TypeTable& tt = tu_->types;
    const Type* base = nullptr;
    if (named) {
      if (n_void + n_char + n_short + n_int + n_long + n_float + n_double +
              n_signed + n_unsigned + n_bool >
          0)
        throw FatalError(where, "invalid type specifier combination");
      base = named;
    } else if (n_bool) {
      base = tt.bool_type();
    } else if (n_void) {
      base = tt.void_type();
    } else if (n_float) {
      base = tt.float_type(dialect::float_bits);
    } else if (n_double) {
      base = tt.float_type(dialect::double_bits);
    } else if (n_char) {
      if (n_signed)
        base = tt.int_type(dialect::char_bits, true);
      else if (n_unsigned)
        base = tt.int_type(dialect::char_bits, false);
      else
        base = tt.plain_char();
    } else if (n_short) {
      base = tt.int_type(dialect::short_bits, n_unsigned == 0);
    } else if (n_long) {
      base = tt.int_type(dialect::long_bits, n_unsigned == 0);
    } else if (n_int || n_signed || n_unsigned) {
      base = tt.int_type(dialect::int_bits, n_unsigned == 0);
    } else {
      return ds;  // no type specifier seen; ds.type stays null
    }
    ds.type = tt.qualified(base, is_const, is_volatile);
    return ds;
  }

  const Type* parse_record_spec(bool is_union) {
    Token kw = advance();  // struct / union
    std::string tag;
    if (peek().is(TokenKind::Identifier)) tag = advance().text;

    TypeTable& tt = tu_->types;
    if (!peek().is_punct("{")) {
      if (tag.empty()) fail("expected struct tag or body");
      if (TagEntry* e = lookup_tag(tag)) {
        if (e->record) return tt.record_type(e->record);
        throw FatalError(kw.span, "'" + tag + "' declared as a different tag kind");
      }
      RecordDef* def = tt.make_record(tag, is_union, kw.span);
      tag_scopes_.back()[tag].record = def;
      tu_->record_defs.push_back(def);
      return tt.record_type(def);
    }

    RecordDef* def = nullptr;
    if (!tag.empty()) {
      auto it = tag_scopes_.back().find(tag);
      if (it != tag_scopes_.back().end()) {
        if (!it->second.record)
          throw FatalError(kw.span, "'" + tag + "' declared as a different tag kind");
        def = it->second.record;
        if (def->complete)
          throw FatalError(kw.span, "redefinition of '" + tag + "'");
      }
    }
    if (!def) {
      def = tt.make_record(tag, is_union, kw.span);
      if (!tag.empty()) tag_scopes_.back()[tag].record = def;
      tu_->record_defs.push_back(def);
    }

    expect_punct("{");
    std::uint64_t offset = 0;
    std::uint64_t max_align = 1;
    while (!eat_punct("}")) {
      DeclSpec ds = parse_decl_specs();
      if (!ds.type) fail("expected member type");
      if (ds.storage != Storage::None)
        fail("storage class on struct member");
      for (;;) {
        Dtor d = parse_declarator(ds.type, false);
        if (peek().is_punct(":"))
          throw FatalError(peek().span,
                           "bit-fields are outside the supported subset");
        auto sz = type_size(d.type);
        if (!sz)
          throw FatalError(d.name_tok.span,
                           "member has incomplete or unsized type");
        RecordMember m;
        m.name = d.name;
        m.type = d.type;
        m.span = d.name_tok.span;
        std::uint64_t align = type_align(d.type);
        if (align > max_align) max_align = align;
        if (!is_union) {
          offset = (offset + align - 1) / align * align;
          m.offset = offset;
          offset += *sz;
        } else {
          m.offset = 0;
          if (*sz > offset) offset = *sz;
        }
        def->members.push_back(std::move(m));
        if (eat_punct(",")) continue;
        expect_punct(";");
        break;
      }
    }
    def->size = (offset + max_align - 1) / max_align * max_align;
    if (def->size == 0) def->size = 1;
    def->complete = true;
    return tt.record_type(def);
  }

  const Type* parse_enum_spec() {
    Token kw = advance();  // enum
    std::string tag;
    if (peek().is(TokenKind::Identifier)) tag = advance().text;

    TypeTable& tt = tu_->types;
    if (!peek().is_punct("{")) {
      if (tag.empty()) fail("expected enum tag or body");
      TagEntry* e = lookup_tag(tag);
      if (!e || !e->enum_def)
        throw FatalError(kw.span, "unknown enum '" + tag + "'");
      return tt.enum_type(e->enum_def);
    }

    EnumDef* def = tt.make_enum(tag, kw.span);
    if (!tag.empty()) {
      if (tag_scopes_.back().count(tag))
        throw FatalError(kw.span, "redefinition of '" + tag + "'");
      tag_scopes_.back()[tag].enum_def = def;
    }
    tu_->enum_defs.push_back(def);

    expect_punct("{");
    std::int64_t next = 0;
    bool first = true;
    while (!peek().is_punct("}")) {
      if (!first) expect_punct(",");
      first = false;
      if (peek().is_punct("}")) break;  // trailing comma
      Token name = expect_ident();
      Enumerator en;
      en.name = name.text;
      en.span = name.span;
      if (eat_punct("=")) {
        Expr* init = parse_assignment();
        en.init = init;
        auto v = eval_const(init);
        if (!v)
          throw FatalError(name.span,
                           "enumerator initializer is not a constant expression");
        next = *v;
      }
      if (next < dialect::signed_min(dialect::int_bits) ||
          next > dialect::signed_max(dialect::int_bits))
        throw FatalError(name.span, "enumerator value out of range of int");
      en.value = next;
      ++next;
      ScopeEntry se;
      se.kind = ScopeEntry::Kind::EnumConst;
      se.value = en.value;
      se.type = tt.enum_type(def);
      scopes_.back()[en.name] = se;
      def->enumerators.push_back(std::move(en));
    }
    expect_punct("}");
    return tt.enum_type(def);
  }

  // ---- declarators ----

  struct Dtor {
    const Type* type = nullptr;
    std::string name;
    Token name_tok;
  };

  Dtor parse_declarator(const Type* base, bool allow_abstract) {
    while (eat_punct("*")) {
      base = tu_->types.pointer_to(base);
      bool c = false, v = false;
      for (;;) {
        if (eat_keyword("const")) { c = true; continue; }
        if (eat_keyword("volatile")) { v = true; continue; }
        if (eat_keyword("restrict")) continue;
        break;
      }
      base = tu_->types.qualified(base, c, v);
    }

    // '(' is a grouping paren only when it cannot start a parameter list.
    if (peek().is_punct("(") &&
        !(peek(1).is_punct(")") || is_type_start(peek(1)))) {
      size_t open = pos_;
      ++pos_;
      skip_balanced_parens(open);
      const Type* outer = parse_type_suffixes(base);
      size_t end_pos = pos_;
      pos_ = open + 1;
      Dtor d = parse_declarator(outer, allow_abstract);
      expect_punct(")");
      pos_ = end_pos;
      return d;
    }

    Dtor d;
    if (peek().is(TokenKind::Identifier)) {
      d.name_tok = advance();
      d.name = d.name_tok.text;
    } else if (!allow_abstract) {
      fail("expected identifier in declarator");
    } else {
      d.name_tok = peek();
    }
    d.type = parse_type_suffixes(base);
    return d;
  }

  void skip_balanced_parens(size_t open_pos) {
    int depth = 1;
    while (depth > 0) {
      const Token& t = peek();
      if (t.is(TokenKind::Eof))
        throw FatalError(toks_[open_pos].span, "unbalanced parentheses");
      if (t.is_punct("(")) ++depth;
      if (t.is_punct(")")) --depth;
      ++pos_;
    }
  }

  const Type* parse_type_suffixes(const Type* base) {
    if (peek().is_punct("[")) {
      Token open = advance();
      std::optional<std::uint64_t> size;
      if (!peek().is_punct("]")) {
        Expr* e = parse_assignment();
        auto v = eval_const(e);
        if (!v)
          throw FatalError(open.span,
                           "variable-length arrays are outside the supported subset");
        if (*v <= 0)
          throw FatalError(open.span, "array length must be positive");
        size = static_cast<std::uint64_t>(*v);
      }
      expect_punct("]");
      const Type* elem = parse_type_suffixes(base);
      if (elem->is_function())
        throw FatalError(open.span, "array of functions is not a valid type");
      return tu_->types.array_of(elem, size);
    }
    if (peek().is_punct("(")) {
      Token open = advance();
      if (base->is_function() || base->is_array())
        throw FatalError(open.span,
                         "function declarator applied to a non-object type");
      std::vector<const Type*> param_types;
      std::vector<VarDecl*> params;
      bool variadic = false, unspecified = false;
      if (eat_punct(")")) {
        unspecified = true;
      } else if (peek().is_keyword("void") && peek(1).is_punct(")")) {
        advance();
        advance();
      } else {
        for (;;) {
          if (eat_punct("...")) {
            variadic = true;
            expect_punct(")");
            break;
          }
          DeclSpec ds = parse_decl_specs();
          if (!ds.type) fail("expected parameter type");
          if (ds.storage != Storage::None)
            fail("storage class on parameter");
          Dtor d = parse_declarator(ds.type, true);
          const Type* pt = d.type;
          if (pt->is_array())
            pt = tu_->types.pointer_to(
                tu_->types.qualified(pt->pointee, pt->is_const, pt->is_volatile));
          if (pt->is_function()) pt = tu_->types.pointer_to(pt);
          VarDecl* vd = tu_->make_var();
          vd->name = d.name;
          vd->type = pt;
          vd->is_param = true;
          vd->name_tok = d.name_tok;
          params.push_back(vd);
          param_types.push_back(pt);
          if (eat_punct(",")) continue;
          expect_punct(")");
          break;
        }
      }
      pending_params_ = params;
      pending_params_valid_ = true;
      return tu_->types.function(base, std::move(param_types), variadic,
                                 unspecified);
    }
    return base;
  }

  // ---- external declarations ----

  void parse_external_declaration() {
    DeclSpec ds = parse_decl_specs();
    if (!ds.type) {
      if (peek().is_punct(";")) fail("declaration without a type");
      fail("expected declaration, found '" + describe(peek()) + "'");
    }
    if (eat_punct(";")) return;  // tag-only declaration

    bool first = true;
    for (;;) {
      pending_params_valid_ = false;
      Dtor d = parse_declarator(ds.type, false);

      if (ds.storage == Storage::Typedef) {
        ScopeEntry e;
        e.kind = ScopeEntry::Kind::Typedef;
        e.type = d.type;
        scopes_.back()[d.name] = e;
        TypedefDecl td;
        td.name = d.name;
        td.type = d.type;
        td.name_tok = d.name_tok;
        tu_->typedefs.push_back(std::move(td));
      } else if (d.type->is_function()) {
        FunctionDef* fn = tu_->make_fn();
        fn->name = d.name;
        fn->type = d.type;
        fn->storage = ds.storage;
        fn->name_tok = d.name_tok;
        if (pending_params_valid_) fn->params = pending_params_;
        tu_->functions.push_back(fn);
        register_name(d.name);
        if (first && peek().is_punct("{")) {
          fn->is_definition = true;
          for (VarDecl* p : fn->params)
            if (p->name.empty())
              throw FatalError(fn->name_tok.span,
                               "parameter name omitted in function definition");
          push_scope();
          for (VarDecl* p : fn->params) register_name(p->name);
          fn->body = parse_compound();
          pop_scope();
          return;
        }
        if (peek().is(TokenKind::Identifier) || is_type_start(peek()))
          throw FatalError(peek().span,
                           "old-style parameter declarations are outside the supported subset");
      } else {
        VarDecl* vd = tu_->make_var();
        vd->name = d.name;
        vd->type = d.type;
        vd->storage = ds.storage;
        vd->name_tok = d.name_tok;
        register_name(d.name);
        if (eat_punct("=")) vd->init = parse_initializer();
        if (!vd->type->is_array() && !type_size(vd->type) &&
            ds.storage != Storage::Extern)
          throw FatalError(d.name_tok.span,
                           "variable has incomplete or unsized type");
        tu_->globals.push_back(vd);
      }

      first = false;
      if (eat_punct(",")) continue;
      expect_punct(";");
      break;
    }
  }

  void register_name(const std::string& name) {
    ScopeEntry e;
    e.kind = ScopeEntry::Kind::Other;
    scopes_.back()[name] = e;
  }

  // ---- statements ----

  Stmt* parse_compound() {
    Token open = expect_punct("{");
    Stmt* s = tu_->make_stmt(StmtKind::Compound, open);
    push_scope();
    while (!peek().is_punct("}")) {
      if (peek().is(TokenKind::Eof))
        throw FatalError(open.span, "unterminated block");
      s->items.push_back(parse_statement());
    }
    pop_scope();
    s->close_span = expect_punct("}").span;
    return s;
  }

  Stmt* parse_statement() {
    const Token& t = peek();
    if (t.is_punct("{")) return parse_compound();
    if (t.is_punct(";")) {
      Token tok = advance();
      return tu_->make_stmt(StmtKind::Null, tok);
    }
    if (t.kind == TokenKind::Keyword) {
      const std::string& k = t.text;
      if (k == "if") return parse_if();
      if (k == "switch") return parse_switch();
      if (k == "while") return parse_while();
      if (k == "do") return parse_do();
      if (k == "for") return parse_for();
      if (k == "goto") {
        Token kw = advance();
        Token label = expect_ident();
        expect_punct(";");
        Stmt* s = tu_->make_stmt(StmtKind::Goto, kw);
        s->label = label.text;
        return s;
      }
      if (k == "continue") {
        Token kw = advance();
        expect_punct(";");
        return tu_->make_stmt(StmtKind::Continue, kw);
      }
      if (k == "break") {
        Token kw = advance();
        expect_punct(";");
        return tu_->make_stmt(StmtKind::Break, kw);
      }
      if (k == "return") {
        Token kw = advance();
        Stmt* s = tu_->make_stmt(StmtKind::Return, kw);
        if (!peek().is_punct(";")) s->expr = parse_expr();
        expect_punct(";");
        return s;
      }
      if (k == "case") {
        Token kw = advance();
        Stmt* s = tu_->make_stmt(StmtKind::Case, kw);
        s->expr = parse_conditional();
        expect_punct(":");
        s->body = parse_statement();
        return s;
      }
      if (k == "default") {
        Token kw = advance();
        expect_punct(":");
        Stmt* s = tu_->make_stmt(StmtKind::Default, kw);
        s->body = parse_statement();
        return s;
      }
    }
    if (t.is(TokenKind::Identifier) && peek(1).is_punct(":") &&
        !is_typedef_name(t)) {
      Token name = advance();
      advance();  // ':'
      Stmt* s = tu_->make_stmt(StmtKind::Label, name);
      s->label = name.text;
      s->body = parse_statement();
      return s;
    }
    if (is_declaration_start()) return parse_local_declaration();

    Token first = peek();
    Stmt* s = tu_->make_stmt(StmtKind::Expr, first);
    s->expr = parse_expr();
    expect_punct(";");
    return s;
  }

  bool is_declaration_start() const {
    const Token& t = peek();
    if (t.kind == TokenKind::Keyword) return is_type_start(t);
    if (!is_typedef_name(t)) return false;
    // A typedef name starts a declaration unless used as an expression,
    // e.g. `T * x;` declares x; a lone `T;` redeclares nothing useful but
    // is still a declaration. Shadowed names were filtered by lookup.
    return true;
  }

  Stmt* parse_local_declaration() {
    Token first = peek();
    DeclSpec ds = parse_decl_specs();
    if (!ds.type) fail("expected declaration");
    Stmt* s = tu_->make_stmt(StmtKind::Decl, first);
    if (eat_punct(";")) return s;  // local tag declaration
    for (;;) {
      pending_params_valid_ = false;
      Dtor d = parse_declarator(ds.type, false);
      if (ds.storage == Storage::Typedef) {
        ScopeEntry e;
        e.kind = ScopeEntry::Kind::Typedef;
        e.type = d.type;
        scopes_.back()[d.name] = e;
        TypedefDecl td;
        td.name = d.name;
        td.type = d.type;
        td.name_tok = d.name_tok;
        tu_->typedefs.push_back(std::move(td));
      } else if (d.type->is_function()) {
        FunctionDef* fn = tu_->make_fn();
        fn->name = d.name;
        fn->type = d.type;
        fn->storage = ds.storage;
        fn->name_tok = d.name_tok;
        if (pending_params_valid_) fn->params = pending_params_;
        tu_->functions.push_back(fn);
        register_name(d.name);
      } else {
        VarDecl* vd = tu_->make_var();
        vd->name = d.name;
        vd->type = d.type;
        vd->storage = ds.storage;
        vd->name_tok = d.name_tok;
        register_name(d.name);
        if (eat_punct("=")) vd->init = parse_initializer();
        if (!type_size(vd->type) && ds.storage != Storage::Extern)
          throw FatalError(d.name_tok.span,
                           "variable has incomplete or unsized type");
        s->decls.push_back(vd);
      }
      if (eat_punct(",")) continue;
      expect_punct(";");
      break;
    }
    return s;
  }

  Stmt* parse_if() {
    Token kw = advance();
    expect_punct("(");
    Stmt* s = tu_->make_stmt(StmtKind::If, kw);
    s->expr = parse_expr();
    expect_punct(")");
    s->then_branch = parse_statement();
    if (eat_keyword("else")) s->else_branch = parse_statement();
    return s;
  }

  Stmt* parse_switch() {
    Token kw = advance();
    expect_punct("(");
    Stmt* s = tu_->make_stmt(StmtKind::Switch, kw);
    s->expr = parse_expr();
    expect_punct(")");
    s->body = parse_statement();
    return s;
  }

  Stmt* parse_while() {
    Token kw = advance();
    expect_punct("(");
    Stmt* s = tu_->make_stmt(StmtKind::While, kw);
    s->expr = parse_expr();
    expect_punct(")");
    s->body = parse_statement();
    return s;
  }

  Stmt* parse_do() {
    Token kw = advance();
    Stmt* s = tu_->make_stmt(StmtKind::Do, kw);
    s->body = parse_statement();
    if (!eat_keyword("while")) fail("expected 'while' after do-body");
    expect_punct("(");
    s->expr = parse_expr();
    expect_punct(")");
    expect_punct(";");
    return s;
  }

  Stmt* parse_for() {
    Token kw = advance();
    expect_punct("(");
    Stmt* s = tu_->make_stmt(StmtKind::For, kw);
    push_scope();
    if (peek().is_punct(";")) {
      Token semi = advance();
      s->for_init = tu_->make_stmt(StmtKind::Null, semi);
    } else if (is_declaration_start()) {
      s->for_init = parse_local_declaration();
    } else {
      Token first = peek();
      Stmt* init = tu_->make_stmt(StmtKind::Expr, first);
      init->expr = parse_expr();
      expect_punct(";");
      s->for_init = init;
    }
    if (!peek().is_punct(";")) s->for_cond = parse_expr();
    expect_punct(";");
    if (!peek().is_punct(")")) {
      Token first = peek();
      Stmt* incr = tu_->make_stmt(StmtKind::Expr, first);
      incr->expr = parse_expr();
      s->for_incr = incr;
    }
    expect_punct(")");
    s->body = parse_statement();
    pop_scope();
    return s;
  }

  // ---- initializers ----

  Expr* parse_initializer() {
    if (!peek().is_punct("{")) return parse_assignment();
    Token open = advance();
    Expr* list = tu_->make_expr(ExprKind::InitList, open);
    bool first = true;
    while (!peek().is_punct("}")) {
      if (!first) {
        expect_punct(",");
        if (peek().is_punct("}")) break;  // trailing comma
      }
      first = false;
      if (peek().is_punct(".") || peek().is_punct("["))
        throw FatalError(peek().span,
                         "designated initializers are outside the supported subset");
      list->kids.push_back(parse_initializer());
    }
    expect_punct("}");
    return list;
  }

  // ---- expressions ----

  Expr* parse_expr() {  // comma expression
    Expr* e = parse_assignment();
    if (!peek().is_punct(",")) return e;
    Expr* c = tu_->make_expr(ExprKind::Comma, peek());
    c->kids.push_back(e);
    while (eat_punct(",")) c->kids.push_back(parse_assignment());
    return c;
  }

  Expr* parse_assignment() {
    Expr* lhs = parse_conditional();
    static const char* ops[] = {"=",  "+=", "-=", "*=",  "/=",  "%=",
                                "<<=", ">>=", "&=", "|=", "^="};
    for (const char* op : ops) {
      if (peek().is_punct(op)) {
        Token t = advance();
        Expr* e = tu_->make_expr(ExprKind::Assign, t);
        e->op = op;
        e->kids = {lhs, parse_assignment()};
        return e;
      }
    }
    return lhs;
  }

  Expr* parse_conditional() {
    Expr* c = parse_binary(0);
    if (!peek().is_punct("?")) return c;
    Token t = advance();
    Expr* e = tu_->make_expr(ExprKind::Conditional, t);
    Expr* a = parse_expr();
    expect_punct(":");
    Expr* b = parse_conditional();
    e->kids = {c, a, b};
    return e;
  }

  struct BinOp {
    const char* op;
    int prec;
  };
  static const BinOp* find_binop(const Token& t) {
    static const BinOp ops[] = {
        {"||", 1}, {"&&", 2}, {"|", 3},  {"^", 4},  {"&", 5},
        {"==", 6}, {"!=", 6}, {"<", 7},  {">", 7},  {"<=", 7}, {">=", 7},
        {"<<", 8}, {">>", 8}, {"+", 9},  {"-", 9},  {"*", 10}, {"/", 10},
        {"%", 10}};
    if (t.kind != TokenKind::Punct) return nullptr;
    for (const BinOp& b : ops)
      if (t.text == b.op) return &b;
    return nullptr;
  }

  Expr* parse_binary(int min_prec) {
    Expr* lhs = parse_cast();
    for (;;) {
      const BinOp* op = find_binop(peek());
      if (!op || op->prec < min_prec) return lhs;
      Token t = advance();
      Expr* rhs = parse_binary(op->prec + 1);
      Expr* e = tu_->make_expr(ExprKind::Binary, t);
      e->op = op->op;
      e->kids = {lhs, rhs};
      lhs = e;
    }
  }

  bool starts_type_name(const Token& t) const {
    if (t.kind == TokenKind::Keyword) {
      static const char* starts[] = {"void",     "char",   "short", "int",
                                     "long",     "float",  "double", "signed",
                                     "unsigned", "_Bool",  "struct", "union",
                                     "enum",     "const",  "volatile"};
      for (const char* s : starts)
        if (t.text == s) return true;
      return false;
    }
    return is_typedef_name(t);
  }

  const Type* parse_type_name() {
    DeclSpec ds = parse_decl_specs();
    if (!ds.type) fail("expected type name");
    Dtor d = parse_declarator(ds.type, true);
    if (!d.name.empty())
      throw FatalError(d.name_tok.span, "unexpected name in type name");
    return d.type;
  }

  Expr* parse_cast() {
    if (peek().is_punct("(") && starts_type_name(peek(1))) {
      Token open = advance();
      const Type* ty = parse_type_name();
      expect_punct(")");
      if (peek().is_punct("{"))
        throw FatalError(open.span,
                         "compound literals are outside the supported subset");
      Expr* e = tu_->make_expr(ExprKind::Cast, open);
      e->cast_type = ty;
      e->kids = {parse_cast()};
      return e;
    }
    return parse_unary();
  }

  Expr* parse_unary() {
    const Token& t = peek();
    if (t.is_punct("++") || t.is_punct("--")) {
      Token tok = advance();
      Expr* e = tu_->make_expr(ExprKind::Unary, tok);
      e->op = tok.text;
      e->kids = {parse_unary()};
      return e;
    }
    for (const char* op : {"&", "*", "+", "-", "~", "!"}) {
      if (t.is_punct(op)) {
        Token tok = advance();
        Expr* e = tu_->make_expr(ExprKind::Unary, tok);
        e->op = op;
        e->kids = {parse_cast()};
        return e;
      }
    }
    if (t.is_keyword("sizeof")) {
      Token tok = advance();
      if (peek().is_punct("(") && starts_type_name(peek(1))) {
        advance();
        const Type* ty = parse_type_name();
        expect_punct(")");
        Expr* e = tu_->make_expr(ExprKind::SizeofType, tok);
        e->cast_type = ty;
        return e;
      }
      Expr* e = tu_->make_expr(ExprKind::SizeofExpr, tok);
      e->kids = {parse_unary()};
      return e;
    }
    return parse_postfix();
  }

  Expr* parse_postfix() {
    Expr* e = parse_primary();
    for (;;) {
      const Token& t = peek();
      if (t.is_punct("[")) {
        Token tok = advance();
        Expr* idx = parse_expr();
        expect_punct("]");
        Expr* s = tu_->make_expr(ExprKind::Subscript, tok);
        s->kids = {e, idx};
        e = s;
      } else if (t.is_punct("(")) {
        Token tok = advance();
        Expr* call = tu_->make_expr(ExprKind::Call, tok);
        call->kids.push_back(e);
        if (!peek().is_punct(")")) {
          for (;;) {
            call->kids.push_back(parse_assignment());
            if (!eat_punct(",")) break;
          }
        }
        expect_punct(")");
        e = call;
      } else if (t.is_punct(".") || t.is_punct("->")) {
        Token tok = advance();
        Token name = expect_ident();
        Expr* m = tu_->make_expr(ExprKind::Member, tok);
        m->op = tok.text;
        m->member = name.text;
        m->kids = {e};
        e = m;
      } else if (t.is_punct("++") || t.is_punct("--")) {
        Token tok = advance();
        Expr* p = tu_->make_expr(ExprKind::PostIncDec, tok);
        p->op = tok.text;
        p->kids = {e};
        e = p;
      } else {
        return e;
      }
    }
  }

  Expr* parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::IntConst:
        return tu_->make_expr(ExprKind::IntLit, advance());
      case TokenKind::FloatConst:
        return tu_->make_expr(ExprKind::FloatLit, advance());
      case TokenKind::CharConst:
        return tu_->make_expr(ExprKind::CharLit, advance());
      case TokenKind::StringLit: {
        Token first = advance();
        // Adjacent string literals concatenate.
        while (peek().is(TokenKind::StringLit)) {
          Token next = advance();
          std::string a = first.text.substr(0, first.text.size() - 1);
          first.text = a + next.text.substr(1);
        }
        return tu_->make_expr(ExprKind::StringLit, first);
      }
      case TokenKind::Identifier:
        return tu_->make_expr(ExprKind::Ident, advance());
      case TokenKind::Punct:
        if (t.text == "(") {
          advance();
          Expr* e = parse_expr();
          expect_punct(")");
          return e;
        }
        break;
      default:
        break;
    }
    fail("expected expression, found '" + describe(t) + "'");
  }

  // ---- statement numbering ----

  void number_statements() {
    for (FunctionDef* f : tu_->functions) {
      if (!f->body) continue;
      number_stmt(f->body, f);
    }
  }

  void number_stmt(Stmt* s, FunctionDef* fn) {
    if (!s) return;
    s->id = static_cast<int>(tu_->all_stmts.size());
    s->fn = fn;
    tu_->all_stmts.push_back(s);
    fn->stmts.push_back(s);
    switch (s->kind) {
      case StmtKind::Expr:
      case StmtKind::Decl:
      case StmtKind::Return:
      case StmtKind::Break:
      case StmtKind::Continue:
      case StmtKind::Goto:
      case StmtKind::If:
      case StmtKind::While:
      case StmtKind::Do:
      case StmtKind::For:
      case StmtKind::Switch:
        s->executable = true;
        break;
      default:
        s->executable = false;
        break;
    }
    number_stmt(s->for_init, fn);
    number_stmt(s->for_incr, fn);
    number_stmt(s->then_branch, fn);
    number_stmt(s->else_branch, fn);
    number_stmt(s->body, fn);
    for (Stmt* k : s->items) number_stmt(k, fn);
  }
};

}  // namespace

std::unique_ptr<TranslationUnit> parse(const std::vector<Token>& tokens) {
  return Parser(tokens).run();
}

}  // namespace minicheck::frontend
