#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "minicheck/source.hpp"
#include "minicheck/types.hpp"

namespace minicheck {

struct Symbol;
struct FunctionDef;

enum class ExprKind {
  IntLit,
  FloatLit,
  CharLit,
  StringLit,
  Ident,
  Unary,      // prefix: - + ! ~ * & ++ --
  PostIncDec, // x++ / x--
  Binary,     // * / % + - << >> < > <= >= == != & ^ | && ||
  Assign,     // = += -= *= /= %= <<= >>= &= |= ^=
  Conditional,
  Call,       // kids[0] = callee, kids[1..] = args
  Subscript,  // kids[0][kids[1]]
  Member,     // op "." or "->"
  Cast,       // explicit cast
  SizeofExpr,
  SizeofType,
  Comma,
  InitList,   // brace initializer; kids are elements, possibly nested lists
};

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  std::string op;      // operator spelling where applicable
  Token tok;           // principal token: operator, literal, or identifier
  std::vector<Expr*> kids;
  std::string member;  // Member access field name
  const Type* cast_type = nullptr;  // Cast / SizeofType operand type

  // Filled by sema.
  const Type* type = nullptr;
  Symbol* sym = nullptr;  // Ident referent
  bool lvalue = false;

  SourceSpan span() const { return tok.span; }
};

enum class StmtKind {
  Compound,
  Expr,
  Decl,
  If,
  Switch,
  While,
  Do,
  For,
  Goto,
  Continue,
  Break,
  Return,
  Label,
  Case,
  Default,
  Null,
};

enum class Storage { None, Static, Extern, Typedef };

struct VarDecl {
  std::string name;
  const Type* type = nullptr;
  Storage storage = Storage::None;
  bool is_param = false;
  Expr* init = nullptr;  // scalar expression or an InitList node
  Token name_tok;
  Symbol* sym = nullptr;

  SourceSpan span() const { return name_tok.span; }
};

// Statement node. `id` is dense over the translation unit in lexical
// (pre-order) position; `executable` marks units that consume interpreter
// fuel: expression/decl/jump statements plus the condition evaluations of
// if/while/do/for/switch. A For is a unit even without a condition so that
// an empty for(;;) body still ticks.
struct Stmt {
  StmtKind kind = StmtKind::Null;
  int id = -1;
  bool executable = false;
  Token tok;

  Expr* expr = nullptr;        // Expr stmt / condition / return value / case value
  Stmt* then_branch = nullptr; // If
  Stmt* else_branch = nullptr; // If
  Stmt* body = nullptr;        // While/Do/For/Switch/Label/Case/Default
  Stmt* for_init = nullptr;    // Decl, Expr, or Null statement
  Expr* for_cond = nullptr;
  Stmt* for_incr = nullptr;    // synthesized Expr statement
  std::vector<Stmt*> items;    // Compound
  SourceSpan close_span;       // Compound: the closing brace
  std::string label;           // Label / Goto target
  std::vector<VarDecl*> decls; // Decl
  FunctionDef* fn = nullptr;   // enclosing function

  SourceSpan span() const { return tok.span; }
};

struct FunctionDef {
  std::string name;
  const Type* type = nullptr;  // Function type
  std::vector<VarDecl*> params;
  Stmt* body = nullptr;  // null for a plain declaration
  Storage storage = Storage::None;
  Token name_tok;
  Symbol* sym = nullptr;
  bool is_definition = false;
  // Dense-id statements belonging to this definition, lexical order.
  std::vector<Stmt*> stmts;

  SourceSpan span() const { return name_tok.span; }
};

struct TypedefDecl {
  std::string name;
  const Type* type = nullptr;
  Token name_tok;
};

struct TranslationUnit {
  TypeTable types;

  std::deque<Expr> expr_arena;
  std::deque<Stmt> stmt_arena;
  std::deque<VarDecl> var_arena;
  std::deque<FunctionDef> fn_arena;

  std::vector<FunctionDef*> functions;  // declarations and definitions
  std::vector<VarDecl*> globals;
  std::vector<TypedefDecl> typedefs;
  std::vector<EnumDef*> enum_defs;
  std::vector<RecordDef*> record_defs;

  // All statements indexed by dense id.
  std::vector<Stmt*> all_stmts;

  Expr* make_expr(ExprKind kind, Token tok) {
    expr_arena.push_back({});
    Expr* e = &expr_arena.back();
    e->kind = kind;
    e->tok = std::move(tok);
    return e;
  }
  Stmt* make_stmt(StmtKind kind, Token tok) {
    stmt_arena.push_back({});
    Stmt* s = &stmt_arena.back();
    s->kind = kind;
    s->tok = std::move(tok);
    return s;
  }
  VarDecl* make_var() {
    var_arena.push_back({});
    return &var_arena.back();
  }
  FunctionDef* make_fn() {
    fn_arena.push_back({});
    return &fn_arena.back();
  }

  FunctionDef* find_function(std::string_view name) const {
    for (FunctionDef* f : functions)
      if (f->name == name && f->is_definition) return f;
    for (FunctionDef* f : functions)
      if (f->name == name) return f;
    return nullptr;
  }
};

// Walks every expression in the unit (statement expressions, initializers,
// enumerator initializers), calling fn on each node, parents before kids.
void for_each_expr(const TranslationUnit& tu,
                   const std::function<void(Expr*)>& fn);
void for_each_expr_in(Expr* root, const std::function<void(Expr*)>& fn);

}  // namespace minicheck
