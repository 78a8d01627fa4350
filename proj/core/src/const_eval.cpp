#include "minicheck/const_eval.hpp"

#include "minicheck/dialect.hpp"
#include "minicheck/literals.hpp"
#include "minicheck/symbols.hpp"

namespace minicheck::sema {

namespace {

// Normalizes a mathematical value onto a node's integer type; identity when
// the node is untyped (parse-time evaluation).
std::int64_t normalize(std::int64_t v, const Type* t) {
  if (!t || !(t->is_integer() || t->is_enum())) return v;
  int width = t->kind == Type::Kind::Enum ? dialect::int_bits : t->width;
  if (width >= 64) return v;
  std::uint64_t mask = dialect::unsigned_max(width);
  std::uint64_t uns = static_cast<std::uint64_t>(v) & mask;
  bool is_signed = t->kind == Type::Kind::Enum || t->is_signed;
  if (t->is_bool) return uns != 0;
  if (is_signed && (uns >> (width - 1)) != 0)
    return static_cast<std::int64_t>(uns | ~mask);
  return static_cast<std::int64_t>(uns);
}

}  // namespace

std::optional<std::int64_t> const_eval(const Expr* e, const ConstEnv& env) {
  using frontend::parse_char_literal;
  using frontend::parse_int_literal;
  if (!e) return std::nullopt;

  auto wrap = [&](std::int64_t v) -> std::optional<std::int64_t> {
    return normalize(v, e->type);
  };

  switch (e->kind) {
    case ExprKind::IntLit:
      return wrap(static_cast<std::int64_t>(
          parse_int_literal(e->tok.text, e->tok.span).value));
    case ExprKind::CharLit:
      return wrap(parse_char_literal(e->tok.text, e->tok.span));
    case ExprKind::Ident: {
      if (env.use_symbols) {
        if (!e->sym) return std::nullopt;
        if (e->sym->kind == Symbol::Kind::Enumerator)
          return wrap(e->sym->enum_value);
        if (env.const_values) {
          auto it = env.const_values->find(e->sym);
          if (it != env.const_values->end()) return wrap(it->second);
        }
        return std::nullopt;
      }
      if (env.named_values) {
        auto it = env.named_values->find(e->tok.text);
        if (it != env.named_values->end()) return wrap(it->second);
      }
      return std::nullopt;
    }
    case ExprKind::SizeofType: {
      auto s = e->cast_type ? type_size(e->cast_type) : std::nullopt;
      if (!s) return std::nullopt;
      return wrap(static_cast<std::int64_t>(*s));
    }
    case ExprKind::SizeofExpr: {
      if (e->kids.empty() || !e->kids[0]->type) return std::nullopt;
      auto s = type_size(e->kids[0]->type);
      if (!s) return std::nullopt;
      return wrap(static_cast<std::int64_t>(*s));
    }
    case ExprKind::Cast: {
      if (e->cast_type && !(e->cast_type->is_integer() ||
                            e->cast_type->is_enum()))
        return std::nullopt;
      auto v = const_eval(e->kids[0], env);
      if (!v) return std::nullopt;
      return normalize(*v, e->cast_type);
    }
    case ExprKind::Unary: {
      if (e->op == "+" || e->op == "-" || e->op == "~" || e->op == "!") {
        auto v = const_eval(e->kids[0], env);
        if (!v) return std::nullopt;
        if (e->op == "+") return wrap(*v);
        if (e->op == "!") return wrap(*v == 0);
        if (e->op == "~") return wrap(~*v);
        if (*v == INT64_MIN) return std::nullopt;
        return wrap(-*v);
      }
      return std::nullopt;
    }
    case ExprKind::Binary: {
      auto a = const_eval(e->kids[0], env);
      if (!a) return std::nullopt;
      auto b = const_eval(e->kids[1], env);
      if (!b) return std::nullopt;
      const std::string& op = e->op;
      if (op == "&&") return wrap(*a != 0 && *b != 0);
      if (op == "||") return wrap(*a != 0 || *b != 0);
      if (op == "==") return wrap(*a == *b);
      if (op == "!=") return wrap(*a != *b);
      if (op == "<") return wrap(*a < *b);
      if (op == ">") return wrap(*a > *b);
      if (op == "<=") return wrap(*a <= *b);
      if (op == ">=") return wrap(*a >= *b);
      std::int64_t r;
      if (op == "+") {
        if (__builtin_add_overflow(*a, *b, &r)) return std::nullopt;
        return wrap(r);
      }
      if (op == "-") {
        if (__builtin_sub_overflow(*a, *b, &r)) return std::nullopt;
        return wrap(r);
      }
      if (op == "*") {
        if (__builtin_mul_overflow(*a, *b, &r)) return std::nullopt;
        return wrap(r);
      }
      if (op == "/") {
        if (*b == 0 || (*a == INT64_MIN && *b == -1)) return std::nullopt;
        return wrap(*a / *b);
      }
      if (op == "%") {
        if (*b == 0 || (*a == INT64_MIN && *b == -1)) return std::nullopt;
        return wrap(*a % *b);
      }
      if (op == "<<") {
        if (*b < 0 || *b > 63) return std::nullopt;
        return wrap(static_cast<std::int64_t>(
            static_cast<std::uint64_t>(*a) << *b));
      }
      if (op == ">>") {
        if (*b < 0 || *b > 63) return std::nullopt;
        if (*a < 0) return wrap(*a >> *b);
        return wrap(static_cast<std::int64_t>(
            static_cast<std::uint64_t>(*a) >> *b));
      }
      if (op == "&") return wrap(*a & *b);
      if (op == "|") return wrap(*a | *b);
      if (op == "^") return wrap(*a ^ *b);
      return std::nullopt;
    }
    case ExprKind::Conditional: {
      auto c = const_eval(e->kids[0], env);
      auto a = const_eval(e->kids[1], env);
      auto b = const_eval(e->kids[2], env);
      if (!c || !a || !b) return std::nullopt;
      return wrap(*c != 0 ? *a : *b);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace minicheck::sema
