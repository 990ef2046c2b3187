#include "ntsurf/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

#include <fmt/format.h>

#include "ntsurf/errors.hpp"

namespace ntsurf::expr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Expression make(Node node) { return Expression(std::make_shared<const Node>(std::move(node))); }

std::optional<double> constant_value(const Expression& e) {
  if (const auto* n = std::get_if<Number>(&e.node().data)) return n->value;
  return std::nullopt;
}

bool is_value(const Expression& e, double v) {
  auto c = constant_value(e);
  return c && *c == v;
}

constexpr std::pair<std::string_view, Func> kFunctions[] = {
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"exp", Func::Exp},
    {"log", Func::Log},   {"sqrt", Func::Sqrt}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions)
    if (n == name) return f;
  return std::nullopt;
}

// Recursive-descent parser over the grammar in expr.hpp.
class Parser {
 public:
  Parser(std::string_view text, const ParamSet& params) : text_(text), params_(params) {}

  Expression parse() {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
    Expression e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(fmt::format("unexpected '{}'", text_[pos_]), pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size())
        throw ParseError(fmt::format("expected '{}' but reached end of input", c), pos_);
      throw ParseError(fmt::format("expected '{}'", c), pos_);
    }
  }

  Expression parse_expr() {
    Expression lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(Node{Binary{BinaryOp::Add, lhs, parse_term()}});
      else if (accept('-'))
        lhs = make(Node{Binary{BinaryOp::Sub, lhs, parse_term()}});
      else
        return lhs;
    }
  }

  Expression parse_term() {
    Expression lhs = parse_factor();
    for (;;) {
      if (accept('*'))
        lhs = make(Node{Binary{BinaryOp::Mul, lhs, parse_factor()}});
      else if (accept('/'))
        lhs = make(Node{Binary{BinaryOp::Div, lhs, parse_factor()}});
      else
        return lhs;
    }
  }

  Expression parse_factor() {
    if (accept('-')) return make(Node{Negate{parse_factor()}});
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_atom();
    if (accept('^')) return make(Node{Binary{BinaryOp::Pow, base, parse_factor()}});
    return base;
  }

  Expression parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(fmt::format("unexpected '{}'", c), pos_);
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw ParseError("malformed exponent", start);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_)
      throw ParseError("number out of range", start);
    return number(value);
  }

  Expression parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      auto fn = lookup_function(name);
      if (!fn) throw ParseError(fmt::format("unknown function '{}'", name), start);
      ++pos_;
      Expression arg = parse_expr();
      expect(')');
      return make(Node{Call{*fn, arg}});
    }
    if (name == "u" || name == "v") return variable(std::string(name));
    if (params_.contains(name)) return parameter(std::string(name));
    throw ParseError(fmt::format("unknown identifier '{}'", name), start);
  }

  std::string_view text_;
  const ParamSet& params_;
  std::size_t pos_ = 0;
};

double apply(Func fn, double x) {
  switch (fn) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan: return std::tan(x);
    case Func::Exp: return std::exp(x);
    case Func::Log: return std::log(x);
    case Func::Sqrt: return std::sqrt(x);
    case Func::Sinh: return std::sinh(x);
    case Func::Cosh: return std::cosh(x);
  }
  return x;
}

[[noreturn]] void domain_error(std::string_view what, const Expression& at) {
  throw DomainError(fmt::format("{} in {}", what, to_string(at)));
}

double eval(const Expression& e, const Bindings& b) {
  const double result = std::visit(
      overloaded{
          [](const Number& n) { return n.value; },
          [&](const Variable& v) {
            auto it = b.find(v.name);
            if (it == b.end()) throw ConfigError(fmt::format("unbound variable '{}'", v.name));
            return it->second;
          },
          [&](const Parameter& p) {
            auto it = b.find(p.name);
            if (it == b.end()) throw ConfigError(fmt::format("unbound parameter '{}'", p.name));
            return it->second;
          },
          [&](const Negate& n) { return -eval(n.operand, b); },
          [&](const Binary& bin) {
            const double l = eval(bin.lhs, b);
            const double r = eval(bin.rhs, b);
            switch (bin.op) {
              case BinaryOp::Add: return l + r;
              case BinaryOp::Sub: return l - r;
              case BinaryOp::Mul: return l * r;
              case BinaryOp::Div:
                if (r == 0.0) domain_error("division by zero", e);
                return l / r;
              case BinaryOp::Pow:
                if (l < 0.0 && r != std::trunc(r))
                  domain_error("negative base with non-integer exponent", e);
                if (l == 0.0 && r < 0.0) domain_error("division by zero", e);
                return std::pow(l, r);
            }
            return 0.0;
          },
          [&](const Call& c) {
            const double x = eval(c.arg, b);
            if (c.fn == Func::Log && x <= 0.0) domain_error("log of non-positive value", e);
            if (c.fn == Func::Sqrt && x < 0.0) domain_error("sqrt of negative value", e);
            return apply(c.fn, x);
          },
      },
      e.node().data);
  if (!std::isfinite(result)) domain_error("non-finite value", e);
  return result;
}

void print(const Expression& e, std::string& out) {
  std::visit(overloaded{
                 [&](const Number& n) {
                   if (n.value < 0.0 || std::signbit(n.value))
                     out += fmt::format("(-{:.17g})", -n.value);
                   else
                     out += fmt::format("{:.17g}", n.value);
                 },
                 [&](const Variable& v) { out += v.name; },
                 [&](const Parameter& p) { out += p.name; },
                 [&](const Negate& n) {
                   out += "(-";
                   print(n.operand, out);
                   out += ')';
                 },
                 [&](const Binary& bin) {
                   out += '(';
                   print(bin.lhs, out);
                   out += ' ';
                   out += op_symbol(bin.op);
                   out += ' ';
                   print(bin.rhs, out);
                   out += ')';
                 },
                 [&](const Call& c) {
                   out += func_name(c.fn);
                   out += '(';
                   print(c.arg, out);
                   out += ')';
                 },
             },
             e.node().data);
}

void collect(const Expression& e, ParamSet& out) {
  std::visit(overloaded{
                 [](const Number&) {},
                 [&](const Variable& v) { out.insert(v.name); },
                 [&](const Parameter& p) { out.insert(p.name); },
                 [&](const Negate& n) { collect(n.operand, out); },
                 [&](const Binary& b) {
                   collect(b.lhs, out);
                   collect(b.rhs, out);
                 },
                 [&](const Call& c) { collect(c.arg, out); },
             },
             e.node().data);
}

Expression add(Expression a, Expression b) { return binary(BinaryOp::Add, std::move(a), std::move(b)); }
Expression sub(Expression a, Expression b) { return binary(BinaryOp::Sub, std::move(a), std::move(b)); }
Expression mul(Expression a, Expression b) { return binary(BinaryOp::Mul, std::move(a), std::move(b)); }
Expression div(Expression a, Expression b) { return binary(BinaryOp::Div, std::move(a), std::move(b)); }
Expression pow(Expression a, Expression b) { return binary(BinaryOp::Pow, std::move(a), std::move(b)); }

Expression derive(const Expression& e, std::string_view var) {
  return std::visit(
      overloaded{
          [](const Number&) { return number(0.0); },
          [&](const Variable& v) { return number(v.name == var ? 1.0 : 0.0); },
          [](const Parameter&) { return number(0.0); },
          [&](const Negate& n) { return negate(derive(n.operand, var)); },
          [&](const Binary& b) -> Expression {
            const Expression& f = b.lhs;
            const Expression& g = b.rhs;
            switch (b.op) {
              case BinaryOp::Add: return add(derive(f, var), derive(g, var));
              case BinaryOp::Sub: return sub(derive(f, var), derive(g, var));
              case BinaryOp::Mul:
                return add(mul(derive(f, var), g), mul(f, derive(g, var)));
              case BinaryOp::Div:
                return div(sub(mul(derive(f, var), g), mul(f, derive(g, var))),
                           pow(g, number(2.0)));
              case BinaryOp::Pow: {
                if (!depends_on(g, var)) {
                  // g * f^(g-1) * f'
                  Expression g_minus_one =
                      constant_value(g) ? number(*constant_value(g) - 1.0) : sub(g, number(1.0));
                  return mul(mul(g, pow(f, g_minus_one)), derive(f, var));
                }
                if (!depends_on(f, var)) {
                  // f^g * log(f) * g'
                  return mul(mul(e, call(Func::Log, f)), derive(g, var));
                }
                // f^g * (g' log f + g f'/f)
                return mul(e, add(mul(derive(g, var), call(Func::Log, f)),
                                  div(mul(g, derive(f, var)), f)));
              }
            }
            return number(0.0);
          },
          [&](const Call& c) -> Expression {
            const Expression& a = c.arg;
            Expression da = derive(a, var);
            switch (c.fn) {
              case Func::Sin: return mul(call(Func::Cos, a), da);
              case Func::Cos: return negate(mul(call(Func::Sin, a), da));
              case Func::Tan: return div(da, pow(call(Func::Cos, a), number(2.0)));
              case Func::Exp: return mul(e, da);
              case Func::Log: return div(da, a);
              case Func::Sqrt: return div(da, mul(number(2.0), e));
              case Func::Sinh: return mul(call(Func::Cosh, a), da);
              case Func::Cosh: return mul(call(Func::Sinh, a), da);
            }
            return number(0.0);
          },
      },
      e.node().data);
}

}  // namespace

std::string_view func_name(Func f) {
  for (const auto& [n, fn] : kFunctions)
    if (fn == f) return n;
  return "?";
}

char op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
  }
  return '?';
}

Expression number(double value) { return make(Node{Number{value}}); }
Expression variable(std::string name) { return make(Node{Variable{std::move(name)}}); }
Expression parameter(std::string name) { return make(Node{Parameter{std::move(name)}}); }

Expression negate(Expression a) {
  if (is_value(a, 0.0)) return a;
  return make(Node{Negate{std::move(a)}});
}

Expression binary(BinaryOp op, Expression lhs, Expression rhs) {
  switch (op) {
    case BinaryOp::Add:
      if (is_value(lhs, 0.0)) return rhs;
      if (is_value(rhs, 0.0)) return lhs;
      break;
    case BinaryOp::Sub:
      if (is_value(rhs, 0.0)) return lhs;
      if (is_value(lhs, 0.0)) return negate(std::move(rhs));
      break;
    case BinaryOp::Mul:
      if (is_value(lhs, 0.0) || is_value(rhs, 0.0)) return number(0.0);
      if (is_value(lhs, 1.0)) return rhs;
      if (is_value(rhs, 1.0)) return lhs;
      break;
    case BinaryOp::Div:
      if (is_value(lhs, 0.0)) return number(0.0);
      if (is_value(rhs, 1.0)) return lhs;
      break;
    case BinaryOp::Pow:
      if (is_value(rhs, 1.0)) return lhs;
      if (is_value(rhs, 0.0)) return number(1.0);
      break;
  }
  return make(Node{Binary{op, std::move(lhs), std::move(rhs)}});
}

Expression call(Func fn, Expression arg) { return make(Node{Call{fn, std::move(arg)}}); }

Expression parse_expression(std::string_view text, const ParamSet& params) {
  for (const auto& p : params) {
    if (p == "u" || p == "v")
      throw ConfigError(fmt::format("parameter name '{}' collides with a surface variable", p));
  }
  return Parser(text, params).parse();
}

Expression differentiate(const Expression& e, std::string_view var) {
  if (var != "u" && var != "v")
    throw ConfigError(fmt::format("can only differentiate in u or v, not '{}'", var));
  return derive(e, var);
}

double evaluate(const Expression& e, const Bindings& bindings) { return eval(e, bindings); }

std::string to_string(const Expression& e) {
  std::string out;
  print(e, out);
  return out;
}

bool depends_on(const Expression& e, std::string_view name) {
  return std::visit(overloaded{
                        [](const Number&) { return false; },
                        [&](const Variable& v) { return v.name == name; },
                        [&](const Parameter& p) { return p.name == name; },
                        [&](const Negate& n) { return depends_on(n.operand, name); },
                        [&](const Binary& b) {
                          return depends_on(b.lhs, name) || depends_on(b.rhs, name);
                        },
                        [&](const Call& c) { return depends_on(c.arg, name); },
                    },
                    e.node().data);
}

ParamSet identifiers(const Expression& e) {
  ParamSet out;
  collect(e, out);
  return out;
}

}  // namespace ntsurf::expr
