#pragma once

// Closed-form scalar expressions in the surface variables u, v and named
// parameters. Grammar (whitespace insignificant):
//
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := "-" factor | power ;
//   power  := atom ("^" factor)? ;
//   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" ;
//
// Functions: sin cos tan exp log sqrt sinh cosh.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace ntsurf::expr {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

std::string_view func_name(Func f);
char op_symbol(BinaryOp op);

struct Node;

/// Immutable expression tree. Copies share structure.
class Expression {
 public:
  Expression() = default;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const Node& node() const { return *node_; }
  bool empty() const { return node_ == nullptr; }

 private:
  std::shared_ptr<const Node> node_;
};

struct Number {
  double value;
};
/// One of the surface variables, "u" or "v".
struct Variable {
  std::string name;
};
struct Parameter {
  std::string name;
};
struct Negate {
  Expression operand;
};
struct Binary {
  BinaryOp op;
  Expression lhs;
  Expression rhs;
};
struct Call {
  Func fn;
  Expression arg;
};

struct Node {
  std::variant<Number, Variable, Parameter, Negate, Binary, Call> data;
};

using ParamSet = std::set<std::string, std::less<>>;
using Bindings = std::map<std::string, double, std::less<>>;

// Node constructors. They fold additive/multiplicative zeros and
// multiplicative ones so derivative trees stay small; nothing else is
// simplified.
Expression number(double value);
Expression variable(std::string name);
Expression parameter(std::string name);
Expression negate(Expression a);
Expression binary(BinaryOp op, Expression lhs, Expression rhs);
Expression call(Func fn, Expression arg);

/// Parses `text` against the grammar above. Identifiers other than u, v and
/// the members of `params` are rejected, as are unknown function names.
/// Throws ParseError carrying the byte offset of the problem.
Expression parse_expression(std::string_view text, const ParamSet& params = {});

/// Exact symbolic partial derivative with respect to `var` ("u" or "v").
/// Parameters are constants.
Expression differentiate(const Expression& e, std::string_view var);

/// Evaluates in IEEE double precision. Every identifier must be bound.
/// Throws DomainError naming the offending subexpression for log of a
/// non-positive value, sqrt of a negative, division by zero, a negative base
/// raised to a non-integer power, or a non-finite intermediate.
double evaluate(const Expression& e, const Bindings& bindings);

/// Fully parenthesised text that parses back to an equivalent tree.
std::string to_string(const Expression& e);

/// True when the tree references the identifier (variable or parameter).
bool depends_on(const Expression& e, std::string_view name);

/// Identifiers referenced by the tree.
ParamSet identifiers(const Expression& e);

}  // namespace ntsurf::expr
