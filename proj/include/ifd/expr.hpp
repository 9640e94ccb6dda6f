#ifndef IFD_EXPR_HPP
#define IFD_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ifd/error.hpp"

namespace ifd {

// Analytic expressions of (x, t) used to describe environments and
// strategies in configuration files.
//
// Grammar (EBNF):
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = atom [ "^" unary ] ;            (* right-associative *)
//   atom    = number | ident | ident "(" expr { "," expr } ")"
//           | "(" expr ")" ;
//   number  = decimal literal with optional fraction and exponent ;
//
// Function application binds tighter than any operator. Known functions:
// sin, cos, exp, log, abs, tanh (one argument), min, max (two arguments).
// Known constants: pi, e. Variables: x, t. Any other identifier must be
// declared as a parameter name at parse time and bound at evaluation.

class SyntaxError : public ValidationError {
public:
  SyntaxError(std::string message, std::size_t offset, std::vector<std::string> expected);
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvalError : public NumericalError {
public:
  EvalError(std::string message, std::string subexpression)
      : NumericalError(message + " in subexpression \"" + subexpression + "\""),
        subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const noexcept { return subexpression_; }

private:
  std::string subexpression_;
};

class Expr {
public:
  // Parses `source`; identifiers outside {x, t, pi, e} and the function
  // names must appear in `parameters`, otherwise an unknown-identifier
  // SyntaxError listing the known names is raised.
  static Expr parse(std::string_view source,
                    const std::set<std::string>& parameters = {});

  double eval(double x, double t,
              const std::map<std::string, double>& params = {}) const;

  std::string unparse() const;

  // Free parameter names referenced anywhere in the tree.
  std::set<std::string> free_parameters() const;

  bool depends_on_x() const;
  bool depends_on_t() const;

  // Structural equality of the syntax trees.
  friend bool operator==(const Expr& a, const Expr& b);

  struct Node;

private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

} // namespace ifd

#endif
