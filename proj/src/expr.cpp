#include "ifd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ifd {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

} // namespace

SyntaxError::SyntaxError(std::string message, std::size_t offset,
                         std::vector<std::string> expected)
    : ValidationError(message + " at byte " + std::to_string(offset) +
                      (expected.empty() ? "" : " (expected " + join(expected, ", ") + ")")),
      offset_(offset), expected_(std::move(expected)) {}

struct Expr::Node {
  enum class Kind { Number, Variable, Constant, Parameter, Negate, Binary, Call };
  Kind kind;
  double value = 0.0;               // Number
  char symbol = 0;                  // Variable ('x'/'t'), Binary op
  std::string name;                 // Constant, Parameter, Call
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Number;
  n->value = v;
  return n;
}

bool is_unary_fn(const std::string& name) {
  return name == "sin" || name == "cos" || name == "exp" || name == "log" ||
         name == "abs" || name == "tanh";
}

bool is_binary_fn(const std::string& name) { return name == "min" || name == "max"; }

class Parser {
public:
  Parser(std::string_view src, const std::set<std::string>& params)
      : src_(src), params_(params) {}

  NodePtr run() {
    skip_ws();
    if (pos_ >= src_.size())
      throw SyntaxError("empty expression", 0, {"expression"});
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size())
      throw SyntaxError("unexpected trailing input", pos_, {"end of input", "operator"});
    return e;
  }

private:
  std::string_view src_;
  const std::set<std::string>& params_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  void expect(char c, const char* what) {
    if (peek() != c)
      throw SyntaxError(pos_ >= src_.size() ? "unexpected end of input"
                                            : std::string("unexpected character '") + src_[pos_] + "'",
                        pos_, {what});
    ++pos_;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      NodePtr rhs = parse_term();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->symbol = c;
      n->children = {lhs, rhs};
      lhs = n;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      NodePtr rhs = parse_unary();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->symbol = c;
      n->children = {lhs, rhs};
      lhs = n;
    }
  }

  NodePtr parse_unary() {
    if (peek() == '-') {
      ++pos_;
      NodePtr child = parse_unary();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Negate;
      n->children = {child};
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (peek() == '^') {
      ++pos_;
      NodePtr exponent = parse_unary(); // right-associative
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Binary;
      n->symbol = '^';
      n->children = {base, exponent};
      return n;
    }
    return base;
  }

  NodePtr parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')', ")");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw SyntaxError(pos_ >= src_.size() ? "unexpected end of input"
                                          : std::string("unexpected character '") + c + "'",
                      pos_, {"number", "identifier", "("});
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      } else {
        pos_ = mark; // 'e' was not an exponent; leave it for the caller
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    if (text == ".")
      throw SyntaxError("malformed number", start, {"digit"});
    return make_number(std::strtod(text.c_str(), nullptr));
  }

  NodePtr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    std::string name(src_.substr(start, pos_ - start));

    if (peek() == '(') {
      if (!is_unary_fn(name) && !is_binary_fn(name))
        throw SyntaxError("unknown function \"" + name + "\"", start,
                          {"sin", "cos", "exp", "log", "abs", "tanh", "min", "max"});
      ++pos_;
      std::vector<NodePtr> args;
      args.push_back(parse_expr());
      while (peek() == ',') {
        ++pos_;
        args.push_back(parse_expr());
      }
      expect(')', ")");
      std::size_t want = is_binary_fn(name) ? 2 : 1;
      if (args.size() != want)
        throw SyntaxError("function \"" + name + "\" takes " + std::to_string(want) +
                              " argument(s), got " + std::to_string(args.size()),
                          start, {});
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Call;
      n->name = name;
      n->children = std::move(args);
      return n;
    }

    if (name == "x" || name == "t") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Variable;
      n->symbol = name[0];
      return n;
    }
    if (name == "pi" || name == "e") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Constant;
      n->name = name;
      return n;
    }
    if (params_.count(name)) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::Parameter;
      n->name = name;
      return n;
    }
    std::vector<std::string> known = {"x", "t", "pi", "e"};
    for (const auto& p : params_) known.push_back(p);
    throw SyntaxError("unknown identifier \"" + name + "\"; known names: " + join(known, ", "),
                      start, {});
  }
};

int precedence_level(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Binary:
      if (n.symbol == '+' || n.symbol == '-') return 1;
      if (n.symbol == '*' || n.symbol == '/') return 2;
      return 4; // '^'
    case Node::Kind::Negate:
      return 3;
    default:
      return 5;
  }
}

void unparse_node(const Node& n, int min_level, std::string& out) {
  bool parens = precedence_level(n) < min_level;
  if (parens) out += '(';
  switch (n.kind) {
    case Node::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      break;
    }
    case Node::Kind::Variable:
      out += n.symbol;
      break;
    case Node::Kind::Constant:
    case Node::Kind::Parameter:
      out += n.name;
      break;
    case Node::Kind::Negate:
      out += '-';
      unparse_node(*n.children[0], 3, out);
      break;
    case Node::Kind::Binary: {
      int level = precedence_level(n);
      if (n.symbol == '^') {
        unparse_node(*n.children[0], 5, out);
        out += '^';
        unparse_node(*n.children[1], 3, out);
      } else {
        unparse_node(*n.children[0], level, out);
        out += n.symbol;
        unparse_node(*n.children[1], level + 1, out);
      }
      break;
    }
    case Node::Kind::Call: {
      out += n.name;
      out += '(';
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ',';
        unparse_node(*n.children[i], 1, out);
      }
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

std::string unparse_one(const Node& n) {
  std::string out;
  unparse_node(n, 1, out);
  return out;
}

double eval_node(const Node& n, double x, double t,
                 const std::map<std::string, double>& params) {
  double v = 0.0;
  switch (n.kind) {
    case Node::Kind::Number:
      return n.value;
    case Node::Kind::Variable:
      return n.symbol == 'x' ? x : t;
    case Node::Kind::Constant:
      return n.name == "pi" ? M_PI : M_E;
    case Node::Kind::Parameter: {
      auto it = params.find(n.name);
      if (it == params.end())
        throw EvalError("unbound parameter \"" + n.name + "\"", unparse_one(n));
      return it->second;
    }
    case Node::Kind::Negate:
      return -eval_node(*n.children[0], x, t, params);
    case Node::Kind::Binary: {
      double a = eval_node(*n.children[0], x, t, params);
      double b = eval_node(*n.children[1], x, t, params);
      switch (n.symbol) {
        case '+': v = a + b; break;
        case '-': v = a - b; break;
        case '*': v = a * b; break;
        case '/':
          if (b == 0.0) throw EvalError("division by zero", unparse_one(n));
          v = a / b;
          break;
        case '^': v = std::pow(a, b); break;
      }
      break;
    }
    case Node::Kind::Call: {
      double a = eval_node(*n.children[0], x, t, params);
      if (n.name == "sin") v = std::sin(a);
      else if (n.name == "cos") v = std::cos(a);
      else if (n.name == "exp") v = std::exp(a);
      else if (n.name == "tanh") v = std::tanh(a);
      else if (n.name == "abs") v = std::fabs(a);
      else if (n.name == "log") {
        if (a <= 0.0) throw EvalError("log of non-positive value", unparse_one(n));
        v = std::log(a);
      } else {
        double b = eval_node(*n.children[1], x, t, params);
        v = (n.name == "min") ? std::fmin(a, b) : std::fmax(a, b);
      }
      break;
    }
  }
  if (!std::isfinite(v)) throw EvalError("non-finite result", unparse_one(n));
  return v;
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.symbol != b.symbol || a.name != b.name ||
      a.children.size() != b.children.size())
    return false;
  if (a.kind == Node::Kind::Number &&
      !(a.value == b.value || (std::isnan(a.value) && std::isnan(b.value))))
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!nodes_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

void collect_params(const Node& n, std::set<std::string>& out) {
  if (n.kind == Node::Kind::Parameter) out.insert(n.name);
  for (const auto& c : n.children) collect_params(*c, out);
}

bool depends_on(const Node& n, char var) {
  if (n.kind == Node::Kind::Variable && n.symbol == var) return true;
  for (const auto& c : n.children)
    if (depends_on(*c, var)) return true;
  return false;
}

} // namespace

Expr Expr::parse(std::string_view source, const std::set<std::string>& parameters) {
  Parser p(source, parameters);
  return Expr(p.run());
}

double Expr::eval(double x, double t, const std::map<std::string, double>& params) const {
  return eval_node(*root_, x, t, params);
}

std::string Expr::unparse() const { return unparse_one(*root_); }

std::set<std::string> Expr::free_parameters() const {
  std::set<std::string> out;
  collect_params(*root_, out);
  return out;
}

bool Expr::depends_on_x() const { return depends_on(*root_, 'x'); }
bool Expr::depends_on_t() const { return depends_on(*root_, 't'); }

bool operator==(const Expr& a, const Expr& b) { return nodes_equal(*a.root_, *b.root_); }

} // namespace ifd
