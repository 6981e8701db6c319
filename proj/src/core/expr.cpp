#include "core/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>

#include "core/errors.hpp"

namespace nscert {

namespace {

ExprPtr number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Number;
  e->number = v;
  return e;
}

bool is_number(const ExprPtr& e, double v) {
  return e->kind == Expr::Kind::Number && e->number == v;
}

ExprPtr node(Expr::Kind kind, ExprPtr a, ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

// Smart constructors with constant folding and unit/zero identities; they
// keep derivative trees small without doing general CAS simplification.
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr divide(ExprPtr a, ExprPtr b);
ExprPtr neg(ExprPtr a);
ExprPtr power(ExprPtr a, int n);

bool both_numbers(const ExprPtr& a, const ExprPtr& b) {
  return a->kind == Expr::Kind::Number && b->kind == Expr::Kind::Number;
}

ExprPtr add(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0)) return b;
  if (is_number(b, 0)) return a;
  if (both_numbers(a, b)) return number(a->number + b->number);
  return node(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  if (is_number(b, 0)) return a;
  if (is_number(a, 0)) return neg(std::move(b));
  if (both_numbers(a, b)) return number(a->number - b->number);
  return node(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0) || is_number(b, 0)) return number(0);
  if (is_number(a, 1)) return b;
  if (is_number(b, 1)) return a;
  if (both_numbers(a, b)) return number(a->number * b->number);
  return node(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr divide(ExprPtr a, ExprPtr b) {
  if (is_number(a, 0)) return number(0);
  if (is_number(b, 1)) return a;
  if (both_numbers(a, b)) return number(a->number / b->number);
  return node(Expr::Kind::Div, std::move(a), std::move(b));
}

ExprPtr neg(ExprPtr a) {
  if (a->kind == Expr::Kind::Number) return number(-a->number);
  if (a->kind == Expr::Kind::Neg) return a->a;
  return node(Expr::Kind::Neg, std::move(a));
}

ExprPtr power(ExprPtr a, int n) {
  if (n == 0) return number(1);
  if (n == 1) return a;
  if (a->kind == Expr::Kind::Number) return number(std::pow(a->number, n));
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->a = std::move(a);
  e->exponent = n;
  return e;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ExprPtr parse_expression_all() {
    ExprPtr e = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

  std::array<ExprPtr, 3> parse_vector_all() {
    skip_ws();
    expect('(');
    std::array<ExprPtr, 3> comps;
    comps[0] = expression();
    expect(',');
    comps[1] = expression();
    expect(',');
    comps[2] = expression();
    expect(')');
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return comps;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ExprParseError(msg, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expression() {
    ExprPtr e;
    if (accept('-'))
      e = neg(term());
    else if (accept('+'))
      e = term();
    else
      e = term();
    for (;;) {
      if (accept('+'))
        e = add(e, term());
      else if (accept('-'))
        e = sub(e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (accept('*'))
        e = mul(e, factor());
      else if (accept('/')) {
        ExprPtr d = factor();
        if (is_number(d, 0)) fail("division by constant zero");
        e = divide(e, d);
      } else
        return e;
    }
  }

  ExprPtr factor() {
    ExprPtr e = base();
    if (accept('^')) return power(e, integer());
    return e;
  }

  int integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+'))
      ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer exponent");
    }
    return std::stoi(text_.substr(start, pos_ - start));
  }

  ExprPtr base() {
    const char c = peek();
    if (c == '\0') fail("expected expression");
    if (c == '(') {
      ++pos_;
      ExprPtr e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return numeric_literal();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("expected expression");
  }

  ExprPtr numeric_literal() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' was not an exponent
      }
    }
    try {
      return number(std::stod(text_.substr(start, pos_ - start)));
    } catch (const std::exception&) {
      pos_ = start;
      fail("malformed number");
    }
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalnum(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "pi") {
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Pi;
      return e;
    }
    if (name == "x" || name == "y" || name == "z" || name == "t") {
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Var;
      e->var = name == "x" ? 0 : name == "y" ? 1 : name == "z" ? 2 : 3;
      return e;
    }
    if (name == "sin" || name == "cos" || name == "exp") {
      expect('(');
      ExprPtr arg = expression();
      expect(')');
      const Expr::Kind k = name == "sin"   ? Expr::Kind::Sin
                           : name == "cos" ? Expr::Kind::Cos
                                           : Expr::Kind::Exp;
      return node(k, std::move(arg));
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_scalar(const std::string& text) {
  return Parser(text).parse_expression_all();
}

std::array<ExprPtr, 3> parse_vector(const std::string& text) {
  return Parser(text).parse_vector_all();
}

double eval(const Expr& e, const Vec3& x, double t) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return e.number;
    case Expr::Kind::Pi:
      return std::numbers::pi;
    case Expr::Kind::Var:
      return e.var < 3 ? x[e.var] : t;
    case Expr::Kind::Add:
      return eval(*e.a, x, t) + eval(*e.b, x, t);
    case Expr::Kind::Sub:
      return eval(*e.a, x, t) - eval(*e.b, x, t);
    case Expr::Kind::Mul:
      return eval(*e.a, x, t) * eval(*e.b, x, t);
    case Expr::Kind::Div: {
      const double d = eval(*e.b, x, t);
      if (d == 0.0) throw EvalError("division by zero");
      return eval(*e.a, x, t) / d;
    }
    case Expr::Kind::Pow: {
      const double base = eval(*e.a, x, t);
      if (e.exponent < 0 && base == 0.0)
        throw EvalError("zero raised to a negative power");
      return std::pow(base, e.exponent);
    }
    case Expr::Kind::Neg:
      return -eval(*e.a, x, t);
    case Expr::Kind::Sin:
      return std::sin(eval(*e.a, x, t));
    case Expr::Kind::Cos:
      return std::cos(eval(*e.a, x, t));
    case Expr::Kind::Exp:
      return std::exp(eval(*e.a, x, t));
  }
  throw EvalError("corrupt expression node");
}

ExprPtr differentiate(const ExprPtr& e, int var) {
  switch (e->kind) {
    case Expr::Kind::Number:
    case Expr::Kind::Pi:
      return number(0);
    case Expr::Kind::Var:
      return number(e->var == var ? 1 : 0);
    case Expr::Kind::Add:
      return add(differentiate(e->a, var), differentiate(e->b, var));
    case Expr::Kind::Sub:
      return sub(differentiate(e->a, var), differentiate(e->b, var));
    case Expr::Kind::Mul:
      return add(mul(differentiate(e->a, var), e->b),
                 mul(e->a, differentiate(e->b, var)));
    case Expr::Kind::Div:
      return divide(sub(mul(differentiate(e->a, var), e->b),
                        mul(e->a, differentiate(e->b, var))),
                    power(e->b, 2));
    case Expr::Kind::Pow:
      return mul(mul(number(e->exponent), power(e->a, e->exponent - 1)),
                 differentiate(e->a, var));
    case Expr::Kind::Neg:
      return neg(differentiate(e->a, var));
    case Expr::Kind::Sin:
      return mul(node(Expr::Kind::Cos, e->a), differentiate(e->a, var));
    case Expr::Kind::Cos:
      return neg(mul(node(Expr::Kind::Sin, e->a), differentiate(e->a, var)));
    case Expr::Kind::Exp:
      return mul(node(Expr::Kind::Exp, e->a), differentiate(e->a, var));
  }
  throw EvalError("corrupt expression node");
}

namespace {

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 2;
    case Expr::Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

void print(const Expr& e, std::string& out, int parent_prec) {
  const int prec = precedence(e.kind);
  const bool parens = prec < parent_prec || e.kind == Expr::Kind::Neg;
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", e.number);
      if (e.number < 0) {
        out += '(';
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      break;
    }
    case Expr::Kind::Pi:
      out += "pi";
      break;
    case Expr::Kind::Var:
      out += "xyzt"[e.var];
      break;
    case Expr::Kind::Add:
      print(*e.a, out, prec);
      out += " + ";
      print(*e.b, out, prec);
      break;
    case Expr::Kind::Sub:
      print(*e.a, out, prec);
      out += " - ";
      print(*e.b, out, prec + 1);
      break;
    case Expr::Kind::Mul:
      print(*e.a, out, prec);
      out += "*";
      print(*e.b, out, prec);
      break;
    case Expr::Kind::Div:
      print(*e.a, out, prec);
      out += "/";
      print(*e.b, out, prec + 1);
      break;
    case Expr::Kind::Pow:
      print(*e.a, out, prec + 1);
      out += "^" + std::to_string(e.exponent);
      break;
    case Expr::Kind::Neg:
      out += "-";
      print(*e.a, out, prec + 1);
      break;
    case Expr::Kind::Sin:
      out += "sin(";
      print(*e.a, out, 0);
      out += ")";
      break;
    case Expr::Kind::Cos:
      out += "cos(";
      print(*e.a, out, 0);
      out += ")";
      break;
    case Expr::Kind::Exp:
      out += "exp(";
      print(*e.a, out, 0);
      out += ")";
      break;
  }
  if (parens) out += ')';
}

class SymbolicField final : public ScalarField {
 public:
  explicit SymbolicField(ExprPtr expr) : expr_(std::move(expr)) {
    for (int v = 0; v < 4; ++v) d1_[v] = differentiate(expr_, v);
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) d2_[a][b] = differentiate(d1_[a], b);
  }

  double value(const Vec3& x, double t) const override {
    return eval(*expr_, x, t);
  }
  double d1(int var, const Vec3& x, double t) const override {
    return eval(*d1_[var], x, t);
  }
  double d2(int a, int b, const Vec3& x, double t) const override {
    if (a > b) std::swap(a, b);
    return eval(*d2_[a][b], x, t);
  }

 private:
  ExprPtr expr_;
  ExprPtr d1_[4];
  ExprPtr d2_[4][4];
};

class ForcingComponent final : public ScalarField {
 public:
  ForcingComponent(VectorField w, ScalarFieldPtr q, double mu, int comp)
      : w_(std::move(w)), q_(std::move(q)), mu_(mu), comp_(comp) {}

  double value(const Vec3& x, double t) const override {
    const ScalarField& wi = w_.comp(comp_);
    double v = wi.d1(3, x, t);  // dt
    for (int j = 0; j < 3; ++j) v += w_.comp(j).value(x, t) * wi.d1(j, x, t);
    for (int j = 0; j < 3; ++j) v -= mu_ * wi.d2(j, j, x, t);
    v += q_->d1(comp_, x, t);
    return v;
  }
  double d1(int, const Vec3&, double) const override {
    throw UnsupportedExpressionError(
        "manufactured forcing supports evaluation only");
  }
  double d2(int, int, const Vec3&, double) const override {
    throw UnsupportedExpressionError(
        "manufactured forcing supports evaluation only");
  }

 private:
  VectorField w_;
  ScalarFieldPtr q_;
  double mu_;
  int comp_;
};

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out, 0);
  return out;
}

ScalarFieldPtr make_symbolic_field(ExprPtr expr) {
  return std::make_shared<SymbolicField>(std::move(expr));
}

ScalarFieldPtr make_symbolic_field(const std::string& text) {
  return make_symbolic_field(parse_scalar(text));
}

VectorField make_symbolic_vector_field(const std::string& text) {
  auto comps = parse_vector(text);
  return VectorField(make_symbolic_field(comps[0]),
                     make_symbolic_field(comps[1]),
                     make_symbolic_field(comps[2]));
}

VectorField manufactured_forcing(const VectorField& w, ScalarFieldPtr q,
                                 double mu) {
  return VectorField(std::make_shared<ForcingComponent>(w, q, mu, 0),
                     std::make_shared<ForcingComponent>(w, q, mu, 1),
                     std::make_shared<ForcingComponent>(w, q, mu, 2));
}

}  // namespace nscert
