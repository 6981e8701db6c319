#pragma once

#include <array>
#include <memory>
#include <string>

#include "core/mesh.hpp"

namespace nscert {

// A scalar space-time field with exact derivatives up to second order.
// Two implementations exist: symbolic expressions (differentiated by AST
// rewriting) and catalog fields (hand-written closed forms). var indices:
// 0=x, 1=y, 2=z, 3=t.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(const Vec3& x, double t) const = 0;
  virtual double d1(int var, const Vec3& x, double t) const = 0;
  virtual double d2(int var_a, int var_b, const Vec3& x, double t) const = 0;
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

class VectorField {
 public:
  VectorField() = default;
  VectorField(ScalarFieldPtr cx, ScalarFieldPtr cy, ScalarFieldPtr cz)
      : comps_{std::move(cx), std::move(cy), std::move(cz)} {}

  const ScalarField& comp(int c) const { return *comps_[c]; }
  ScalarFieldPtr comp_ptr(int c) const { return comps_[c]; }
  bool valid() const { return comps_[0] && comps_[1] && comps_[2]; }

  Vec3 value(const Vec3& x, double t) const {
    return {comps_[0]->value(x, t), comps_[1]->value(x, t),
            comps_[2]->value(x, t)};
  }
  double divergence(const Vec3& x, double t) const {
    return comps_[0]->d1(0, x, t) + comps_[1]->d1(1, x, t) +
           comps_[2]->d1(2, x, t);
  }

 private:
  std::array<ScalarFieldPtr, 3> comps_;
};

// ---------------------------------------------------------------------------
// Symbolic expressions.
//
// Grammar (the config-file contract for u0 and forcing fields):
//   expression := ('+'|'-')? term (('+'|'-') term)*
//   term       := factor (('*'|'/') factor)*
//   factor     := base ('^' integer)?
//   base       := number | 'pi' | variable | function '(' expression ')'
//               | '(' expression ')'
//   vector     := '(' expression ',' expression ',' expression ')'
// with variables x, y, z, t and functions sin, cos, exp. Exponents are
// integer literals, so differentiation stays closed-form.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    Number,
    Pi,
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Exp,
  };

  Kind kind;
  double number = 0.0;  // Number
  int var = 0;          // Var
  int exponent = 0;     // Pow
  ExprPtr a, b;
};

ExprPtr parse_scalar(const std::string& text);
std::array<ExprPtr, 3> parse_vector(const std::string& text);

double eval(const Expr& e, const Vec3& x, double t);
ExprPtr differentiate(const ExprPtr& e, int var);
std::string to_string(const Expr& e);

// Wraps an AST as a ScalarField; derivative ASTs are built once up front.
ScalarFieldPtr make_symbolic_field(ExprPtr expr);
ScalarFieldPtr make_symbolic_field(const std::string& text);
VectorField make_symbolic_vector_field(const std::string& text);

// f = dt(w) + (w . grad) w - mu * lap(w) + grad(q), so that (w, q) solves the
// forced momentum equation exactly. The result is evaluation-only: it reads
// derivatives of w and q, and does not itself support differentiation.
VectorField manufactured_forcing(const VectorField& w, ScalarFieldPtr q,
                                 double mu);

}  // namespace nscert
