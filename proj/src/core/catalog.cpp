#include "core/catalog.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace nscert {

namespace {

constexpr double kPi = std::numbers::pi;

// One smooth factor of a separable field: value, first and second derivative.
struct Factor {
  double (*f)(double, double);
  double (*df)(double, double);
  double (*ddf)(double, double);
  double k = 0.0;

  double value(double s) const { return f(s, k); }
  double d(double s) const { return df(s, k); }
  double dd(double s) const { return ddf(s, k); }
};

Factor one() {
  return {[](double, double) { return 1.0; },
          [](double, double) { return 0.0; },
          [](double, double) { return 0.0; }};
}
Factor identity() {
  return {[](double s, double) { return s; },
          [](double, double) { return 1.0; },
          [](double, double) { return 0.0; }};
}
Factor sin_k(double k) {
  return {[](double s, double k) { return std::sin(k * s); },
          [](double s, double k) { return k * std::cos(k * s); },
          [](double s, double k) { return -k * k * std::sin(k * s); }, k};
}
Factor cos_k(double k) {
  return {[](double s, double k) { return std::cos(k * s); },
          [](double s, double k) { return -k * std::sin(k * s); },
          [](double s, double k) { return -k * k * std::cos(k * s); }, k};
}
Factor sin2_k(double k) {
  return {[](double s, double k) { double v = std::sin(k * s); return v * v; },
          [](double s, double k) { return k * std::sin(2 * k * s); },
          [](double s, double k) { return 2 * k * k * std::cos(2 * k * s); },
          k};
}

// c * fx(x) * fy(y) * fz(z) * ft(t) with all derivatives by the product rule.
class SeparableField final : public ScalarField {
 public:
  SeparableField(double c, Factor fx, Factor fy, Factor fz, Factor ft = one())
      : c_(c), f_{fx, fy, fz, ft} {}

  double value(const Vec3& x, double t) const override {
    return c_ * f_[0].value(x[0]) * f_[1].value(x[1]) * f_[2].value(x[2]) *
           f_[3].value(t);
  }
  double d1(int var, const Vec3& x, double t) const override {
    double v = c_;
    const double s[4] = {x[0], x[1], x[2], t};
    for (int i = 0; i < 4; ++i)
      v *= (i == var) ? f_[i].d(s[i]) : f_[i].value(s[i]);
    return v;
  }
  double d2(int a, int b, const Vec3& x, double t) const override {
    double v = c_;
    const double s[4] = {x[0], x[1], x[2], t};
    for (int i = 0; i < 4; ++i) {
      if (i == a && i == b)
        v *= f_[i].dd(s[i]);
      else if (i == a || i == b)
        v *= f_[i].d(s[i]);
      else
        v *= f_[i].value(s[i]);
    }
    return v;
  }

 private:
  double c_;
  Factor f_[4];
};

ScalarFieldPtr sep(double c, Factor fx, Factor fy, Factor fz,
                   Factor ft = one()) {
  return std::make_shared<SeparableField>(c, fx, fy, fz, ft);
}

ScalarFieldPtr zero_scalar() { return sep(0.0, one(), one(), one()); }
ScalarFieldPtr const_scalar(double c) { return sep(c, one(), one(), one()); }

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> entries;

  entries.push_back({"zero",
                     VectorField(zero_scalar(), zero_scalar(), zero_scalar()),
                     nullptr,
                     "(0, 0, 0)",
                     "",
                     true,
                     true});

  entries.push_back({"constant",
                     VectorField(const_scalar(1), const_scalar(2),
                                 const_scalar(2)),
                     nullptr,
                     "(1, 2, 2)",
                     "",
                     true,
                     false});

  entries.push_back({"linear",
                     VectorField(sep(1, identity(), one(), one()),
                                 zero_scalar(), zero_scalar()),
                     nullptr,
                     "(x, 0, 0)",
                     "",
                     false,
                     false});

  entries.push_back({"rotation",
                     VectorField(sep(-1, one(), identity(), one()),
                                 sep(1, identity(), one(), one()),
                                 zero_scalar()),
                     nullptr,
                     "(-y, x, 0)",
                     "",
                     true,
                     false});

  entries.push_back(
      {"sine",
       VectorField(sep(1, sin_k(kPi), sin_k(kPi), sin_k(kPi)), zero_scalar(),
                   zero_scalar()),
       nullptr,
       "(sin(pi*x)*sin(pi*y)*sin(pi*z), 0, 0)",
       "",
       false,
       true});

  // Divergence-free zero-trace pair with a time factor, for manufactured
  // runs and the Stokes projection study:
  //   w1 =  pi sin^2(pi x) sin(2 pi y) sin(pi z) cos(2 pi t)
  //   w2 = -pi sin(2 pi x) sin^2(pi y) sin(pi z) cos(2 pi t)
  //   w3 =  0
  //   q  =  cos(pi x) cos(pi y) cos(pi z) cos(2 pi t)   (zero mean)
  entries.push_back(
      {"mms",
       VectorField(
           sep(kPi, sin2_k(kPi), sin_k(2 * kPi), sin_k(kPi), cos_k(2 * kPi)),
           sep(-kPi, sin_k(2 * kPi), sin2_k(kPi), sin_k(kPi), cos_k(2 * kPi)),
           zero_scalar()),
       sep(1, cos_k(kPi), cos_k(kPi), cos_k(kPi), cos_k(2 * kPi)),
       "(pi*sin(pi*x)^2*sin(2*pi*y)*sin(pi*z)*cos(2*pi*t), "
       "-pi*sin(2*pi*x)*sin(pi*y)^2*sin(pi*z)*cos(2*pi*t), 0)",
       "cos(pi*x)*cos(pi*y)*cos(pi*z)*cos(2*pi*t)",
       true,
       true});

  return entries;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

}  // namespace

const CatalogEntry* find_catalog(const std::string& name) {
  std::string key = name;
  const std::string suffix = "_catalog";
  if (key.size() > suffix.size() &&
      key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
    key.resize(key.size() - suffix.size());
  for (const auto& e : catalog())
    if (e.name == key) return &e;
  return nullptr;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name);
  return names;
}

}  // namespace nscert
