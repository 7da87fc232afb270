#include "heis/polynomial.hpp"

#include <stdexcept>

namespace heis {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
  if (nvars < 1 || nvars > 2 * kMaxN + 1) throw DimensionMismatch("polynomial: too many variables");
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Exps{}, c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Polynomial p(nvars);
  Exps e{};
  e[i] = 1;
  p.add_term(e, 1.0);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int v = 0; v < nvars_; ++v) s += t.e[v];
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const std::vector<int>& exps, double coef) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw DimensionMismatch("monomial exponent tuple has the wrong length");
  Exps e{};
  for (int i = 0; i < nvars_; ++i) {
    if (exps[i] < 0) throw std::invalid_argument("negative exponent");
    e[i] = exps[i];
  }
  add_term(e, coef);
}

void Polynomial::add_term(const Exps& exps, double coef) {
  if (coef == 0.0) return;
  double& c = coef_[exps];
  c += coef;
  if (c == 0.0) coef_.erase(exps);
  rebuild();
}

void Polynomial::rebuild() {
  terms_.clear();
  terms_.reserve(coef_.size());
  for (const auto& [e, c] : coef_) terms_.push_back(Term{e, c});
}

double Polynomial::eval(const CVec& x) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    double m = t.c;
    for (int i = 0; i < nvars_; ++i)
      if (t.e[i]) m *= ipow(x(i), t.e[i]);
    v += m;
  }
  return v;
}

void Polynomial::eval_grad(const CVec& x, double& value, CVec& grad) const {
  value = 0.0;
  grad = CVec::Zero(nvars_);
  std::array<int, 2 * kMaxN + 1> act{};
  std::array<double, 2 * kMaxN + 1> pw{}, pw1{};
  for (const auto& t : terms_) {
    int m = 0;
    for (int i = 0; i < nvars_; ++i)
      if (t.e[i]) {
        act[m] = i;
        pw1[m] = ipow(x(i), t.e[i] - 1);
        pw[m] = pw1[m] * x(i);
        ++m;
      }
    double prod = t.c;
    for (int a = 0; a < m; ++a) prod *= pw[a];
    value += prod;
    for (int a = 0; a < m; ++a) {
      double d = t.c * t.e[act[a]] * pw1[a];
      for (int b = 0; b < m; ++b)
        if (b != a) d *= pw[b];
      grad(act[a]) += d;
    }
  }
}

void Polynomial::eval_derivs(const CVec& x, double& value, CVec& grad, CMat& hess) const {
  value = 0.0;
  grad = CVec::Zero(nvars_);
  hess = CMat::Zero(nvars_, nvars_);
  std::array<int, 2 * kMaxN + 1> act{};
  std::array<double, 2 * kMaxN + 1> pw{}, pw1{}, pw2{};
  for (const auto& t : terms_) {
    int m = 0;
    for (int i = 0; i < nvars_; ++i)
      if (t.e[i]) {
        act[m] = i;
        pw2[m] = t.e[i] >= 2 ? ipow(x(i), t.e[i] - 2) : 0.0;
        pw1[m] = ipow(x(i), t.e[i] - 1);
        pw[m] = pw1[m] * x(i);
        ++m;
      }
    double prod = t.c;
    for (int a = 0; a < m; ++a) prod *= pw[a];
    value += prod;
    for (int a = 0; a < m; ++a) {
      const int ea = t.e[act[a]];
      double d = t.c * ea * pw1[a];
      for (int b = 0; b < m; ++b)
        if (b != a) d *= pw[b];
      grad(act[a]) += d;
      // diagonal
      double dd = t.c * ea * (ea - 1) * pw2[a];
      for (int b = 0; b < m; ++b)
        if (b != a) dd *= pw[b];
      hess(act[a], act[a]) += dd;
      for (int b = a + 1; b < m; ++b) {
        double od = t.c * ea * t.e[act[b]] * pw1[a] * pw1[b];
        for (int c = 0; c < m; ++c)
          if (c != a && c != b) od *= pw[c];
        hess(act[a], act[b]) += od;
        hess(act[b], act[a]) += od;
      }
    }
  }
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(nvars_);
  for (const auto& t : terms_) {
    if (t.e[var] == 0) continue;
    Exps e = t.e;
    const double c = t.c * e[var];
    e[var] -= 1;
    r.coef_[e] += c;
  }
  std::erase_if(r.coef_, [](const auto& kv) { return kv.second == 0.0; });
  r.rebuild();
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial: variable count mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.coef_) r.coef_[e] += c;
  std::erase_if(r.coef_, [](const auto& kv) { return kv.second == 0.0; });
  r.rebuild();
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(double a) const {
  Polynomial r(nvars_);
  if (a != 0.0)
    for (const auto& [e, c] : coef_) r.coef_[e] = a * c;
  r.rebuild();
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (o.nvars_ != nvars_) throw DimensionMismatch("polynomial: variable count mismatch");
  Polynomial r(nvars_);
  for (const auto& [e1, c1] : coef_)
    for (const auto& [e2, c2] : o.coef_) {
      Exps e{};
      for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
      r.coef_[e] += c1 * c2;
    }
  std::erase_if(r.coef_, [](const auto& kv) { return kv.second == 0.0; });
  r.rebuild();
  return r;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial r = constant(nvars_, 1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& repl) const {
  if (static_cast<int>(repl.size()) != nvars_) throw DimensionMismatch("substitute: wrong arity");
  const int out = repl.front().nvars();
  Polynomial r(out);
  for (const auto& t : terms_) {
    Polynomial m = constant(out, t.c);
    for (int i = 0; i < nvars_; ++i)
      if (t.e[i]) m = m * repl[i].pow(t.e[i]);
    r = r + m;
  }
  return r;
}

}  // namespace heis
