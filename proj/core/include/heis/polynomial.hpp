#pragma once

#include <array>
#include <initializer_list>
#include <map>
#include <vector>

#include "heis/group.hpp"

namespace heis {

// Sparse multivariate polynomial with at most 2*kMaxN+1 variables.
class Polynomial {
 public:
  using Exps = std::array<int, 2 * kMaxN + 1>;

  struct Term {
    Exps e{};
    double c = 0.0;
  };

  Polynomial() = default;
  explicit Polynomial(int nvars);

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int i);

  int nvars() const { return nvars_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  void add_term(const std::vector<int>& exps, double coef);
  void add_term(const Exps& exps, double coef);
  void add_term(std::initializer_list<int> exps, double coef) { add_term(std::vector<int>(exps), coef); }

  double eval(const CVec& x) const;
  // value, gradient and Hessian in one pass, all exact
  void eval_derivs(const CVec& x, double& value, CVec& grad, CMat& hess) const;
  void eval_grad(const CVec& x, double& value, CVec& grad) const;

  Polynomial derivative(int var) const;
  // replaces variable i by repl[i]
  Polynomial substitute(const std::vector<Polynomial>& repl) const;
  Polynomial pow(int k) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double a) const;
  Polynomial operator-() const { return *this * -1.0; }

 private:
  void rebuild();

  int nvars_ = 0;
  std::map<Exps, double> coef_;
  std::vector<Term> terms_;
};

}  // namespace heis
