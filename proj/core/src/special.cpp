#include "heis/special.hpp"

#include <array>
#include <cmath>

namespace heis::special {
namespace {

// Coefficients of the even series sum_k c_k u^k, u = x^2.
// Each table is (-1)^k * num(k) / (2k + shift)!.
template <typename Num>
std::array<double, kSeriesTerms> table(int shift, Num num) {
  std::array<double, kSeriesTerms> c{};
  for (int k = 0; k < kSeriesTerms; ++k) {
    double fact = 1.0;
    for (int m = 2; m <= 2 * k + shift; ++m) fact *= m;
    c[k] = ((k % 2) ? -1.0 : 1.0) * num(k) / fact;
  }
  return c;
}

const auto kF1 = table(1, [](int) { return 1.0; });
const auto kF2 = table(2, [](int) { return 1.0; });
const auto kF3 = table(3, [](int k) { return 2.0 * (k + 1); });
const auto kF4 = table(4, [](int k) { return 2.0 * (k + 1); });
const auto kK = table(3, [](int) { return 1.0; });

double horner(const std::array<double, kSeriesTerms>& c, double x) {
  const double u = x * x;
  double acc = 0.0;
  for (int k = kSeriesTerms - 1; k >= 0; --k) acc = acc * u + c[k];
  return acc;
}

bool small(double x) { return std::abs(x) < kSeriesThreshold; }

}  // namespace

double F1(double x) { return small(x) ? horner(kF1, x) : std::sin(x) / x; }

double F2(double x) {
  if (small(x)) return horner(kF2, x);
  return (1.0 - std::cos(x)) / (x * x);
}

double F3(double x) {
  if (small(x)) return horner(kF3, x);
  return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double F4(double x) {
  if (small(x)) return horner(kF4, x);
  const double x2 = x * x;
  return (2.0 - 2.0 * std::cos(x) - x * std::sin(x)) / (x2 * x2);
}

double K(double x) {
  if (small(x)) return horner(kK, x);
  return (x - std::sin(x)) / (x * x * x);
}

double F(double x) { return F1(x); }
double G(double x) { return small(x) ? x * horner(kF2, x) : (1.0 - std::cos(x)) / x; }
double H(double x) { return small(x) ? x * horner(kK, x) : (x - std::sin(x)) / (x * x); }

double special(Fn which, double x) {
  switch (which) {
    case Fn::F: return F(x);
    case Fn::G: return G(x);
    case Fn::H: return H(x);
    case Fn::F1: return F1(x);
    case Fn::F2: return F2(x);
    case Fn::F3: return F3(x);
    case Fn::F4: return F4(x);
    case Fn::K: return K(x);
  }
  return 0.0;
}

std::optional<Fn> parse_fn(std::string_view name) {
  if (name == "F") return Fn::F;
  if (name == "G") return Fn::G;
  if (name == "H") return Fn::H;
  if (name == "F1") return Fn::F1;
  if (name == "F2") return Fn::F2;
  if (name == "F3") return Fn::F3;
  if (name == "F4") return Fn::F4;
  if (name == "K") return Fn::K;
  return std::nullopt;
}

double f0(double lam, double s) { return std::cos(lam * s); }
double f1(double lam, double s) { return F1(lam * s) * s; }
double f2(double lam, double s) { return F2(lam * s) * s * s; }
double f3(double lam, double s) { return F3(lam * s) * s * s * s; }
double f4(double lam, double s) { return F4(lam * s) * s * s * s * s; }
double k(double lam, double s) { return K(lam * s) * s * s * s; }

// h = (lam s cos - sin)/lam^2 and j = (cos - 1 + lam s sin)/lam^2, rewritten
// through F3, F2, F4 so that lam = 0 is harmless.
double h(double lam, double s) { return -lam * f3(lam, s); }
double j(double lam, double s) { return f2(lam, s) - lam * lam * f4(lam, s); }

FValues f_all(double lam, double s) {
  const double x = lam * s;
  const double s2 = s * s;
  FValues v;
  if (small(x)) {
    v.f0 = std::cos(x);
    v.f1 = horner(kF1, x) * s;
    v.f2 = horner(kF2, x) * s2;
    v.f3 = horner(kF3, x) * s2 * s;
    v.f4 = horner(kF4, x) * s2 * s2;
    v.k = horner(kK, x) * s2 * s;
    return v;
  }
  const double sn = std::sin(x), cs = std::cos(x);
  const double x2 = x * x;
  v.f0 = cs;
  v.f1 = sn / x * s;
  v.f2 = (1.0 - cs) / x2 * s2;
  v.f3 = (sn - x * cs) / (x2 * x) * s2 * s;
  v.f4 = (2.0 - 2.0 * cs - x * sn) / (x2 * x2) * s2 * s2;
  v.k = (x - sn) / (x2 * x) * s2 * s;
  return v;
}

}  // namespace heis::special
