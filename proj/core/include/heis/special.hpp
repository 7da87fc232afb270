#pragma once

#include <optional>
#include <string_view>

namespace heis::special {

// Below this |x| every function switches to its Taylor series.
inline constexpr double kSeriesThreshold = 2.0;
inline constexpr int kSeriesTerms = 20;

double F(double x);   // sin x / x
double G(double x);   // (1 - cos x) / x
double H(double x);   // (x - sin x) / x^2
double F1(double x);  // sin x / x
double F2(double x);  // (1 - cos x) / x^2
double F3(double x);  // (sin x - x cos x) / x^3
double F4(double x);  // (2 - 2 cos x - x sin x) / x^4
double K(double x);   // (x - sin x) / x^3

enum class Fn { F, G, H, F1, F2, F3, F4, K };
double special(Fn which, double x);
std::optional<Fn> parse_fn(std::string_view name);

double f0(double lam, double s);
double f1(double lam, double s);
double f2(double lam, double s);
double f3(double lam, double s);
double f4(double lam, double s);
double k(double lam, double s);
double h(double lam, double s);
double j(double lam, double s);

// f0..f4 and k sharing one evaluation of the trig kernels.
struct FValues {
  double f0, f1, f2, f3, f4, k;
};
FValues f_all(double lam, double s);

}  // namespace heis::special
