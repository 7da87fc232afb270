#pragma once

// Small square or overdetermined least-squares solver with Levenberg damping and
// central-difference Jacobians. Sizes are bounded by 2*kMaxN+1, so everything
// lives on the stack.

#include <cmath>
#include <utility>

#include "heis/group.hpp"

namespace heis::detail {

struct DampedNewtonOptions {
  int max_iter = 60;
  double abs_tol = 1e-14;    // stop once |r| <= abs_tol
  double step_tol = 1e-15;   // relative step size
  double fd_rel_step = 1e-7;
};

struct DampedNewtonResult {
  CVec x;
  CVec r;
  double norm = 0.0;
  int iters = 0;
  bool ok = false;  // residual function stayed finite
};

// residual(x, r) returns false when x is outside its domain; jacobian(x, r, J)
// fills J at x given r = residual(x).
template <class Residual, class Jacobian>
DampedNewtonResult damped_newton(Residual&& residual, Jacobian&& jacobian, CVec x, const DampedNewtonOptions& opt) {
  DampedNewtonResult out;
  const Eigen::Index nx = x.size();
  CVec r;
  if (!residual(x, r)) return out;
  const Eigen::Index nr = r.size();
  double f = r.squaredNorm();
  double mu = 1e-6;
  CMat Jm(nr, nx);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    if (std::sqrt(f) <= opt.abs_tol) break;
    if (!jacobian(x, r, Jm)) break;
    const CMat JtJ = Jm.transpose() * Jm;
    const CVec g = Jm.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 30; ++tries) {
      CMat Mx = JtJ;
      for (Eigen::Index k = 0; k < nx; ++k) Mx(k, k) += mu * (JtJ(k, k) + 1e-12);
      const CVec dx = -Mx.ldlt().solve(g);
      if (!dx.allFinite()) {
        mu *= 10.0;
        continue;
      }
      CVec xn = x + dx;
      CVec rn;
      if (residual(xn, rn)) {
        const double fn = rn.squaredNorm();
        if (fn < f || fn == 0.0) {
          const double rel = dx.norm() / (1.0 + x.norm());
          x = xn;
          r = rn;
          f = fn;
          mu = std::max(mu * 0.1, 1e-12);
          accepted = true;
          if (rel <= opt.step_tol) it = opt.max_iter;
          break;
        }
      }
      mu *= 10.0;
    }
    if (!accepted) break;
  }
  out.x = x;
  out.r = r;
  out.norm = std::sqrt(f);
  out.iters = it;
  out.ok = true;
  return out;
}

// Central-difference Jacobian.
template <class Residual>
DampedNewtonResult damped_newton(Residual&& residual, CVec x, const DampedNewtonOptions& opt) {
  auto fd = [&](const CVec& x0, const CVec&, CMat& Jm) {
    CVec rp, rm;
    for (Eigen::Index k = 0; k < x0.size(); ++k) {
      const double h = opt.fd_rel_step * std::max(1.0, std::abs(x0(k)));
      CVec xp = x0, xm = x0;
      xp(k) += h;
      xm(k) -= h;
      if (!residual(xp, rp) || !residual(xm, rm)) return false;
      Jm.col(k) = (rp - rm) / (2.0 * h);
    }
    return true;
  };
  return damped_newton(residual, fd, std::move(x), opt);
}

}  // namespace heis::detail
