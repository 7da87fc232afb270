#include "heis/fd.hpp"

namespace heis {

Point surface_curve_point(const LevelSurface& S, const Point& q, const FrameVector& u, double tau) {
  CVec c = q.coords() + tau * to_coords(q, u);
  double v = 0.0;
  CVec gr;
  S.g().eval_grad(c, v, gr);
  const double g2 = gr.squaredNorm();
  if (g2 > 0.0) c -= (v / g2) * gr;
  return Point::from_coords(c);
}

}  // namespace heis
