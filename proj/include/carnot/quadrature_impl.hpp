#pragma once

namespace carnot {

template <class Rng>
Point uniform_in_unit_ball(const GroupSpec& g, Rng& rng) {
  const double e = g.vertical_extent();
  Point p(g.m(), g.k());
  for (;;) {
    for (int i = 0; i < g.m(); ++i) p.v(i) = 2.0 * detail::unit_double(rng()) - 1.0;
    for (int a = 0; a < g.k(); ++a) p.z(a) = e * (2.0 * detail::unit_double(rng()) - 1.0);
    if (homogeneous_norm(g, p) < 1.0) return p;
  }
}

}  // namespace carnot
