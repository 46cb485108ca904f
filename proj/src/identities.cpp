#include "carnot/identities.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "carnot/quadrature.hpp"

namespace carnot {

namespace {

std::string param(const char* name, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g", name, v);
  return buf;
}

template <class Residual>
IdentityResult run(std::string check, std::string p, double tol, const GroupSpec& g, int points, std::uint64_t seed,
                   Residual&& residual) {
  if (points < 1) throw std::invalid_argument("identity check: need at least one point");
  IdentityResult r{std::move(check), std::move(p), 0.0, tol, points};
  std::uint64_t state = seed;
  for (int i = 0; i < points; ++i) {
    const Point x = random_point_in_shell(g, state);
    const double e = residual(x);
    if (std::isnan(e)) {
      r.max_error = std::numeric_limits<double>::infinity();
      return r;
    }
    r.max_error = std::max(r.max_error, e);
  }
  return r;
}

double ratio(double err, double scale) {
  if (scale == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(err) / scale;
}

// |Delta N^s - s(s+Q-2) N^{s-2}|grad N|^2| over the sum of absolute terms of the radial form.
double power_residual(const GroupSpec& g, double s, const Point& x) {
  const int q = g.homogeneous_dimension();
  const double n = homogeneous_norm(g, x);
  const double gn2 = norm_gradient_sq(g, x);
  const double base = std::pow(n, s - 2.0) * gn2;
  const double lap = radial_jet(g, power_profile(s), x).hlap();
  return ratio(lap - s * (s + q - 2.0) * base, (std::abs(s * (s - 1.0)) + std::abs(s * (q - 1.0))) * base);
}

}  // namespace

Point random_point_in_shell(const GroupSpec& g, std::uint64_t& state, double lo, double hi) {
  state = detail::splitmix64(state);
  std::mt19937_64 rng(state);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Point p(g.m(), g.k());
  double n = 0.0;
  while (n == 0.0) {
    for (int i = 0; i < g.dim(); ++i) p[i] = n01(rng);
    n = homogeneous_norm(g, p);
  }
  return dilate(g, std::exp(u(rng)) / n, p);
}

IdentityResult harmonicity_check(const GroupSpec& g, int points, std::uint64_t seed) {
  const int q = g.homogeneous_dimension();
  return run("harmonicity", param("Q", q), 1e-6, g, points, seed, [&](const Point& x) {
    const double n = homogeneous_norm(g, x);
    const double lap = radial_jet(g, power_profile(2.0 - q), x).hlap();
    return ratio(lap, std::pow(n, -q) * norm_gradient_sq(g, x));
  });
}

IdentityResult norm_gradient_check(const GroupSpec& g, int points, std::uint64_t seed) {
  return run("norm-gradient", "", 1e-10, g, points, seed, [&](const Point& x) {
    const double closed = g.is_abelian() ? 1.0 : x.horizontal_norm_sq() / std::pow(homogeneous_norm(g, x), 2);
    return ratio(norm_jet(g, x).grad_sq() - closed, closed);
  });
}

IdentityResult power_laplacian_check(const GroupSpec& g, double s, int points, std::uint64_t seed) {
  return run("power-laplacian", param("s", s), 1e-8, g, points, seed,
             [&](const Point& x) { return power_residual(g, s, x); });
}

IdentityResult weighted_power_check(const GroupSpec& g, double alpha, int points, std::uint64_t seed) {
  return run("weighted-power-laplacian", param("alpha", alpha), 1e-8, g, points, seed,
             [&](const Point& x) { return power_residual(g, alpha - 2.0, x); });
}

IdentityResult infinity_harmonic_check(const GroupSpec& g, int points, std::uint64_t seed) {
  return run("infinity-harmonic", "", 1e-8, g, points, seed, [&](const Point& x) {
    const Jet2 n = norm_jet(g, x);
    double scale = 0.0;
    for (int i = 0; i < g.m(); ++i)
      for (int j = 0; j < g.m(); ++j) scale += std::abs(n.grad(i) * n.grad(j) * n.hess(i, j));
    return ratio(n.hess_quadratic(), scale);
  });
}

IdentityResult orthogonality_check(const GroupSpec& g, double gamma, int points, std::uint64_t seed) {
  return run("orthogonality", param("gamma", gamma), 1e-8, g, points, seed, [&](const Point& x) {
    const JetSeeds s(g, x);
    const Jet2 n = s.norm();
    const Jet2 w = g.is_abelian() ? s.constant(1.0) : pow(s.horizontal_norm_sq() / (n * n), 0.5 * gamma);
    double dot = 0.0, scale = 0.0;
    for (int i = 0; i < g.m(); ++i) {
      dot += n.grad(i) * w.grad(i);
      scale += std::abs(n.grad(i) * w.grad(i));
    }
    return ratio(dot, scale);
  });
}

IdentityResult radial_form_check(const GroupSpec& g, int points, std::uint64_t seed) {
  const Profile f = [](double r) {
    const double d = 1.0 + r * r;
    return ProfileValue{std::log(d), 2.0 * r / d, 2.0 * (1.0 - r * r) / (d * d)};
  };
  const int q = g.homogeneous_dimension();
  return run("radial-form", "", 1e-8, g, points, seed, [&](const Point& x) {
    const double n = homogeneous_norm(g, x);
    const ProfileValue pv = f(n);
    const double scale = norm_gradient_sq(g, x) * (std::abs(pv.d2) + std::abs((q - 1) * pv.d1 / n));
    return ratio(radial_laplacian(g, f, x) - radial_jet(g, f, x).hlap(), scale);
  });
}

IdentityResult p_fundamental_check(const GroupSpec& g, double p, int points, std::uint64_t seed) {
  const int q = g.homogeneous_dimension();
  if (!(p > 1.0) || p == q) throw std::invalid_argument("p_fundamental_check: need 1 < p != Q");
  const double s = (p - q) / (p - 1.0);
  return run("p-fundamental", param("p", p), 1e-6, g, points, seed, [&](const Point& x) {
    const Jet2 j = radial_jet(g, power_profile(s), x);
    return ratio(p_sub_laplacian(j, p), p_sub_laplacian_scale(j, p));
  });
}

}  // namespace carnot
