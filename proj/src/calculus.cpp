#include "carnot/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace carnot {

Eigen::MatrixXd HorizontalFrame::coefficients(const Point& x) const {
  g_.check(x);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g_.dim(), g_.m());
  for (int j = 0; j < g_.m(); ++j) {
    a(j, j) = 1.0;
    for (int b = 0; b < g_.k(); ++b) a(g_.m() + b, j) = g_.law_coefficient() * g_.j_apply(b, x, j);
  }
  return a;
}

JetSeeds::JetSeeds(const GroupSpec& g, const Point& x) : g_(&g), x_(&x) {
  g.check(x);
  if (g.m() > kMaxHorizontal) throw std::invalid_argument("JetSeeds: horizontal dimension too large");
}

Jet2 JetSeeds::v(int i) const {
  Jet2 out(m(), x_->v(i));
  out.grad(i) = 1.0;
  return out;
}

Jet2 JetSeeds::z(int a) const {
  // X_j z_a = c (J_a v)_j and X_i X_j z_a = c (J_a)_{ji}.
  const double c = g_->law_coefficient();
  Jet2 out(m(), x_->z(a));
  for (int j = 0; j < m(); ++j) out.grad(j) = c * g_->j_apply(a, *x_, j);
  for (int i = 0; i < m(); ++i)
    for (int j = 0; j < m(); ++j) out.hess(i, j) = c * g_->j(a, j, i);
  return out;
}

Jet2 JetSeeds::horizontal_norm_sq() const {
  Jet2 out(m(), x_->horizontal_norm_sq());
  for (int i = 0; i < m(); ++i) {
    out.grad(i) = 2.0 * x_->v(i);
    out.hess(i, i) = 2.0;
  }
  return out;
}

Jet2 JetSeeds::vertical_norm_sq() const {
  Jet2 out(m(), 0.0);
  for (int a = 0; a < g_->k(); ++a) {
    const Jet2 za = z(a);
    out += za * za;
  }
  return out;
}

Jet2 JetSeeds::norm() const {
  const double n = homogeneous_norm(*g_, *x_);
  if (n == 0.0) throw std::domain_error("homogeneous norm is not differentiable at the origin");
  if (g_->is_abelian()) {
    // N = (|x|^2)^{1/2}
    const Jet2 s = horizontal_norm_sq();
    return s.compose(n, 0.5 / n, -0.25 / (n * n * n));
  }
  const Jet2 v2 = horizontal_norm_sq();
  Jet2 s = v2 * v2;
  s += vertical_norm_sq() * g_->norm_vertical_weight();
  // N = s^{1/4}, s = N^4
  const double n3 = n * n * n;
  return s.compose(n, 0.25 / n3, -0.1875 / (n3 * n3 * n));
}

Jet2 norm_jet(const GroupSpec& g, const Point& x) { return JetSeeds(g, x).norm(); }

double norm_gradient_sq(const GroupSpec& g, const Point& x) {
  const double n = homogeneous_norm(g, x);
  if (n == 0.0) throw std::domain_error("norm_gradient_sq: undefined at the origin");
  if (g.is_abelian()) return 1.0;
  return x.horizontal_norm_sq() / (n * n);
}

FunctionField::FunctionField(GroupSpec g, Expr expr, Support support, std::string label)
    : g_(std::move(g)), expr_(std::move(expr)), support_(support), label_(std::move(label)) {}

Jet2 FunctionField::jet(const Point& x) const {
  if (support_.inner > 0.0 || support_.bounded) {
    const double n = homogeneous_norm(g_, x);
    if (!support_.contains(n)) return Jet2(g_.m(), 0.0);
  }
  return expr_(JetSeeds(g_, x));
}

std::vector<double> horizontal_gradient(const ScalarField& phi, const Point& x) {
  const Jet2 j = phi.jet(x);
  std::vector<double> out(j.dim());
  for (int i = 0; i < j.dim(); ++i) out[i] = j.grad(i);
  return out;
}

double sub_laplacian(const ScalarField& phi, const Point& x) { return phi.jet(x).hlap(); }

double p_sub_laplacian(const Jet2& jet, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("p_sub_laplacian: p must exceed 1");
  const double g2 = jet.grad_sq();
  if (p == 2.0) return jet.hlap();
  if (g2 == 0.0) {
    if (p < 2.0) throw std::domain_error("p_sub_laplacian: degenerate gradient with p < 2");
    return 0.0;
  }
  // |grad|^{p-2} lap + (p-2)|grad|^{p-4} sum_ij X_i X_j X_iX_j
  const double w = std::pow(g2, 0.5 * (p - 2.0));
  return w * jet.hlap() + (p - 2.0) * (w / g2) * jet.hess_quadratic();
}

double p_sub_laplacian_scale(const Jet2& jet, double p) {
  const double g2 = jet.grad_sq();
  if (g2 == 0.0) return 0.0;
  const double w = std::pow(g2, 0.5 * (p - 2.0));
  double quad = 0.0;
  double lap = 0.0;
  const int m = jet.dim();
  for (int i = 0; i < m; ++i) {
    lap += std::abs(jet.hess(i, i));
    for (int j = 0; j < m; ++j) quad += std::abs(jet.grad(i) * jet.grad(j) * jet.hess(i, j));
  }
  return w * lap + std::abs(p - 2.0) * (w / g2) * quad;
}

double p_sub_laplacian(const ScalarField& phi, const Point& x, double p) { return p_sub_laplacian(phi.jet(x), p); }

double infinity_sub_laplacian(const ScalarField& phi, const Point& x) { return phi.jet(x).hess_quadratic(); }

Profile power_profile(double s) {
  return [s](double r) {
    const double p = std::pow(r, s - 2.0);
    return ProfileValue{p * r * r, s * p * r, s * (s - 1.0) * p};
  };
}

double radial_laplacian(const GroupSpec& g, const Profile& f, const Point& x) {
  const double n = homogeneous_norm(g, x);
  if (n == 0.0) throw std::domain_error("radial_laplacian: undefined at the origin");
  const ProfileValue pv = f(n);
  const int q = g.homogeneous_dimension();
  return norm_gradient_sq(g, x) * (pv.d2 + (q - 1) * pv.d1 / n);
}

Jet2 radial_jet(const GroupSpec& g, const Profile& f, const Point& x) {
  const Jet2 n = norm_jet(g, x);
  const ProfileValue pv = f(n.value());
  return n.compose(pv.f, pv.d1, pv.d2);
}

}  // namespace carnot
