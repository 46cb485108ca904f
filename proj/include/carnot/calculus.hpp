#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "carnot/group.hpp"
#include "carnot/jet.hpp"

namespace carnot {

/// Coefficients of the left-invariant horizontal frame in the coordinate basis.
class HorizontalFrame {
 public:
  explicit HorizontalFrame(GroupSpec g) : g_(std::move(g)) {}
  /// (dim x m) matrix; column j holds X_j(x) in the basis d/dv_1..d/dv_m, d/dz_1..d/dz_k.
  Eigen::MatrixXd coefficients(const Point& x) const;
  const GroupSpec& group() const { return g_; }

 private:
  GroupSpec g_;
};

/// Horizontal jets of the coordinate functions at a fixed point.
class JetSeeds {
 public:
  JetSeeds(const GroupSpec& g, const Point& x);

  const GroupSpec& group() const { return *g_; }
  const Point& point() const { return *x_; }
  int m() const { return g_->m(); }

  Jet2 constant(double c) const { return Jet2(m(), c); }
  Jet2 v(int i) const;
  Jet2 z(int a) const;
  Jet2 horizontal_norm_sq() const;
  Jet2 vertical_norm_sq() const;
  /// Homogeneous norm N. Throws std::domain_error at the origin.
  Jet2 norm() const;

 private:
  const GroupSpec* g_;
  const Point* x_;
};

/// Homogeneous norm with exact horizontal derivatives (x != 0).
Jet2 norm_jet(const GroupSpec& g, const Point& x);

/// Closed form |grad N|^2: 1 on abelian groups, |v|^2/N^2 otherwise.
/// Throws std::domain_error at the origin.
double norm_gradient_sq(const GroupSpec& g, const Point& x);

/// Norm annulus {inner <= N <= outer} containing the support of a field.
struct Support {
  double inner = 0.0;
  double outer = 0.0;
  bool bounded = true;
  bool contains(double n) const { return n >= inner && (!bounded || n <= outer); }
};

/// Scalar test field with exact second-order horizontal jets.
/// Implementations are immutable and safe to evaluate concurrently.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual const GroupSpec& group() const = 0;
  /// Zero jet outside support().
  virtual Jet2 jet(const Point& x) const = 0;
  virtual double value(const Point& x) const { return jet(x).value(); }
  virtual Support support() const = 0;
  virtual nlohmann::json describe() const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Field defined by an expression over coordinate seeds.
class FunctionField final : public ScalarField {
 public:
  using Expr = std::function<Jet2(const JetSeeds&)>;
  FunctionField(GroupSpec g, Expr expr, Support support, std::string label);

  const GroupSpec& group() const override { return g_; }
  Jet2 jet(const Point& x) const override;
  Support support() const override { return support_; }
  nlohmann::json describe() const override { return {{"kind", "expression"}, {"label", label_}}; }

 private:
  GroupSpec g_;
  Expr expr_;
  Support support_;
  std::string label_;
};

std::vector<double> horizontal_gradient(const ScalarField& phi, const Point& x);
double sub_laplacian(const ScalarField& phi, const Point& x);

/// sum_i X_i(|grad phi|^{p-2} X_i phi). Throws std::domain_error when p < 2 and grad phi = 0.
double p_sub_laplacian(const ScalarField& phi, const Point& x, double p);
/// Same operator evaluated on a precomputed jet.
double p_sub_laplacian(const Jet2& jet, double p);
/// Sum of the absolute values of the terms of p_sub_laplacian; the natural
/// scale for "equals zero" checks.
double p_sub_laplacian_scale(const Jet2& jet, double p);

/// 1/2 <grad |grad phi|^2, grad phi> = sum_ij X_i phi X_j phi X_i X_j phi.
double infinity_sub_laplacian(const ScalarField& phi, const Point& x);

/// f(r), f'(r), f''(r).
struct ProfileValue {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
using Profile = std::function<ProfileValue(double)>;

/// r -> r^s.
Profile power_profile(double s);

/// |grad N|^2 [f''(N) + (Q-1) f'(N)/N]. Abelian and step-2 groups only;
/// throws std::domain_error at the origin.
double radial_laplacian(const GroupSpec& g, const Profile& f, const Point& x);

/// f o N as a jet.
Jet2 radial_jet(const GroupSpec& g, const Profile& f, const Point& x);

}  // namespace carnot
