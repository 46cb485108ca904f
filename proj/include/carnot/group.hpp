#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace carnot {

/// Largest total coordinate dimension m + k a Point can hold.
inline constexpr int kMaxDim = 10;

enum class GroupKind { Abelian, Heisenberg, HType };

/// Graded exponential coordinates: horizontal block v (m entries) followed by
/// the vertical block z (k entries). Heisenberg points store (x_1..x_n, y_1..y_n, t).
class Point {
 public:
  Point() = default;
  Point(int m, int k);
  Point(std::span<const double> v, std::span<const double> z);

  int m() const { return m_; }
  int k() const { return k_; }
  int dim() const { return m_ + k_; }

  double v(int i) const { return c_[i]; }
  double& v(int i) { return c_[i]; }
  double z(int a) const { return c_[m_ + a]; }
  double& z(int a) { return c_[m_ + a]; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim())}; }
  std::span<double> coords() { return {c_.data(), static_cast<std::size_t>(dim())}; }

  double horizontal_norm_sq() const;
  double vertical_norm_sq() const;
  bool is_finite() const;

 private:
  std::array<double, kMaxDim> c_{};
  int m_ = 0;
  int k_ = 0;
};

/// A concrete Carnot group of step <= 2 whose homogeneous norm is explicit.
///
/// Step-2 groups share one representation: the group law is
///   (v, z) . (v', z') = (v + v', z_a + z'_a + c_law <J_a v, v'>)
/// and the norm is N = (|v|^4 + c_norm |z|^2)^(1/4). Heisenberg groups use the
/// standard symplectic J with c_law = 2, c_norm = 1; H-type groups use the
/// supplied J-maps with c_law = 1/2, c_norm = 16.
class GroupSpec {
 public:
  static GroupSpec abelian(int n);
  static GroupSpec heisenberg(int n);
  /// Throws std::invalid_argument unless the maps satisfy the Clifford relations.
  static GroupSpec htype(std::vector<Eigen::MatrixXd> j_maps);

  GroupKind kind() const { return kind_; }
  int m() const { return m_; }
  int k() const { return k_; }
  int dim() const { return m_ + k_; }
  int homogeneous_dimension() const { return m_ + 2 * k_; }
  /// n for abelian R^n and Heisenberg H^n; m for H-type.
  int index() const { return index_; }

  double law_coefficient() const { return c_law_; }
  double norm_vertical_weight() const { return c_norm_; }
  /// Half-width of the vertical box enclosing {N <= 1}.
  double vertical_extent() const { return 1.0 / std::sqrt(c_norm_); }

  const std::vector<Eigen::MatrixXd>& j_maps() const { return j_maps_; }
  /// Entry (i, l) of J_a.
  double j(int a, int i, int l) const { return j_flat_[(a * m_ + i) * m_ + l]; }
  /// (J_a v)_i for the horizontal part of x.
  double j_apply(int a, const Point& x, int i) const;

  bool is_abelian() const { return kind_ == GroupKind::Abelian; }
  std::string name() const;

  void check(const Point& x) const;
  Point zero() const { return Point(m_, k_); }
  Point make_point(std::span<const double> coords) const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b);

 private:
  GroupSpec() = default;
  void flatten();

  GroupKind kind_ = GroupKind::Abelian;
  int m_ = 0;
  int k_ = 0;
  int index_ = 0;
  double c_law_ = 0.0;
  double c_norm_ = 1.0;
  std::vector<Eigen::MatrixXd> j_maps_;
  std::vector<double> j_flat_;
};

Point multiply(const GroupSpec& g, const Point& x, const Point& y);
Point inverse(const GroupSpec& g, const Point& x);
/// Throws std::invalid_argument for lambda <= 0.
Point dilate(const GroupSpec& g, double lambda, const Point& x);
double homogeneous_norm(const GroupSpec& g, const Point& x);

struct HTypeValidation {
  bool pass = false;
  double max_violation = 0.0;
  std::string message;
};

/// Checks skew-symmetry, J_a^2 = -I and J_a J_b + J_b J_a = 0 (a != b).
/// Throws std::invalid_argument on non-square or mismatched matrices.
HTypeValidation validate_htype(const std::vector<Eigen::MatrixXd>& j_maps, double tol = 1e-12);

/// Left multiplication by i, j, k on the quaternions, as 4x4 real matrices.
std::vector<Eigen::MatrixXd> quaternionic_j_maps();

void to_json(nlohmann::json& out, const GroupSpec& g);
GroupSpec group_from_json(const nlohmann::json& in);

}  // namespace carnot
