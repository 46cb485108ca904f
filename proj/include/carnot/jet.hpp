#pragma once

#include <array>
#include <cmath>

namespace carnot {

/// Largest horizontal dimension a jet can carry.
inline constexpr int kMaxHorizontal = 8;

/// Second-order horizontal jet of a scalar function at a point:
/// value, X_i f and the (non-symmetric) horizontal Hessian X_i X_j f.
///
/// The algebra is closed under +, *, / and composition with smooth scalar
/// maps, so any expression built from coordinate seeds carries exact
/// horizontal derivatives. X_i X_j f - X_j X_i f is the vertical derivative
/// along [X_i, X_j], which is why both orders are stored.
class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(int m, double value = 0.0) : m_(m), val_(value) {
    for (int i = 0; i < m_; ++i) g_[i] = 0.0;
    for (int i = 0; i < m_ * m_; ++i) h_[i] = 0.0;
  }

  int dim() const { return m_; }
  double value() const { return val_; }
  double& value() { return val_; }
  double grad(int i) const { return g_[i]; }
  double& grad(int i) { return g_[i]; }
  /// X_i (X_j f).
  double hess(int i, int j) const { return h_[i * m_ + j]; }
  double& hess(int i, int j) { return h_[i * m_ + j]; }

  double grad_sq() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += g_[i] * g_[i];
    return s;
  }
  /// Sub-Laplacian sum_j X_j X_j f.
  double hlap() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += h_[i * m_ + i];
    return s;
  }
  /// sum_ij X_i f X_j f X_i X_j f.
  double hess_quadratic() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) s += g_[i] * g_[j] * h_[i * m_ + j];
    return s;
  }
  bool is_zero() const {
    if (val_ != 0.0) return false;
    for (int i = 0; i < m_; ++i)
      if (g_[i] != 0.0) return false;
    for (int i = 0; i < m_ * m_; ++i)
      if (h_[i] != 0.0) return false;
    return true;
  }

  /// h(f) for a scalar map h with h(f) = f0, h'(f) = f1, h''(f) = f2.
  Jet2 compose(double f0, double f1, double f2) const {
    Jet2 out(m_, f0);
    for (int i = 0; i < m_; ++i) out.g_[i] = f1 * g_[i];
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) out.h_[i * m_ + j] = f1 * h_[i * m_ + j] + f2 * g_[i] * g_[j];
    return out;
  }

  Jet2& operator+=(const Jet2& o) {
    val_ += o.val_;
    for (int i = 0; i < m_; ++i) g_[i] += o.g_[i];
    for (int i = 0; i < m_ * m_; ++i) h_[i] += o.h_[i];
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    val_ -= o.val_;
    for (int i = 0; i < m_; ++i) g_[i] -= o.g_[i];
    for (int i = 0; i < m_ * m_; ++i) h_[i] -= o.h_[i];
    return *this;
  }
  Jet2& operator*=(double c) {
    val_ *= c;
    for (int i = 0; i < m_; ++i) g_[i] *= c;
    for (int i = 0; i < m_ * m_; ++i) h_[i] *= c;
    return *this;
  }
  Jet2& operator+=(double c) {
    val_ += c;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j)
        h_[i * m_ + j] = val_ * o.h_[i * m_ + j] + o.val_ * h_[i * m_ + j] + g_[i] * o.g_[j] + o.g_[i] * g_[j];
    for (int i = 0; i < m_; ++i) g_[i] = val_ * o.g_[i] + o.val_ * g_[i];
    val_ *= o.val_;
    return *this;
  }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator*(Jet2 a, double c) { return a *= c; }
  friend Jet2 operator*(double c, Jet2 a) { return a *= c; }
  friend Jet2 operator+(Jet2 a, double c) { return a += c; }
  friend Jet2 operator+(double c, Jet2 a) { return a += c; }
  friend Jet2 operator-(Jet2 a, double c) { return a += -c; }
  friend Jet2 operator-(Jet2 a) { return a *= -1.0; }
  friend Jet2 operator/(Jet2 a, double c) { return a *= 1.0 / c; }
  friend Jet2 operator/(double c, const Jet2& b) {
    const double inv = 1.0 / b.val_;
    return b.compose(c * inv, -c * inv * inv, 2.0 * c * inv * inv * inv);
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * (1.0 / b); }

 private:
  int m_ = 0;
  double val_ = 0.0;
  std::array<double, kMaxHorizontal> g_;
  std::array<double, kMaxHorizontal * kMaxHorizontal> h_;
};

inline Jet2 pow(const Jet2& f, double s) {
  const double x = f.value();
  const double p = std::pow(x, s - 2.0);
  return f.compose(p * x * x, s * p * x, s * (s - 1.0) * p);
}

inline Jet2 exp(const Jet2& f) {
  const double e = std::exp(f.value());
  return f.compose(e, e, e);
}

inline Jet2 sqrt(const Jet2& f) { return pow(f, 0.5); }

}  // namespace carnot
