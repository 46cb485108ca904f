#include "carnot/group.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carnot {

Point::Point(int m, int k) : m_(m), k_(k) {
  if (m < 0 || k < 0 || m + k > kMaxDim) {
    throw std::invalid_argument("Point: dimension out of range");
  }
}

Point::Point(std::span<const double> v, std::span<const double> z)
    : Point(static_cast<int>(v.size()), static_cast<int>(z.size())) {
  for (int i = 0; i < m_; ++i) c_[i] = v[i];
  for (int a = 0; a < k_; ++a) c_[m_ + a] = z[a];
}

double Point::horizontal_norm_sq() const {
  double s = 0.0;
  for (int i = 0; i < m_; ++i) s += c_[i] * c_[i];
  return s;
}

double Point::vertical_norm_sq() const {
  double s = 0.0;
  for (int a = 0; a < k_; ++a) s += c_[m_ + a] * c_[m_ + a];
  return s;
}

bool Point::is_finite() const {
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

GroupSpec GroupSpec::abelian(int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("abelian: n out of range");
  GroupSpec g;
  g.kind_ = GroupKind::Abelian;
  g.m_ = n;
  g.k_ = 0;
  g.index_ = n;
  return g;
}

GroupSpec GroupSpec::heisenberg(int n) {
  if (n < 1 || 2 * n + 1 > kMaxDim) throw std::invalid_argument("heisenberg: n out of range");
  GroupSpec g;
  g.kind_ = GroupKind::Heisenberg;
  g.m_ = 2 * n;
  g.k_ = 1;
  g.index_ = n;
  g.c_law_ = 2.0;
  g.c_norm_ = 1.0;
  // J(x, y) = (y, -x), so 2<Jv, v'> = 2 sum_j (y_j x'_j - x_j y'_j) = 2 sum_j Im(z_j conj(z'_j)).
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  g.j_maps_ = {j};
  g.flatten();
  return g;
}

GroupSpec GroupSpec::htype(std::vector<Eigen::MatrixXd> j_maps) {
  if (j_maps.empty()) throw std::invalid_argument("htype: at least one J-map is required");
  const auto report = validate_htype(j_maps, 1e-10);
  if (!report.pass) throw std::invalid_argument("htype: " + report.message);
  GroupSpec g;
  g.kind_ = GroupKind::HType;
  g.m_ = static_cast<int>(j_maps.front().rows());
  g.k_ = static_cast<int>(j_maps.size());
  if (g.m_ + g.k_ > kMaxDim) throw std::invalid_argument("htype: dimension out of range");
  g.index_ = g.m_;
  g.c_law_ = 0.5;
  g.c_norm_ = 16.0;
  g.j_maps_ = std::move(j_maps);
  g.flatten();
  return g;
}

void GroupSpec::flatten() {
  j_flat_.assign(static_cast<std::size_t>(k_ * m_ * m_), 0.0);
  for (int a = 0; a < k_; ++a)
    for (int i = 0; i < m_; ++i)
      for (int l = 0; l < m_; ++l) j_flat_[(a * m_ + i) * m_ + l] = j_maps_[a](i, l);
}

double GroupSpec::j_apply(int a, const Point& x, int i) const {
  const double* row = &j_flat_[(a * m_ + i) * m_];
  double s = 0.0;
  for (int l = 0; l < m_; ++l) s += row[l] * x.v(l);
  return s;
}

std::string GroupSpec::name() const {
  std::ostringstream os;
  switch (kind_) {
    case GroupKind::Abelian: os << "R" << index_; break;
    case GroupKind::Heisenberg: os << "H" << index_; break;
    case GroupKind::HType: os << "Htype(" << m_ << "," << k_ << ")"; break;
  }
  return os.str();
}

void GroupSpec::check(const Point& x) const {
  if (x.m() != m_ || x.k() != k_) {
    std::ostringstream os;
    os << "point of shape (" << x.m() << "," << x.k() << ") does not belong to " << name();
    throw std::invalid_argument(os.str());
  }
}

Point GroupSpec::make_point(std::span<const double> coords) const {
  if (static_cast<int>(coords.size()) != dim()) throw std::invalid_argument("make_point: wrong coordinate count");
  Point p(m_, k_);
  for (int i = 0; i < dim(); ++i) p[i] = coords[i];
  return p;
}

bool operator==(const GroupSpec& a, const GroupSpec& b) {
  return a.kind_ == b.kind_ && a.m_ == b.m_ && a.k_ == b.k_ && a.j_flat_ == b.j_flat_;
}

Point multiply(const GroupSpec& g, const Point& x, const Point& y) {
  g.check(x);
  g.check(y);
  Point out(g.m(), g.k());
  for (int i = 0; i < g.dim(); ++i) out[i] = x[i] + y[i];
  for (int a = 0; a < g.k(); ++a) {
    double s = 0.0;
    for (int i = 0; i < g.m(); ++i) s += g.j_apply(a, x, i) * y.v(i);
    out.z(a) += g.law_coefficient() * s;
  }
  return out;
}

Point inverse(const GroupSpec& g, const Point& x) {
  g.check(x);
  Point out(g.m(), g.k());
  for (int i = 0; i < g.dim(); ++i) out[i] = -x[i];
  return out;
}

Point dilate(const GroupSpec& g, double lambda, const Point& x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
  g.check(x);
  Point out = x;
  for (int i = 0; i < g.m(); ++i) out.v(i) *= lambda;
  for (int a = 0; a < g.k(); ++a) out.z(a) *= lambda * lambda;
  return out;
}

double homogeneous_norm(const GroupSpec& g, const Point& x) {
  g.check(x);
  const double v2 = x.horizontal_norm_sq();
  if (g.is_abelian()) return std::sqrt(v2);
  const double z2 = x.vertical_norm_sq();
  return std::pow(v2 * v2 + g.norm_vertical_weight() * z2, 0.25);
}

HTypeValidation validate_htype(const std::vector<Eigen::MatrixXd>& j_maps, double tol) {
  HTypeValidation out;
  if (j_maps.empty()) throw std::invalid_argument("validate_htype: empty J-map list");
  const auto m = j_maps.front().rows();
  for (const auto& j : j_maps) {
    if (j.rows() != j.cols()) throw std::invalid_argument("validate_htype: J-map is not square");
    if (j.rows() != m) throw std::invalid_argument("validate_htype: J-maps have mismatched dimensions");
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
  double worst = 0.0;
  std::string what;
  auto note = [&](double v, const std::string& label) {
    if (v > worst) {
      worst = v;
      what = label;
    }
  };
  for (std::size_t a = 0; a < j_maps.size(); ++a) {
    const auto& ja = j_maps[a];
    note((ja + ja.transpose()).cwiseAbs().maxCoeff(), "J_" + std::to_string(a) + " is not skew-symmetric");
    note((ja * ja + id).cwiseAbs().maxCoeff(), "J_" + std::to_string(a) + "^2 != -I");
    for (std::size_t b = a + 1; b < j_maps.size(); ++b) {
      const auto& jb = j_maps[b];
      note((ja * jb + jb * ja).cwiseAbs().maxCoeff(),
           "J_" + std::to_string(a) + " and J_" + std::to_string(b) + " do not anticommute");
    }
  }
  out.max_violation = worst;
  out.pass = worst <= tol;
  out.message = out.pass ? "ok" : what;
  return out;
}

std::vector<Eigen::MatrixXd> quaternionic_j_maps() {
  // Basis (1, i, j, k); column c holds the image of basis vector c.
  Eigen::MatrixXd li(4, 4), lj(4, 4), lk(4, 4);
  li << 0, -1, 0, 0,
        1, 0, 0, 0,
        0, 0, 0, -1,
        0, 0, 1, 0;
  lj << 0, 0, -1, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, -1, 0, 0;
  lk << 0, 0, 0, -1,
        0, 0, -1, 0,
        0, 1, 0, 0,
        1, 0, 0, 0;
  return {li, lj, lk};
}

void to_json(nlohmann::json& out, const GroupSpec& g) {
  switch (g.kind()) {
    case GroupKind::Abelian: out = {{"kind", "abelian"}, {"n", g.index()}}; break;
    case GroupKind::Heisenberg: out = {{"kind", "heisenberg"}, {"n", g.index()}}; break;
    case GroupKind::HType: {
      nlohmann::json maps = nlohmann::json::array();
      for (const auto& j : g.j_maps()) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < j.rows(); ++r) {
          std::vector<double> row(j.cols());
          for (Eigen::Index c = 0; c < j.cols(); ++c) row[c] = j(r, c);
          rows.push_back(row);
        }
        maps.push_back(rows);
      }
      out = {{"kind", "htype"}, {"m", g.m()}, {"k", g.k()}, {"J", maps}};
      break;
    }
  }
}

GroupSpec group_from_json(const nlohmann::json& in) {
  const std::string kind = in.at("kind").get<std::string>();
  if (kind == "abelian") return GroupSpec::abelian(in.at("n").get<int>());
  if (kind == "heisenberg") return GroupSpec::heisenberg(in.at("n").get<int>());
  if (kind == "htype") {
    const int m = in.at("m").get<int>();
    const int k = in.at("k").get<int>();
    if (in.contains("J")) {
      const auto& maps = in.at("J");
      if (static_cast<int>(maps.size()) != k) throw std::invalid_argument("htype: J has wrong number of maps");
      std::vector<Eigen::MatrixXd> js;
      for (const auto& rows : maps) {
        // Row-major: either nested rows or a flat list of m*m entries.
        Eigen::MatrixXd j(m, m);
        if (rows.size() == static_cast<std::size_t>(m) && rows.front().is_array()) {
          for (int r = 0; r < m; ++r) {
            if (rows[r].size() != static_cast<std::size_t>(m)) throw std::invalid_argument("htype: ragged J row");
            for (int c = 0; c < m; ++c) j(r, c) = rows[r][c].get<double>();
          }
        } else if (rows.size() == static_cast<std::size_t>(m * m)) {
          for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) j(r, c) = rows[r * m + c].get<double>();
        } else {
          throw std::invalid_argument("htype: J-map has wrong size");
        }
        js.push_back(j);
      }
      return GroupSpec::htype(std::move(js));
    }
    if (m == 4 && k == 3) return GroupSpec::htype(quaternionic_j_maps());
    if (m == 2 && k == 1) {
      Eigen::MatrixXd j(2, 2);
      j << 0, 1, -1, 0;
      return GroupSpec::htype({j});
    }
    throw std::invalid_argument("htype: J-maps required for this (m, k)");
  }
  throw std::invalid_argument("unknown group kind '" + kind + "'");
}

}  // namespace carnot
