#include <gtest/gtest.h>

#include <random>

#include "carnot/group.hpp"

using namespace carnot;

namespace {

Point random_point(const GroupSpec& g, std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Point p(g.m(), g.k());
  for (int i = 0; i < g.dim(); ++i) p[i] = u(rng);
  return p;
}

std::vector<GroupSpec> all_groups() {
  return {GroupSpec::abelian(3), GroupSpec::heisenberg(1), GroupSpec::heisenberg(2),
          GroupSpec::htype(quaternionic_j_maps())};
}

double max_diff(const Point& a, const Point& b) {
  double d = 0.0;
  for (int i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(Group, HomogeneousDimension) {
  EXPECT_EQ(GroupSpec::abelian(3).homogeneous_dimension(), 3);
  EXPECT_EQ(GroupSpec::heisenberg(1).homogeneous_dimension(), 4);
  EXPECT_EQ(GroupSpec::heisenberg(2).homogeneous_dimension(), 6);
  EXPECT_EQ(GroupSpec::htype(quaternionic_j_maps()).homogeneous_dimension(), 10);
}

TEST(Group, HeisenbergMultiplyExample) {
  const auto g = GroupSpec::heisenberg(1);
  // (x, y, t): z = 1 and z' = i.
  const double a[] = {1, 0, 0}, b[] = {0, 1, 0};
  const Point r = multiply(g, g.make_point(a), g.make_point(b));
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], 1.0);
  EXPECT_DOUBLE_EQ(r[2], -2.0);
}

TEST(Group, HTypeMultiplyFollowsLaw) {
  Eigen::MatrixXd j(2, 2);
  j << 0, 1, -1, 0;
  const auto g = GroupSpec::htype({j});
  const double a[] = {1, 0, 0}, b[] = {0, 1, 0};
  const Point r = multiply(g, g.make_point(a), g.make_point(b));
  // 1/2 <J v, v'> with Jv = (0, -1), v' = (0, 1).
  EXPECT_DOUBLE_EQ(r.v(0), 1.0);
  EXPECT_DOUBLE_EQ(r.v(1), 1.0);
  EXPECT_DOUBLE_EQ(r.z(0), -0.5);
}

TEST(Group, Axioms) {
  std::mt19937_64 rng(3);
  for (const auto& g : all_groups()) {
    for (int t = 0; t < 100; ++t) {
      const Point x = random_point(g, rng), y = random_point(g, rng), w = random_point(g, rng);
      EXPECT_LT(max_diff(multiply(g, multiply(g, x, y), w), multiply(g, x, multiply(g, y, w))), 1e-12);
      EXPECT_LT(max_diff(multiply(g, x, g.zero()), x), 1e-15);
      EXPECT_LT(max_diff(multiply(g, x, inverse(g, x)), g.zero()), 1e-12);
    }
  }
}

TEST(Group, DilationIsAutomorphism) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> lam(0.1, 5.0);
  for (const auto& g : all_groups()) {
    for (int t = 0; t < 100; ++t) {
      const Point x = random_point(g, rng), y = random_point(g, rng);
      const double l = lam(rng);
      EXPECT_LT(max_diff(dilate(g, l, multiply(g, x, y)), multiply(g, dilate(g, l, x), dilate(g, l, y))), 1e-12);
      EXPECT_NEAR(homogeneous_norm(g, dilate(g, l, x)), l * homogeneous_norm(g, x),
                  1e-12 * l * homogeneous_norm(g, x));
      EXPECT_NEAR(homogeneous_norm(g, inverse(g, x)), homogeneous_norm(g, x), 1e-14);
    }
  }
  const auto h = GroupSpec::heisenberg(1);
  const double a[] = {1, 0, 1};
  const Point d = dilate(h, 2.0, h.make_point(a));
  EXPECT_DOUBLE_EQ(d[0], 2.0);
  EXPECT_DOUBLE_EQ(d[2], 4.0);
  EXPECT_THROW(dilate(h, 0.0, d), std::invalid_argument);
  EXPECT_THROW(dilate(h, -1.0, d), std::invalid_argument);
}

TEST(Group, NormExamples) {
  const auto h = GroupSpec::heisenberg(1);
  const double a[] = {0, 0, 4};
  EXPECT_DOUBLE_EQ(homogeneous_norm(h, h.make_point(a)), 2.0);
  EXPECT_EQ(homogeneous_norm(h, h.zero()), 0.0);
  const auto e = GroupSpec::abelian(3);
  const double b[] = {1, 2, 2};
  EXPECT_DOUBLE_EQ(homogeneous_norm(e, e.make_point(b)), 3.0);
}

TEST(Group, HeisenbergEmbedsInHType) {
  Eigen::MatrixXd j(2, 2);
  j << 0, 1, -1, 0;
  const auto ht = GroupSpec::htype({j});
  const auto h = GroupSpec::heisenberg(1);
  std::mt19937_64 rng(5);
  auto to_ht = [](const Point& p) {
    Point q = p;
    q.z(0) = p.z(0) / 4.0;
    return q;
  };
  for (int t = 0; t < 100; ++t) {
    const Point x = random_point(h, rng), y = random_point(h, rng);
    EXPECT_LT(max_diff(to_ht(multiply(h, x, y)), multiply(ht, to_ht(x), to_ht(y))), 1e-12);
    EXPECT_NEAR(homogeneous_norm(h, x), homogeneous_norm(ht, to_ht(x)), 1e-12);
  }
}

TEST(Group, ValidateHType) {
  Eigen::MatrixXd j(2, 2);
  j << 0, 1, -1, 0;
  auto r = validate_htype({j});
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_violation, 0.0);
  EXPECT_TRUE(validate_htype(quaternionic_j_maps()).pass);
  EXPECT_FALSE(validate_htype({Eigen::MatrixXd::Identity(2, 2)}).pass);
  EXPECT_THROW(validate_htype({Eigen::MatrixXd::Zero(2, 3)}), std::invalid_argument);
  EXPECT_THROW(validate_htype({j, Eigen::MatrixXd::Zero(4, 4)}), std::invalid_argument);
  EXPECT_THROW(GroupSpec::htype({Eigen::MatrixXd::Identity(2, 2)}), std::invalid_argument);
}

TEST(Group, DimensionMismatch) {
  const auto h = GroupSpec::heisenberg(1);
  const auto e = GroupSpec::abelian(3);
  const double a[] = {1, 0, 0};
  EXPECT_THROW(multiply(h, h.make_point(a), Point(2, 0)), std::invalid_argument);
  (void)e;
}

TEST(Group, JsonRoundTrip) {
  for (const auto& g : all_groups()) {
    nlohmann::json j = g;
    EXPECT_EQ(group_from_json(j), g) << j.dump();
  }
  const auto g = group_from_json(nlohmann::json::parse(R"({"kind":"heisenberg","n":1})"));
  EXPECT_EQ(g, GroupSpec::heisenberg(1));
  EXPECT_THROW(group_from_json(nlohmann::json::parse(R"({"kind":"bogus"})")), std::invalid_argument);
}
