#include <gtest/gtest.h>

#include <random>

#include "carnot/calculus.hpp"
#include "fd_oracle.hpp"

using namespace carnot;

namespace {

std::vector<GroupSpec> groups() {
  return {GroupSpec::abelian(3), GroupSpec::heisenberg(1), GroupSpec::heisenberg(2),
          GroupSpec::htype(quaternionic_j_maps())};
}

// Random direction dilated to log-uniform norm in [lo, hi].
Point random_point(const GroupSpec& g, std::mt19937_64& rng, double lo = 0.1, double hi = 10.0) {
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Point p(g.m(), g.k());
  for (int i = 0; i < g.dim(); ++i) p[i] = n01(rng);
  return dilate(g, std::exp(u(rng)) / homogeneous_norm(g, p), p);
}

FieldPtr expr_field(const GroupSpec& g, FunctionField::Expr e, std::string label) {
  return std::make_shared<FunctionField>(g, std::move(e), Support{0.0, 0.0, false}, std::move(label));
}

std::vector<FieldPtr> smooth_battery(const GroupSpec& g) {
  std::vector<FieldPtr> out;
  out.push_back(expr_field(
      g,
      [](const JetSeeds& s) {
        Jet2 e = s.horizontal_norm_sq() * -0.3;
        if (s.group().k() > 0) e -= s.vertical_norm_sq() * 0.2;
        return exp(e) * (s.v(0) + 1.0);
      },
      "gaussian-like"));
  out.push_back(expr_field(
      g,
      [](const JetSeeds& s) {
        Jet2 r = s.v(0) * s.v(0) * s.v(0) - s.v(1) * 2.0;
        if (s.group().k() > 0) r += s.z(0) * s.v(1) + s.z(s.group().k() - 1) * s.z(0);
        return r;
      },
      "polynomial"));
  out.push_back(expr_field(
      g, [](const JetSeeds& s) { return pow(s.norm(), 1.7) / (s.v(1) * s.v(1) + 2.0); }, "norm-quotient"));
  out.push_back(expr_field(
      g, [](const JetSeeds& s) { return sqrt(s.horizontal_norm_sq() + 1.0) * pow(s.norm(), -0.5); }, "mixed"));
  return out;
}

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

}  // namespace

TEST(Jet, ConstantHasZeroDerivatives) {
  const auto g = GroupSpec::heisenberg(1);
  const double c[] = {0.3, -0.2, 0.7};
  const JetSeeds s(g, g.make_point(c));
  const Jet2 k = s.constant(3.0);
  EXPECT_FALSE(k.is_zero());
  EXPECT_EQ(k.grad_sq(), 0.0);
  EXPECT_EQ(k.hlap(), 0.0);
}

TEST(Jet, ProductAndQuotientRules) {
  const auto g = GroupSpec::abelian(2);
  const double c[] = {0.5, 1.5};
  const JetSeeds s(g, g.make_point(c));
  const Jet2 x = s.v(0), y = s.v(1);
  const Jet2 q = (x * x) / y;  // x^2 / y
  EXPECT_NEAR(q.value(), 0.25 / 1.5, 1e-15);
  EXPECT_NEAR(q.grad(0), 2 * 0.5 / 1.5, 1e-15);
  EXPECT_NEAR(q.grad(1), -0.25 / 2.25, 1e-15);
  EXPECT_NEAR(q.hess(0, 0), 2 / 1.5, 1e-14);
  EXPECT_NEAR(q.hess(0, 1), -2 * 0.5 / 2.25, 1e-14);
  EXPECT_NEAR(q.hess(1, 1), 2 * 0.25 / (1.5 * 1.5 * 1.5), 1e-14);
}

TEST(Calculus, HeisenbergGradientOfT) {
  const auto g = GroupSpec::heisenberg(1);
  const auto f = expr_field(g, [](const JetSeeds& s) { return s.z(0); }, "t");
  const double c[] = {1, 2, 0};
  const auto gr = horizontal_gradient(*f, g.make_point(c));
  EXPECT_DOUBLE_EQ(gr[0], 4.0);
  EXPECT_DOUBLE_EQ(gr[1], -2.0);
}

TEST(Calculus, FrameAtOriginIsCoordinateBasis) {
  for (const auto& g : groups()) {
    const Eigen::MatrixXd a = HorizontalFrame(g).coefficients(g.zero());
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.m(); ++j) EXPECT_EQ(a(i, j), i == j ? 1.0 : 0.0);
  }
}

TEST(Calculus, FrameMatchesHeisenbergVectorFields) {
  const auto g = GroupSpec::heisenberg(1);
  const double c[] = {0.7, -1.3, 2.0};
  const Eigen::MatrixXd a = HorizontalFrame(g).coefficients(g.make_point(c));
  EXPECT_DOUBLE_EQ(a(2, 0), 2 * -1.3);  // X = d_x + 2y d_t
  EXPECT_DOUBLE_EQ(a(2, 1), -2 * 0.7);  // Y = d_y - 2x d_t
}

TEST(Calculus, JetsMatchFiniteDifferenceOracle) {
  std::mt19937_64 rng(11);
  for (const auto& g : groups()) {
    for (const auto& f : smooth_battery(g)) {
      fd::ValueFn val = [&](const Point& p) { return f->value(p); };
      for (int t = 0; t < 20; ++t) {
        const Point x = random_point(g, rng, 0.3, 1.5);
        const Jet2 j = f->jet(x);
        const auto fd = fd::fd_gradient(g, val, x);
        double gscale = 1e-3;
        for (int i = 0; i < g.m(); ++i) gscale = std::max(gscale, std::abs(j.grad(i)));
        for (int i = 0; i < g.m(); ++i)
          EXPECT_LT(rel(j.grad(i), fd[i], gscale), 1e-6) << g.name() << " " << f->describe().dump() << " i=" << i;
        double hscale = 1e-3;
        for (int i = 0; i < g.m(); ++i)
          for (int k = 0; k < g.m(); ++k) hscale = std::max(hscale, std::abs(j.hess(i, k)));
        for (int i = 0; i < g.m(); ++i)
          for (int k = 0; k < g.m(); ++k)
            EXPECT_LT(rel(j.hess(i, k), fd::fd_second(g, val, x, i, k), hscale), 1e-6)
                << g.name() << " " << f->describe().dump() << " (" << i << "," << k << ")";
        EXPECT_LT(rel(j.hlap(), fd::fd_sub_laplacian(g, val, x), hscale * g.m()), 1e-6);
      }
    }
  }
}

TEST(Calculus, NormGradientClosedForm) {
  std::mt19937_64 rng(12);
  for (const auto& g : groups()) {
    for (int t = 0; t < 1000; ++t) {
      const Point x = random_point(g, rng);
      const double closed = norm_gradient_sq(g, x);
      EXPECT_LT(rel(norm_jet(g, x).grad_sq(), closed, closed), 1e-10);
      EXPECT_NEAR(norm_gradient_sq(g, dilate(g, 3.7, x)), closed, 1e-13);
    }
  }
  const auto h = GroupSpec::heisenberg(1);
  const double c[] = {0, 0, 1};
  EXPECT_EQ(norm_gradient_sq(h, h.make_point(c)), 0.0);
  const auto e = GroupSpec::abelian(3);
  const double d[] = {0.2, -1.0, 3.0};
  EXPECT_EQ(norm_gradient_sq(e, e.make_point(d)), 1.0);
  EXPECT_THROW(norm_gradient_sq(h, h.zero()), std::domain_error);
}

TEST(Calculus, HeisenbergPowerLaplacian) {
  // Delta rho^s = s (s + Q - 2) |z|^2 rho^{s-4}
  const auto g = GroupSpec::heisenberg(1);
  std::mt19937_64 rng(13);
  for (double s : {-1.0, 0.5, 3.0}) {
    for (int t = 0; t < 200; ++t) {
      const Point x = random_point(g, rng);
      const double rho = homogeneous_norm(g, x);
      const double expect = s * (s + 2.0) * x.horizontal_norm_sq() * std::pow(rho, s - 4.0);
      const double got = radial_jet(g, power_profile(s), x).hlap();
      EXPECT_LT(rel(got, expect, std::abs(s * (s + 2.0)) * x.horizontal_norm_sq() * std::pow(rho, s - 4.0) + 1e-300),
                1e-8);
    }
  }
  const double c[] = {1.0, 0.0, 0.0};
  EXPECT_NEAR(radial_jet(g, power_profile(3.0), g.make_point(c)).hlap(), 15.0, 1e-12);
}

TEST(Calculus, FundamentalSolutionIsHarmonic) {
  std::mt19937_64 rng(14);
  for (const auto& g : groups()) {
    const int q = g.homogeneous_dimension();
    for (int t = 0; t < 500; ++t) {
      const Point x = random_point(g, rng);
      const double n = homogeneous_norm(g, x);
      const double scale = std::pow(n, -q) * norm_gradient_sq(g, x);
      const double lap = radial_jet(g, power_profile(2.0 - q), x).hlap();
      EXPECT_LT(std::abs(lap) / scale, 1e-6) << g.name();
    }
  }
}

TEST(Calculus, PLaplacianReducesAtTwo) {
  std::mt19937_64 rng(15);
  for (const auto& g : groups()) {
    for (const auto& f : smooth_battery(g)) {
      for (int t = 0; t < 25; ++t) {
        const Point x = random_point(g, rng, 0.3, 2.0);
        const double a = p_sub_laplacian(*f, x, 2.0), b = sub_laplacian(*f, x);
        EXPECT_LE(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(b)));
        // Generic formula near p = 2 is continuous.
        EXPECT_NEAR(p_sub_laplacian(f->jet(x), 2.0 + 1e-9), b, 1e-6 * std::max(1.0, std::abs(b)));
      }
    }
  }
}

TEST(Calculus, PFundamentalSolutions) {
  std::mt19937_64 rng(16);
  for (const auto& g : {GroupSpec::heisenberg(1), GroupSpec::htype(quaternionic_j_maps())}) {
    const int q = g.homogeneous_dimension();
    for (double p : {1.5, 3.0}) {
      for (int t = 0; t < 500; ++t) {
        const Point x = random_point(g, rng);
        const Jet2 j = radial_jet(g, power_profile((p - q) / (p - 1.0)), x);
        const double scale = p_sub_laplacian_scale(j, p);
        EXPECT_LE(std::abs(p_sub_laplacian(j, p)), 1e-6 * scale) << g.name() << " p=" << p;
      }
    }
  }
  const auto e = GroupSpec::abelian(3);
  for (int t = 0; t < 100; ++t) {
    const Point x = random_point(e, rng);
    const Jet2 j = radial_jet(e, power_profile(-1.0), x);
    EXPECT_LE(std::abs(p_sub_laplacian(j, 2.0)), 1e-12 * p_sub_laplacian_scale(j, 2.0));
  }
}

TEST(Calculus, PLaplacianErrors) {
  const auto g = GroupSpec::heisenberg(1);
  const auto f = expr_field(g, [](const JetSeeds& s) { return s.constant(1.0); }, "const");
  const double c[] = {1, 0, 0};
  EXPECT_THROW(p_sub_laplacian(*f, g.make_point(c), 1.5), std::domain_error);
  EXPECT_THROW(p_sub_laplacian(*f, g.make_point(c), 1.0), std::invalid_argument);
  EXPECT_EQ(p_sub_laplacian(*f, g.make_point(c), 3.0), 0.0);
}

TEST(Calculus, InfinityHarmonicNorm) {
  std::mt19937_64 rng(17);
  for (const auto& g : groups()) {
    for (int t = 0; t < 1000; ++t) {
      const Point x = random_point(g, rng);
      const Jet2 n = norm_jet(g, x);
      double scale = 0.0;
      for (int i = 0; i < g.m(); ++i)
        for (int k = 0; k < g.m(); ++k) scale += std::abs(n.grad(i) * n.grad(k) * n.hess(i, k));
      EXPECT_LE(std::abs(n.hess_quadratic()), 1e-8 * std::max(scale, 1e-300)) << g.name();
    }
  }
  const auto e = GroupSpec::abelian(3);
  const auto lin = expr_field(e, [](const JetSeeds& s) { return s.v(0) * 2.0 - s.v(2); }, "linear");
  const double c[] = {0.3, 0.4, 0.5};
  EXPECT_EQ(infinity_sub_laplacian(*lin, e.make_point(c)), 0.0);
  EXPECT_EQ(sub_laplacian(*lin, e.make_point(c)), 0.0);
}

TEST(Calculus, RadialFormMatchesSubLaplacian) {
  std::mt19937_64 rng(18);
  const Profile prof = [](double r) {
    const double e = std::exp(-r * r);
    return ProfileValue{r * e, (1 - 2 * r * r) * e, (4 * r * r * r - 6 * r) * e};
  };
  for (const auto& g : groups()) {
    for (int t = 0; t < 200; ++t) {
      const Point x = random_point(g, rng, 0.1, 3.0);
      const double a = radial_laplacian(g, prof, x);
      const double b = radial_jet(g, prof, x).hlap();
      EXPECT_LE(std::abs(a - b), 1e-8 * std::max(std::abs(a), 1e-12)) << g.name();
    }
    const Point x = random_point(g, rng);
    EXPECT_EQ(radial_laplacian(g, [](double) { return ProfileValue{2.0, 0.0, 0.0}; }, x), 0.0);
    EXPECT_THROW(radial_laplacian(g, prof, g.zero()), std::domain_error);
  }
  const auto h = GroupSpec::heisenberg(1);
  const double c[] = {0.6, 0.2, 0.9};
  const Point x = h.make_point(c);
  const double rho = homogeneous_norm(h, x);
  EXPECT_NEAR(radial_laplacian(h, power_profile(2.0), x), 8 * x.horizontal_norm_sq() / (rho * rho), 1e-12);
}

TEST(Calculus, OrthogonalityOfNormAndGradientWeight) {
  std::mt19937_64 rng(19);
  for (const auto& g : {GroupSpec::heisenberg(1), GroupSpec::heisenberg(2), GroupSpec::htype(quaternionic_j_maps())}) {
    for (double gamma : {1.0, 2.0}) {
      for (int t = 0; t < 300; ++t) {
        const Point x = random_point(g, rng);
        const JetSeeds s(g, x);
        const Jet2 n = s.norm();
        const Jet2 w = pow(s.horizontal_norm_sq() / (n * n), 0.5 * gamma);
        double dot = 0.0, scale = 0.0;
        for (int i = 0; i < g.m(); ++i) {
          dot += n.grad(i) * w.grad(i);
          scale += std::abs(n.grad(i) * w.grad(i));
        }
        EXPECT_LE(std::abs(dot), 1e-8 * std::max(scale, 1e-300));
      }
    }
  }
}

TEST(Calculus, SupportReturnsZeroJet) {
  const auto g = GroupSpec::heisenberg(1);
  const FunctionField f(g, [](const JetSeeds& s) { return s.v(0) + 1.0; }, Support{1.0, 2.0, true}, "shell");
  const double in[] = {1.5, 0, 0}, out[] = {3, 0, 0}, core[] = {0.5, 0, 0};
  EXPECT_NE(f.value(g.make_point(in)), 0.0);
  EXPECT_TRUE(f.jet(g.make_point(out)).is_zero());
  EXPECT_TRUE(f.jet(g.make_point(core)).is_zero());
}
