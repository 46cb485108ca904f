#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/quadrature.hpp"
#include "carnot/test_functions.hpp"

namespace carnot {

enum class Verdict { Holds, Violated, Inconclusive };

std::string to_string(Verdict v);

/// Sharp constant: holds iff q >= C - 3 sigma; violated iff q < C - 3 sigma and C - q > 5 sigma.
Verdict sharp_verdict(double quotient, double sigma, double constant);
/// Existential (strictly positive) constant: holds iff q > 3 sigma; violated iff q < -5 sigma.
Verdict positive_verdict(double quotient, double sigma);

struct QuotientReport {
  std::string inequality;
  std::string group;
  double alpha = 0.0;
  /// Secondary parameter echo, e.g. "gamma=2" or "s=1".
  std::string param;
  IntegralEstimate lhs;
  IntegralEstimate rhs;
  double quotient = 0.0;
  /// Combined 1-sigma uncertainty of the quotient (delta method over shared samples).
  double sigma = 0.0;
  /// Absent for existential constants.
  std::optional<double> sharp_constant;
  Verdict verdict = Verdict::Inconclusive;
  nlohmann::json field;
  IntegrationConfig config;
  /// Report-specific diagnostics (implied bounds, gaps, Holder slack, ...).
  nlohmann::json extras = nlohmann::json::object();
};

void to_json(nlohmann::json& out, const QuotientReport& r);

double hardy_constant(int q, double alpha);
double rellich_constant(int q, double alpha);

/// lhs = int N^a |grad N|^g |grad phi|^2, rhs = int N^{a-2} |grad N|^{g+2} phi^2.
QuotientReport hardy_report(const GroupSpec& g, double alpha, double gamma, const ScalarField& phi,
                            const IntegrationConfig& cfg);

/// lhs = int N^a |Delta phi|^2 / |grad N|^2, rhs = int N^{a-4} |grad N|^2 phi^2.
/// Throws std::domain_error if a sample hits |grad N| = 0 with a nonzero Laplacian.
QuotientReport rellich_report(const GroupSpec& g, double alpha, const ScalarField& phi, const IntegrationConfig& cfg);

enum class UncertaintyVariant { GradWeighted, NormWeighted, RellichFourMinusAlpha, RellichNorm };
std::string to_string(UncertaintyVariant v);
UncertaintyVariant uncertainty_variant_from_string(const std::string& s);

struct UncertaintyOptions {
  /// Replace ((Q-2)/2)^2 by (Q/2)^2 (the Gaussian equality case).
  bool gaussian_constant = false;
};

/// Product form A B / D^2. extras["implied_bound"] holds the Hardy (or Rellich)
/// quotient from the same samples, which bounds the product from below.
QuotientReport uncertainty_report(const GroupSpec& g, UncertaintyVariant variant, double alpha, const ScalarField& phi,
                                  const IntegrationConfig& cfg, UncertaintyOptions opts = {});

/// int N^a |grad phi|^2 / (int N^a (|grad N|/N)^s |phi|^{2(Q-s)/(Q-2)})^{(Q-2)/(Q-s)}.
QuotientReport ckn_report(const GroupSpec& g, double s, double alpha, const ScalarField& phi,
                          const IntegrationConfig& cfg);

/// int |Delta phi|^2/|grad N|^2 / (int |grad N|^{2s-2} N^{-2s} |phi|^{2(Q-2s)/(Q-4)})^{(Q-4)/(Q-2s)}.
QuotientReport rellich_sobolev_report(const GroupSpec& g, double s, const ScalarField& phi,
                                      const IntegrationConfig& cfg);

/// (int N^a |grad phi|^2 - C int N^{a-2}|grad N|^2 phi^2) / int phi^2 for phi supported in {N < r}.
QuotientReport improved_hardy_report(const GroupSpec& g, double alpha, double ball_radius, const ScalarField& phi,
                                     const IntegrationConfig& cfg);

/// (int |grad phi|^2 - ((Q-2)/2)^2 int |grad N|^2/N^2 phi^2) / (int |grad phi|^q)^{2/q}.
/// extras: Holder slack |Omega|^{(2-q)/q} int |grad phi|^2 - (int |grad phi|^q)^{2/q} over the support annulus.
QuotientReport gradient_remainder_report(const GroupSpec& g, double q, double domain_radius, const ScalarField& phi,
                                         const IntegrationConfig& cfg);

/// gap^{1/2} (int N^p |grad N|^p |phi|^p)^{1/p} / int |grad N|^2 phi^2 with p = q/(q-1).
QuotientReport interpolation_report(const GroupSpec& g, double q, const ScalarField& phi,
                                    const IntegrationConfig& cfg);

/// Largest sampled (|w1+w2|^q - |w1|^q - q|w1|^{q-2}<w1,w2>) / |w2|^q over random pairs in R^dim.
double elementary_inequality_constant(double q, int dim, int pairs, std::uint64_t seed);

enum class SweepInequality { Hardy, Rellich };

struct SweepPoint {
  double eps = 0.0;
  double quotient = 0.0;
  double sigma = 0.0;
};

struct SweepResult {
  SweepInequality inequality = SweepInequality::Hardy;
  std::string group;
  double alpha = 0.0;
  double gamma = 0.0;
  double sharp_constant = 0.0;
  std::vector<SweepPoint> points;
  /// Limit of the rational fit q = (c0 + c1 eps)/(1 + d1 eps).
  double limit = 0.0;
  double limit_sigma = 0.0;
  /// RMS misfit of the rational model.
  double residual = 0.0;
  /// Linear fit q = c0 + c1 eps, kept as a diagnostic.
  double linear_limit = 0.0;
  double linear_residual = 0.0;
  bool monotone = true;
  IntegrationConfig config;
};

void to_json(nlohmann::json& out, const SweepResult& r);

struct SweepOptions {
  RellichInner rellich_inner = RellichInner::Matched;
  /// Used when the config leaves max_shell_ratio unset.
  double shell_ratio = 1.3;
};

/// Quotients of the mollified extremizer family along eps, extrapolated to eps = 0.
/// Throws std::invalid_argument unless eps is strictly decreasing and positive, and
/// std::runtime_error if the sequence increases by more than 3 sigma.
SweepResult sharpness_sweep(const GroupSpec& g, SweepInequality inequality, double alpha, double gamma,
                            const std::vector<double>& eps, const IntegrationConfig& cfg, SweepOptions opts = {});

/// Least-squares fits used by the sweep; exposed for testing.
struct FitResult {
  double c0 = 0.0;
  double residual = 0.0;
};
FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y);
FitResult rational_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace carnot
