#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/group.hpp"

namespace carnot {

enum class QuadratureMethod { StratifiedMC, TensorGrid };

struct IntegrationConfig {
  QuadratureMethod method = QuadratureMethod::StratifiedMC;
  std::size_t samples_per_shell = 200000;
  int shells = 32;
  /// When positive, shells are added until consecutive radii differ by at most this ratio.
  double max_shell_ratio = 0.0;
  /// For annuli reaching the origin: the innermost shell is the ball of radius core_fraction * outer.
  double core_fraction = 1e-2;
  std::uint64_t seed = 1;
  double target_rel_error = 1e-2;
  /// Nodes per axis for the tensor grid.
  int grid_nodes = 64;
  /// 0 = hardware concurrency.
  int threads = 0;
};

/// Default samples per shell for a group: 2e5 up to dimension 5, 1e6 above.
std::size_t default_samples_per_shell(const GroupSpec& g);

/// Norm annulus {inner <= N <= outer}.
struct Annulus {
  double inner = 0.0;
  double outer = 1.0;
};

struct ShellStats {
  double inner = 0.0;
  double outer = 0.0;
  double box_volume = 0.0;
  std::size_t drawn = 0;
  std::size_t accepted = 0;
  double acceptance() const { return drawn ? static_cast<double>(accepted) / static_cast<double>(drawn) : 0.0; }
};

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  /// Per-shell contributions (empty for the tensor grid).
  std::vector<double> shell_values;
  bool meets_target = true;
};

/// Joint estimate of several integrals computed from the same samples.
struct MultiEstimate {
  std::vector<IntegralEstimate> components;
  /// Row-major covariance of the component estimates.
  std::vector<double> covariance;
  std::vector<ShellStats> shells;

  std::size_t size() const { return components.size(); }
  double value(std::size_t i) const { return components[i].value; }
  double cov(std::size_t i, std::size_t j) const { return covariance[i * components.size() + j]; }
};

using Integrand = std::function<double(const Point&)>;
/// Writes one value per component into `out`.
using VectorIntegrand = std::function<void(const Point&, std::span<double> out)>;

/// Shell boundaries used for an annulus under a config.
std::vector<double> shell_radii(const Annulus& support, const IntegrationConfig& cfg);

/// Integral of f over the annulus against Haar (Lebesgue) measure.
/// Stratified MC: uniform draws in the coordinate box enclosing each shell,
/// rejected outside the shell; per-shell mean x box volume, summed.
/// Throws std::runtime_error on an empty shell or a non-finite integrand value.
IntegralEstimate integrate(const GroupSpec& g, const Integrand& f, const Annulus& support,
                           const IntegrationConfig& cfg);

MultiEstimate integrate_many(const GroupSpec& g, const VectorIntegrand& f, std::size_t components,
                             const Annulus& support, const IntegrationConfig& cfg);

/// Whether the tensor-grid method is available (abelian n <= 3, step-2 with m = 2, k = 1).
bool tensor_grid_supported(const GroupSpec& g);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Draws a point uniformly from the unit ball {N < 1} by rejection from its box.
template <class Rng>
Point uniform_in_unit_ball(const GroupSpec& g, Rng& rng);

struct A2Options {
  int balls = 200;
  std::size_t samples_per_ball = 4000;
  /// Ball centres are drawn with N(centre)/radius uniform in [0, max_center_ratio].
  double max_center_ratio = 3.0;
  std::uint64_t seed = 1;
  bool allow_inadmissible = false;
};

/// max over sampled balls B of (avg_B N^alpha)(avg_B N^{-alpha}).
/// Throws std::invalid_argument unless 2 - Q < alpha < Q (see A2Options).
double muckenhoupt_a2_estimate(const GroupSpec& g, double alpha, const A2Options& opts);

std::string to_string(QuadratureMethod m);
void to_json(nlohmann::json& out, const IntegrationConfig& cfg);
IntegrationConfig config_from_json(const nlohmann::json& in, IntegrationConfig base = {});
void to_json(nlohmann::json& out, const IntegralEstimate& e);

namespace detail {
std::uint64_t splitmix64(std::uint64_t x);
/// Uniform double in [0, 1) from 53 random bits.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }
}  // namespace detail

}  // namespace carnot

#include "carnot/quadrature_impl.hpp"
