#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "carnot/calculus.hpp"

namespace carnot {

/// Largest relative residual of a pointwise identity over random points
/// (random direction, dilated to log-uniform N in [0.1, 10]).
struct IdentityResult {
  std::string check;
  std::string param;
  double max_error = 0.0;
  double tolerance = 0.0;
  int points = 0;
  bool pass() const { return max_error <= tolerance; }
};

Point random_point_in_shell(const GroupSpec& g, std::uint64_t& state, double lo = 0.1, double hi = 10.0);

/// |Delta N^{2-Q}| relative to N^{-Q} |grad N|^2. Tolerance 1e-6.
IdentityResult harmonicity_check(const GroupSpec& g, int points, std::uint64_t seed);
/// Jet |grad N|^2 against |v|^2/N^2 (1 on abelian groups). Tolerance 1e-10.
IdentityResult norm_gradient_check(const GroupSpec& g, int points, std::uint64_t seed);
/// Delta N^s = s(s+Q-2) N^{s-2} |grad N|^2. Tolerance 1e-8.
IdentityResult power_laplacian_check(const GroupSpec& g, double s, int points, std::uint64_t seed);
/// Delta N^{a-2} = (Q+a-4)(a-2) N^{a-4} |grad N|^2. Tolerance 1e-8.
IdentityResult weighted_power_check(const GroupSpec& g, double alpha, int points, std::uint64_t seed);
/// Delta_inf N = 0 relative to the sum of its absolute terms. Tolerance 1e-8.
IdentityResult infinity_harmonic_check(const GroupSpec& g, int points, std::uint64_t seed);
/// grad N . grad |grad N|^gamma = 0. Tolerance 1e-8.
IdentityResult orthogonality_check(const GroupSpec& g, double gamma, int points, std::uint64_t seed);
/// Closed radial form against the jet sub-Laplacian of f(N), f(r) = log(1 + r^2). Tolerance 1e-8.
IdentityResult radial_form_check(const GroupSpec& g, int points, std::uint64_t seed);
/// Delta_p N^{(p-Q)/(p-1)} = 0 relative to the sum of absolute terms. Tolerance 1e-6.
IdentityResult p_fundamental_check(const GroupSpec& g, double p, int points, std::uint64_t seed);

}  // namespace carnot
