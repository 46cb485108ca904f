#include "carnot/inequalities.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace carnot {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds:
      return "holds";
    case Verdict::Violated:
      return "violated";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Verdict sharp_verdict(double q, double sigma, double c) {
  if (!std::isfinite(q) || !std::isfinite(sigma)) return Verdict::Inconclusive;
  if (q >= c - 3.0 * sigma) return Verdict::Holds;
  if (c - q > 5.0 * sigma) return Verdict::Violated;
  return Verdict::Inconclusive;
}

Verdict positive_verdict(double q, double sigma) {
  if (!std::isfinite(q) || !std::isfinite(sigma)) return Verdict::Inconclusive;
  if (q > 3.0 * sigma) return Verdict::Holds;
  if (q < -5.0 * sigma) return Verdict::Violated;
  return Verdict::Inconclusive;
}

double hardy_constant(int q, double alpha) {
  const double h = 0.5 * (q + alpha - 2.0);
  return h * h;
}

double rellich_constant(int q, double alpha) {
  const double a = q + alpha - 4.0, b = q - alpha;
  return a * a * b * b / 16.0;
}

namespace {

struct Sample {
  double n;      // N(x)
  double gn2;    // |grad N|^2
  const Jet2& j;
};

using SampleFn = std::function<void(const Sample&, std::span<double>)>;

Annulus support_annulus(const ScalarField& phi) {
  const Support s = phi.support();
  if (!s.bounded || !std::isfinite(s.outer)) throw std::invalid_argument("field support must be bounded");
  return {s.inner, s.outer};
}

MultiEstimate sample_field(const GroupSpec& g, const ScalarField& phi, std::size_t k, const SampleFn& fn,
                           const IntegrationConfig& cfg) {
  if (!(phi.group() == g)) throw std::invalid_argument("field belongs to a different group");
  return integrate_many(
      g,
      [&](const Point& x, std::span<double> out) {
        const double n = homogeneous_norm(g, x);
        if (n == 0.0) {
          std::fill(out.begin(), out.end(), 0.0);
          return;
        }
        const Jet2 j = phi.jet(x);
        fn(Sample{n, norm_gradient_sq(g, x), j}, out);
      },
      k, support_annulus(phi), cfg);
}

struct Propagated {
  double value;
  double sigma;
};

// Delta method: sigma^2 = grad f^T C grad f with a central-difference gradient.
Propagated propagate(const MultiEstimate& e, const std::function<double(const std::vector<double>&)>& f) {
  const std::size_t k = e.size();
  std::vector<double> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = e.value(i);
  const double value = f(v);
  std::vector<double> grad(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double h = 1e-6 * std::max({std::abs(v[i]), std::sqrt(std::max(e.cov(i, i), 0.0)), 1e-300});
    std::vector<double> p = v, m = v;
    p[i] += h;
    m[i] -= h;
    grad[i] = (f(p) - f(m)) / (2.0 * h);
  }
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) var += grad[i] * grad[j] * e.cov(i, j);
  return {value, std::sqrt(std::max(var, 0.0))};
}

void require_rhs_nonzero(const IntegralEstimate& rhs, const std::string& what) {
  if (!(std::abs(rhs.value) > 3.0 * rhs.std_error) || rhs.value == 0.0) {
    throw std::runtime_error(what + ": denominator estimate is consistent with zero; quotient undefined");
  }
}

void require_away_from_origin(const ScalarField& phi, const std::string& what) {
  if (!(phi.support().inner > 0.0)) throw std::invalid_argument(what + ": field must vanish near the origin");
}

QuotientReport base_report(const std::string& name, const GroupSpec& g, double alpha, std::string param,
                           const ScalarField& phi, const IntegrationConfig& cfg) {
  QuotientReport r;
  r.inequality = name;
  r.group = g.name();
  r.alpha = alpha;
  r.param = std::move(param);
  r.field = phi.describe();
  r.config = cfg;
  return r;
}

std::string fmt_param(const char* name, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.17g", name, v);
  return buf;
}

double sq(double x) { return x * x; }

}  // namespace

void to_json(nlohmann::json& out, const QuotientReport& r) {
  out = {{"inequality", r.inequality},
         {"group", r.group},
         {"alpha", r.alpha},
         {"param", r.param},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"quotient", r.quotient},
         {"sigma", r.sigma},
         {"verdict", to_string(r.verdict)},
         {"field", r.field},
         {"config", r.config},
         {"extras", r.extras}};
  out["sharp_constant"] = r.sharp_constant ? nlohmann::json(*r.sharp_constant) : nlohmann::json();
}

QuotientReport hardy_report(const GroupSpec& g, double alpha, double gamma, const ScalarField& phi,
                            const IntegrationConfig& cfg) {
  const int q = g.homogeneous_dimension();
  if (!(q + alpha - 2.0 > 0.0)) throw std::invalid_argument("hardy_report: needs Q + alpha - 2 > 0");
  if (gamma != 0.0 && !(gamma > -1.0)) throw std::invalid_argument("hardy_report: needs gamma > -1");
  require_away_from_origin(phi, "hardy_report");
  auto est = sample_field(
      g, phi, 2,
      [&](const Sample& s, std::span<double> out) {
        const double w = gamma == 0.0 ? 1.0 : std::pow(s.gn2, 0.5 * gamma);
        const double na = std::pow(s.n, alpha);
        out[0] = na * w * s.j.grad_sq();
        out[1] = na / (s.n * s.n) * w * s.gn2 * sq(s.j.value());
      },
      cfg);
  QuotientReport r = base_report("hardy", g, alpha, fmt_param("gamma", gamma), phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[1];
  require_rhs_nonzero(r.rhs, "hardy_report");
  const auto p = propagate(est, [](const std::vector<double>& v) { return v[0] / v[1]; });
  r.quotient = p.value;
  r.sigma = p.sigma;
  r.sharp_constant = hardy_constant(q, alpha);
  r.verdict = sharp_verdict(r.quotient, r.sigma, *r.sharp_constant);
  r.extras["gamma"] = gamma;
  return r;
}

QuotientReport rellich_report(const GroupSpec& g, double alpha, const ScalarField& phi, const IntegrationConfig& cfg) {
  const int q = g.homogeneous_dimension();
  if (!(q + alpha - 4.0 > 0.0)) throw std::invalid_argument("rellich_report: needs Q + alpha - 4 > 0");
  require_away_from_origin(phi, "rellich_report");
  auto est = sample_field(
      g, phi, 2,
      [&](const Sample& s, std::span<double> out) {
        const double na = std::pow(s.n, alpha);
        const double lap = s.j.hlap();
        if (s.gn2 == 0.0) {
          if (lap != 0.0) throw std::domain_error("rellich_report: sample hit |grad N| = 0 with nonzero Laplacian");
          out[0] = 0.0;
        } else {
          out[0] = na * lap * lap / s.gn2;
        }
        out[1] = na / sq(sq(s.n)) * s.gn2 * sq(s.j.value());
      },
      cfg);
  QuotientReport r = base_report("rellich", g, alpha, "", phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[1];
  require_rhs_nonzero(r.rhs, "rellich_report");
  const auto p = propagate(est, [](const std::vector<double>& v) { return v[0] / v[1]; });
  r.quotient = p.value;
  r.sigma = p.sigma;
  r.sharp_constant = rellich_constant(q, alpha);
  r.verdict = sharp_verdict(r.quotient, r.sigma, *r.sharp_constant);
  return r;
}

std::string to_string(UncertaintyVariant v) {
  switch (v) {
    case UncertaintyVariant::GradWeighted:
      return "grad-weighted";
    case UncertaintyVariant::NormWeighted:
      return "norm-weighted";
    case UncertaintyVariant::RellichFourMinusAlpha:
      return "rellich-4-minus-alpha";
    case UncertaintyVariant::RellichNorm:
      return "rellich-norm";
  }
  return "unknown";
}

UncertaintyVariant uncertainty_variant_from_string(const std::string& s) {
  for (auto v : {UncertaintyVariant::GradWeighted, UncertaintyVariant::NormWeighted,
                 UncertaintyVariant::RellichFourMinusAlpha, UncertaintyVariant::RellichNorm}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown uncertainty variant '" + s + "'");
}

QuotientReport uncertainty_report(const GroupSpec& g, UncertaintyVariant variant, double alpha, const ScalarField& phi,
                                  const IntegrationConfig& cfg, UncertaintyOptions opts) {
  const int q = g.homogeneous_dimension();
  if (q < 3) throw std::invalid_argument("uncertainty_report: needs Q >= 3");
  const bool rellich =
      variant == UncertaintyVariant::RellichFourMinusAlpha || variant == UncertaintyVariant::RellichNorm;
  if (rellich && !(q + alpha - 4.0 > 0.0)) throw std::invalid_argument("uncertainty_report: needs Q + alpha - 4 > 0");
  const bool grad_in_denominator =
      variant == UncertaintyVariant::GradWeighted || variant == UncertaintyVariant::RellichFourMinusAlpha;
  // Components: A (left weight), B (energy), D (right factor), E (Hardy/Rellich rhs).
  auto est = sample_field(
      g, phi, 4,
      [&](const Sample& s, std::span<double> out) {
        const double p2 = sq(s.j.value());
        const double n2 = s.n * s.n;
        if (grad_in_denominator && s.gn2 == 0.0 && p2 != 0.0) {
          throw std::domain_error("uncertainty_report: sample hit |grad N| = 0 where the weight is singular");
        }
        if (!rellich) {
          out[0] = grad_in_denominator ? (s.gn2 > 0.0 ? n2 / s.gn2 * p2 : 0.0) : n2 * s.gn2 * p2;
          out[1] = s.j.grad_sq();
          out[2] = grad_in_denominator ? p2 : s.gn2 * p2;
          out[3] = s.gn2 / n2 * p2;
        } else {
          const double na = std::pow(s.n, alpha);
          const double lap = s.j.hlap();
          if (s.gn2 == 0.0 && lap != 0.0) throw std::domain_error("uncertainty_report: |grad N| = 0 sample");
          const double w = std::pow(s.n, 4.0 - alpha);
          out[0] = grad_in_denominator ? (s.gn2 > 0.0 ? w / s.gn2 * p2 : 0.0) : w * s.gn2 * p2;
          out[1] = s.gn2 > 0.0 ? na * lap * lap / s.gn2 : 0.0;
          out[2] = grad_in_denominator ? p2 : s.gn2 * p2;
          out[3] = na / sq(n2) * s.gn2 * p2;
        }
      },
      cfg);
  QuotientReport r = base_report("uncertainty", g, alpha, "variant=" + to_string(variant), phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[2];
  require_rhs_nonzero(r.rhs, "uncertainty_report");
  require_rhs_nonzero(est.components[3], "uncertainty_report");
  const auto p = propagate(est, [](const std::vector<double>& v) { return v[0] * v[1] / (v[2] * v[2]); });
  const auto implied = propagate(est, [](const std::vector<double>& v) { return v[1] / v[3]; });
  // Cauchy-Schwarz gives q - implied >= 0 sample by sample of the integrals.
  const auto slack =
      propagate(est, [](const std::vector<double>& v) { return v[0] * v[1] / (v[2] * v[2]) - v[1] / v[3]; });
  r.quotient = p.value;
  r.sigma = p.sigma;
  if (rellich) {
    r.sharp_constant = rellich_constant(q, alpha);
  } else {
    r.sharp_constant = opts.gaussian_constant ? sq(0.5 * q) : hardy_constant(q, 0.0);
  }
  r.verdict = sharp_verdict(r.quotient, r.sigma, *r.sharp_constant);
  r.extras["variant"] = to_string(variant);
  r.extras["energy"] = est.components[1];
  r.extras["implied_bound"] = implied.value;
  r.extras["implied_bound_sigma"] = implied.sigma;
  r.extras["implied_slack"] = slack.value;
  r.extras["implied_slack_sigma"] = slack.sigma;
  r.extras["ratio_to_constant"] = r.quotient / *r.sharp_constant;
  r.extras["gaussian_constant"] = opts.gaussian_constant;
  return r;
}

QuotientReport ckn_report(const GroupSpec& g, double s, double alpha, const ScalarField& phi,
                          const IntegrationConfig& cfg) {
  const int q = g.homogeneous_dimension();
  if (q < 3) throw std::invalid_argument("ckn_report: needs Q >= 3");
  if (!(s >= 0.0 && s <= 2.0)) throw std::invalid_argument("ckn_report: s must lie in [0, 2]");
  if (!(alpha > 2.0 - q && alpha < q)) throw std::invalid_argument("ckn_report: alpha must lie in (2 - Q, Q)");
  const double expo = 2.0 * (q - s) / (q - 2.0);
  const double outer = (q - 2.0) / (q - s);
  auto est = sample_field(
      g, phi, 2,
      [&](const Sample& x, std::span<double> out) {
        const double na = std::pow(x.n, alpha);
        out[0] = na * x.j.grad_sq();
        const double a = std::abs(x.j.value());
        out[1] = a == 0.0 ? 0.0 : na * std::pow(x.gn2, 0.5 * s) * std::pow(x.n, -s) * std::pow(a, expo);
      },
      cfg);
  QuotientReport r = base_report("ckn", g, alpha, fmt_param("s", s), phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[1];
  require_rhs_nonzero(r.rhs, "ckn_report");
  const auto p = propagate(est, [outer](const std::vector<double>& v) { return v[0] / std::pow(v[1], outer); });
  r.quotient = p.value;
  r.sigma = p.sigma;
  r.verdict = positive_verdict(r.quotient, r.sigma);
  r.extras["exponent"] = expo;
  r.extras["outer_power"] = outer;
  return r;
}

QuotientReport rellich_sobolev_report(const GroupSpec& g, double s, const ScalarField& phi,
                                      const IntegrationConfig& cfg) {
  const int q = g.homogeneous_dimension();
  if (q <= 4) throw std::invalid_argument("rellich_sobolev_report: needs Q > 4");
  if (!(s >= 0.0 && s <= 2.0)) throw std::invalid_argument("rellich_sobolev_report: s must lie in [0, 2]");
  const double expo = 2.0 * (q - 2.0 * s) / (q - 4.0);
  const double outer = (q - 4.0) / (q - 2.0 * s);
  auto est = sample_field(
      g, phi, 2,
      [&](const Sample& x, std::span<double> out) {
        const double lap = x.j.hlap();
        const double a = std::abs(x.j.value());
        if (x.gn2 == 0.0) {
          if (lap != 0.0 || (s < 1.0 && a != 0.0)) {
            throw std::domain_error("rellich_sobolev_report: sample hit |grad N| = 0");
          }
          out[0] = 0.0;
          out[1] = 0.0;
          return;
        }
        out[0] = lap * lap / x.gn2;
        out[1] = a == 0.0 ? 0.0 : std::pow(x.gn2, s - 1.0) * std::pow(x.n, -2.0 * s) * std::pow(a, expo);
      },
      cfg);
  QuotientReport r = base_report("rellich-sobolev", g, 0.0, fmt_param("s", s), phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[1];
  require_rhs_nonzero(r.rhs, "rellich_sobolev_report");
  const auto p = propagate(est, [outer](const std::vector<double>& v) { return v[0] / std::pow(v[1], outer); });
  r.quotient = p.value;
  r.sigma = p.sigma;
  r.verdict = positive_verdict(r.quotient, r.sigma);
  r.extras["exponent"] = expo;
  r.extras["outer_power"] = outer;
  return r;
}

QuotientReport improved_hardy_report(const GroupSpec& g, double alpha, double ball_radius, const ScalarField& phi,
                                     const IntegrationConfig& cfg) {
  const int q = g.homogeneous_dimension();
  if (!(alpha > 2.0 - q && alpha < 2.0)) throw std::invalid_argument("improved_hardy_report: alpha outside (2-Q, 2)");
  require_away_from_origin(phi, "improved_hardy_report");
  if (!(phi.support().outer <= ball_radius)) {
    throw std::invalid_argument("improved_hardy_report: field support exceeds the ball");
  }
  const double c = hardy_constant(q, alpha);
  auto est = sample_field(
      g, phi, 3,
      [&](const Sample& x, std::span<double> out) {
        const double na = std::pow(x.n, alpha);
        const double p2 = sq(x.j.value());
        out[0] = na * x.j.grad_sq();
        out[1] = na / (x.n * x.n) * x.gn2 * p2;
        out[2] = p2;
      },
      cfg);
  QuotientReport r = base_report("improved-hardy", g, alpha, fmt_param("r", ball_radius), phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[2];
  require_rhs_nonzero(r.rhs, "improved_hardy_report");
  const auto p = propagate(est, [c](const std::vector<double>& v) { return (v[0] - c * v[1]) / v[2]; });
  r.quotient = p.value;
  r.sigma = p.sigma;
  r.verdict = positive_verdict(r.quotient, r.sigma);
  r.extras["hardy_constant"] = c;
  r.extras["hardy_rhs"] = est.components[1];
  r.extras["ball_radius"] = ball_radius;
  r.extras["scale_free_gap"] = r.quotient * std::pow(ball_radius, 2.0 - alpha);
  return r;
}

QuotientReport gradient_remainder_report(const GroupSpec& g, double qexp, double domain_radius,
                                         const ScalarField& phi, const IntegrationConfig& cfg) {
  const int q = g.homogeneous_dimension();
  if (!(qexp > 1.0 && qexp < 2.0)) throw std::invalid_argument("gradient_remainder_report: q must lie in (1, 2)");
  if (q < 3) throw std::invalid_argument("gradient_remainder_report: needs Q >= 3");
  require_away_from_origin(phi, "gradient_remainder_report");
  if (!(phi.support().outer <= domain_radius)) {
    throw std::invalid_argument("gradient_remainder_report: field support exceeds the domain");
  }
  const double c = hardy_constant(q, 0.0);
  auto est = sample_field(
      g, phi, 4,
      [&](const Sample& x, std::span<double> out) {
        const double g2 = x.j.grad_sq();
        out[0] = g2;
        out[1] = x.gn2 / (x.n * x.n) * sq(x.j.value());
        out[2] = std::pow(g2, 0.5 * qexp);
        out[3] = 1.0;
      },
      cfg);
  QuotientReport r = base_report("gradient-remainder", g, 0.0, fmt_param("q", qexp), phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[2];
  require_rhs_nonzero(r.rhs, "gradient_remainder_report");
  const auto p =
      propagate(est, [c, qexp](const std::vector<double>& v) { return (v[0] - c * v[1]) / std::pow(v[2], 2.0 / qexp); });
  const auto holder = propagate(est, [qexp](const std::vector<double>& v) {
    return std::pow(v[3], (2.0 - qexp) / qexp) * v[0] - std::pow(v[2], 2.0 / qexp);
  });
  r.quotient = p.value;
  r.sigma = p.sigma;
  r.verdict = positive_verdict(r.quotient, r.sigma);
  r.extras["gap"] = est.value(0) - c * est.value(1);
  r.extras["support_volume"] = est.components[3];
  r.extras["holder_slack"] = holder.value;
  r.extras["holder_sigma"] = holder.sigma;
  r.extras["holder_ok"] = holder.value >= -3.0 * holder.sigma;
  r.extras["domain_radius"] = domain_radius;
  return r;
}

QuotientReport interpolation_report(const GroupSpec& g, double qexp, const ScalarField& phi,
                                    const IntegrationConfig& cfg) {
  const int q = g.homogeneous_dimension();
  if (!(qexp > 1.0 && qexp < 2.0)) throw std::invalid_argument("interpolation_report: q must lie in (1, 2)");
  if (q < 3) throw std::invalid_argument("interpolation_report: needs Q >= 3");
  require_away_from_origin(phi, "interpolation_report");
  const double pexp = qexp / (qexp - 1.0);
  const double c = hardy_constant(q, 0.0);
  auto est = sample_field(
      g, phi, 4,
      [&](const Sample& x, std::span<double> out) {
        const double p2 = sq(x.j.value());
        out[0] = x.j.grad_sq();
        out[1] = x.gn2 / (x.n * x.n) * p2;
        out[2] = p2 == 0.0 ? 0.0 : std::pow(x.n * x.n * x.gn2 * p2, 0.5 * pexp);
        out[3] = x.gn2 * p2;
      },
      cfg);
  QuotientReport r = base_report("interpolation", g, 0.0, fmt_param("q", qexp), phi, cfg);
  r.lhs = est.components[0];
  r.rhs = est.components[3];
  require_rhs_nonzero(r.rhs, "interpolation_report");
  const auto p = propagate(est, [c, pexp](const std::vector<double>& v) {
    return std::sqrt(std::max(v[0] - c * v[1], 0.0)) * std::pow(v[2], 1.0 / pexp) / v[3];
  });
  const auto gap = propagate(est, [c](const std::vector<double>& v) { return v[0] - c * v[1]; });
  r.quotient = p.value;
  r.sigma = p.sigma;
  r.verdict = positive_verdict(gap.value, gap.sigma) == Verdict::Violated ? Verdict::Violated
                                                                           : positive_verdict(r.quotient, r.sigma);
  r.extras["p"] = pexp;
  r.extras["gap"] = gap.value;
  r.extras["gap_sigma"] = gap.sigma;
  return r;
}

double elementary_inequality_constant(double q, int dim, int pairs, std::uint64_t seed) {
  if (!(q > 1.0 && q < 2.0)) throw std::invalid_argument("elementary_inequality_constant: q must lie in (1, 2)");
  if (dim < 1 || pairs < 1) throw std::invalid_argument("elementary_inequality_constant: bad sizes");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> logscale(-6.0, 6.0);
  double best = 0.0;
  std::vector<double> a(dim), b(dim);
  for (int t = 0; t < pairs; ++t) {
    const double sa = std::exp(logscale(rng));
    double na = 0.0, nb = 0.0, ns = 0.0, dot = 0.0;
    for (int i = 0; i < dim; ++i) {
      a[i] = sa * n01(rng);
      b[i] = n01(rng);
      na += a[i] * a[i];
      nb += b[i] * b[i];
      dot += a[i] * b[i];
      ns += (a[i] + b[i]) * (a[i] + b[i]);
    }
    if (na == 0.0 || nb == 0.0) continue;
    na = std::sqrt(na);
    const double num = std::pow(ns, 0.5 * q) - std::pow(na, q) - q * std::pow(na, q - 2.0) * dot;
    best = std::max(best, num / std::pow(nb, 0.5 * q));
  }
  return best;
}

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 2 || x.size() != y.size()) throw std::invalid_argument("linear_fit: need at least two points");
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[i];
    b(i) = y[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  const double res = std::sqrt((a * c - b).squaredNorm() / static_cast<double>(n));
  return {c(0), res};
}

FitResult rational_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < 3 || x.size() != y.size()) throw std::invalid_argument("rational_fit: need at least three points");
  // y (1 + d x) = c0 + c1 x  ->  y = c0 + c1 x - d x y
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[i];
    a(i, 2) = -x[i] * y[i];
    b(i) = y[i];
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ss += sq((c(0) + c(1) * x[i]) / (1.0 + c(2) * x[i]) - y[i]);
  return {c(0), std::sqrt(ss / static_cast<double>(n))};
}

void to_json(nlohmann::json& out, const SweepResult& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) pts.push_back({{"eps", p.eps}, {"quotient", p.quotient}, {"sigma", p.sigma}});
  out = {{"inequality", r.inequality == SweepInequality::Hardy ? "hardy" : "rellich"},
         {"group", r.group},
         {"alpha", r.alpha},
         {"gamma", r.gamma},
         {"sharp_constant", r.sharp_constant},
         {"points", pts},
         {"limit", r.limit},
         {"limit_sigma", r.limit_sigma},
         {"residual", r.residual},
         {"linear_limit", r.linear_limit},
         {"linear_residual", r.linear_residual},
         {"monotone", r.monotone},
         {"config", r.config}};
}

SweepResult sharpness_sweep(const GroupSpec& g, SweepInequality inequality, double alpha, double gamma,
                            const std::vector<double>& eps, const IntegrationConfig& cfg, SweepOptions opts) {
  if (eps.size() < 3) throw std::invalid_argument("sharpness_sweep: need at least three eps values");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw std::invalid_argument("sharpness_sweep: eps must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw std::invalid_argument("sharpness_sweep: eps must strictly decrease");
  }
  const int q = g.homogeneous_dimension();
  SweepResult res;
  res.inequality = inequality;
  res.group = g.name();
  res.alpha = alpha;
  res.gamma = gamma;
  res.sharp_constant = inequality == SweepInequality::Hardy ? hardy_constant(q, alpha) : rellich_constant(q, alpha);
  IntegrationConfig base = cfg;
  if (!(base.max_shell_ratio > 1.0)) base.max_shell_ratio = opts.shell_ratio;
  res.config = base;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const SweepSchedule s = sweep_schedule(eps[i]);
    IntegrationConfig c = base;
    c.seed = detail::splitmix64(base.seed + 0x100 * (i + 1));
    QuotientReport r;
    if (inequality == SweepInequality::Hardy) {
      const auto f = make_hardy_extremizer(g, alpha, eps[i], s.delta, s.R, s.r0);
      r = hardy_report(g, alpha, gamma, *f, c);
    } else {
      const auto f = make_rellich_extremizer(g, alpha, eps[i], s.delta, s.R, s.r0, opts.rellich_inner);
      r = rellich_report(g, alpha, *f, c);
    }
    res.points.push_back({eps[i], r.quotient, r.sigma});
  }
  for (std::size_t i = 1; i < res.points.size(); ++i) {
    const auto& a = res.points[i - 1];
    const auto& b = res.points[i];
    if (b.quotient > a.quotient + 3.0 * std::hypot(a.sigma, b.sigma)) {
      res.monotone = false;
      throw std::runtime_error("sharpness_sweep: quotient increased from eps=" + std::to_string(a.eps) +
                               " to eps=" + std::to_string(b.eps) + " beyond 3 sigma");
    }
  }
  std::vector<double> xs, ys;
  for (const auto& p : res.points) {
    xs.push_back(p.eps);
    ys.push_back(p.quotient);
  }
  const FitResult rat = rational_fit(xs, ys);
  const FitResult lin = linear_fit(xs, ys);
  res.limit = rat.c0;
  res.residual = rat.residual;
  res.linear_limit = lin.c0;
  res.linear_residual = lin.residual;
  double var = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double h = 1e-6 * std::max(std::abs(ys[i]), 1e-12);
    std::vector<double> p = ys, m = ys;
    p[i] += h;
    m[i] -= h;
    const double d = (rational_fit(xs, p).c0 - rational_fit(xs, m).c0) / (2.0 * h);
    var += sq(d * res.points[i].sigma);
  }
  res.limit_sigma = std::sqrt(var);
  return res;
}

}  // namespace carnot
