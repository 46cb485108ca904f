#include "carnot/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <mutex>
#include <thread>

namespace carnot {

namespace detail {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

namespace {

int worker_count(const IntegrationConfig& cfg, std::size_t jobs) {
  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), jobs));
}

// Runs job(i) for i in [0, count); results must be written to per-index slots.
template <class Job>
void parallel_for(std::size_t count, int workers, Job&& job) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::mutex mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          failed.store(true);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct ShellResult {
  ShellStats stats;
  std::vector<double> value;  // K
  std::vector<double> cov;    // K x K
};

ShellResult sample_shell(const GroupSpec& g, const VectorIntegrand& f, std::size_t components, double inner,
                         double outer, const IntegrationConfig& cfg, std::size_t shell_index) {
  const std::size_t kk = components;
  ShellResult res;
  res.stats.inner = inner;
  res.stats.outer = outer;
  const double vext = outer;
  const double zext = g.vertical_extent() * outer * outer;
  double vol = 1.0;
  for (int i = 0; i < g.m(); ++i) vol *= 2.0 * vext;
  for (int a = 0; a < g.k(); ++a) vol *= 2.0 * zext;
  res.stats.box_volume = vol;

  std::mt19937_64 rng(detail::splitmix64(cfg.seed ^ detail::splitmix64(0x5eedULL + shell_index)));
  std::vector<double> mean(kk, 0.0), comoment(kk * kk, 0.0), y(kk, 0.0), delta(kk, 0.0);
  Point p(g.m(), g.k());
  const std::size_t draws = cfg.samples_per_shell;
  for (std::size_t n = 1; n <= draws; ++n) {
    for (int i = 0; i < g.m(); ++i) p.v(i) = vext * (2.0 * detail::unit_double(rng()) - 1.0);
    for (int a = 0; a < g.k(); ++a) p.z(a) = zext * (2.0 * detail::unit_double(rng()) - 1.0);
    const double r = homogeneous_norm(g, p);
    if (r >= inner && r < outer) {
      f(p, std::span<double>(y));
      for (std::size_t c = 0; c < kk; ++c) {
        if (!std::isfinite(y[c])) throw std::runtime_error("integrate: non-finite integrand value");
      }
      ++res.stats.accepted;
    } else {
      std::fill(y.begin(), y.end(), 0.0);
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t c = 0; c < kk; ++c) {
      delta[c] = y[c] - mean[c];
      mean[c] += delta[c] * inv;
    }
    for (std::size_t c = 0; c < kk; ++c)
      for (std::size_t d = 0; d < kk; ++d) comoment[c * kk + d] += delta[c] * (y[d] - mean[d]);
  }
  res.stats.drawn = draws;
  if (res.stats.accepted == 0) {
    throw std::runtime_error("integrate: no accepted samples in shell [" + std::to_string(inner) + ", " +
                             std::to_string(outer) + "]");
  }
  res.value.resize(kk);
  res.cov.resize(kk * kk);
  const double dn = static_cast<double>(draws);
  for (std::size_t c = 0; c < kk; ++c) res.value[c] = vol * mean[c];
  // Scale in two steps: vol^2 alone overflows for very wide shells.
  const double scale = vol / std::sqrt(dn * (dn - 1.0));
  for (std::size_t i = 0; i < kk * kk; ++i) res.cov[i] = (scale * comoment[i]) * scale;
  return res;
}

// Tensor grid in norm-polar coordinates.
MultiEstimate grid_once(const GroupSpec& g, const VectorIntegrand& f, std::size_t kk, const Annulus& s, int nodes) {
  std::vector<double> xr, wr, xa, wa;
  gauss_legendre(nodes, xr, wr);
  gauss_legendre(nodes, xa, wa);
  const double pi = std::numbers::pi;
  const double half = 0.5 * (s.outer - s.inner);
  const double mid = 0.5 * (s.outer + s.inner);
  std::vector<double> acc(kk, 0.0), y(kk, 0.0);
  std::size_t evals = 0;
  auto add = [&](const Point& p, double w) {
    f(p, std::span<double>(y));
    ++evals;
    for (std::size_t c = 0; c < kk; ++c) {
      if (!std::isfinite(y[c])) throw std::runtime_error("integrate: non-finite integrand value");
      acc[c] += w * y[c];
    }
  };
  const int nphi = 2 * nodes;
  Point p(g.m(), g.k());
  for (int ir = 0; ir < nodes; ++ir) {
    const double r = mid + half * xr[ir];
    const double w_r = half * wr[ir];
    if (g.is_abelian() && g.m() == 1) {
      p.v(0) = r;
      add(p, w_r);
      p.v(0) = -r;
      add(p, w_r);
    } else if (g.is_abelian() && g.m() == 2) {
      for (int it = 0; it < nphi; ++it) {
        const double th = 2.0 * pi * it / nphi;
        p.v(0) = r * std::cos(th);
        p.v(1) = r * std::sin(th);
        add(p, w_r * r * 2.0 * pi / nphi);
      }
    } else if (g.is_abelian() && g.m() == 3) {
      for (int iu = 0; iu < nodes; ++iu) {
        const double u = xa[iu];
        const double sn = std::sqrt(1.0 - u * u);
        for (int it = 0; it < nphi; ++it) {
          const double th = 2.0 * pi * it / nphi;
          p.v(0) = r * sn * std::cos(th);
          p.v(1) = r * sn * std::sin(th);
          p.v(2) = r * u;
          add(p, w_r * r * r * wa[iu] * 2.0 * pi / nphi);
        }
      }
    } else {
      // |v|^2 = N^2 cos(psi), sqrt(c) z = N^2 sin(psi); dv dz = N^3 / sqrt(c) dN dpsi dtheta.
      const double sc = std::sqrt(g.norm_vertical_weight());
      for (int ip = 0; ip < nodes; ++ip) {
        const double psi = 0.5 * pi * xa[ip];
        const double w_psi = 0.5 * pi * wa[ip];
        const double vr = r * std::sqrt(std::cos(psi));
        p.z(0) = r * r * std::sin(psi) / sc;
        for (int it = 0; it < nphi; ++it) {
          const double th = 2.0 * pi * it / nphi;
          p.v(0) = vr * std::cos(th);
          p.v(1) = vr * std::sin(th);
          add(p, w_r * w_psi * (2.0 * pi / nphi) * r * r * r / sc);
        }
      }
    }
  }
  MultiEstimate out;
  out.components.resize(kk);
  out.covariance.assign(kk * kk, 0.0);
  for (std::size_t c = 0; c < kk; ++c) {
    out.components[c].value = acc[c];
    out.components[c].samples = evals;
  }
  return out;
}

MultiEstimate integrate_grid(const GroupSpec& g, const VectorIntegrand& f, std::size_t kk, const Annulus& s,
                             const IntegrationConfig& cfg) {
  if (!tensor_grid_supported(g)) {
    throw std::invalid_argument("tensor grid is only available in dimension <= 3 (got " + g.name() + ")");
  }
  const int n = std::max(4, cfg.grid_nodes);
  MultiEstimate fine = grid_once(g, f, kk, s, n);
  const MultiEstimate coarse = grid_once(g, f, kk, s, n / 2);
  for (std::size_t c = 0; c < kk; ++c) {
    auto& e = fine.components[c];
    e.std_error = std::abs(e.value - coarse.components[c].value);
    e.samples += coarse.components[c].samples;
    e.meets_target = e.std_error <= cfg.target_rel_error * std::abs(e.value);
    fine.covariance[c * kk + c] = e.std_error * e.std_error;
  }
  return fine;
}

}  // namespace

std::size_t default_samples_per_shell(const GroupSpec& g) { return g.dim() <= 5 ? 200000 : 1000000; }

std::vector<double> shell_radii(const Annulus& s, const IntegrationConfig& cfg) {
  if (!(s.outer > s.inner) || s.inner < 0.0 || !std::isfinite(s.outer)) {
    throw std::invalid_argument("integrate: annulus must satisfy 0 <= inner < outer < inf");
  }
  if (cfg.shells < 1) throw std::invalid_argument("integrate: at least one shell is required");
  std::vector<double> radii;
  double lo = s.inner;
  int count = cfg.shells;
  if (lo == 0.0) {
    radii.push_back(0.0);
    lo = s.outer * cfg.core_fraction;
    count -= 1;
    if (count == 0) {
      radii.push_back(s.outer);
      return radii;
    }
  }
  if (cfg.max_shell_ratio > 1.0) {
    const int need = static_cast<int>(std::ceil(std::log(s.outer / lo) / std::log(cfg.max_shell_ratio)));
    count = std::max(count, need);
  }
  const double step = std::log(s.outer / lo) / count;
  for (int i = 0; i <= count; ++i) radii.push_back(i == count ? s.outer : lo * std::exp(step * i));
  return radii;
}

MultiEstimate integrate_many(const GroupSpec& g, const VectorIntegrand& f, std::size_t components,
                             const Annulus& support, const IntegrationConfig& cfg) {
  if (components == 0) throw std::invalid_argument("integrate: no components");
  if (cfg.method == QuadratureMethod::TensorGrid) return integrate_grid(g, f, components, support, cfg);
  if (cfg.samples_per_shell < 100) throw std::invalid_argument("integrate: at least 100 samples per shell");

  const auto radii = shell_radii(support, cfg);
  const std::size_t nshell = radii.size() - 1;
  std::vector<ShellResult> results(nshell);
  parallel_for(nshell, worker_count(cfg, nshell), [&](std::size_t i) {
    results[i] = sample_shell(g, f, components, radii[i], radii[i + 1], cfg, i);
  });

  // Fixed reduction order over shells.
  MultiEstimate out;
  const std::size_t kk = components;
  out.components.resize(kk);
  out.covariance.assign(kk * kk, 0.0);
  for (std::size_t i = 0; i < nshell; ++i) {
    out.shells.push_back(results[i].stats);
    for (std::size_t c = 0; c < kk; ++c) {
      out.components[c].value += results[i].value[c];
      out.components[c].shell_values.push_back(results[i].value[c]);
      out.components[c].samples += results[i].stats.drawn;
    }
    for (std::size_t j = 0; j < kk * kk; ++j) out.covariance[j] += results[i].cov[j];
  }
  for (std::size_t c = 0; c < kk; ++c) {
    auto& e = out.components[c];
    e.std_error = std::sqrt(std::max(0.0, out.covariance[c * kk + c]));
    e.meets_target = e.std_error <= cfg.target_rel_error * std::abs(e.value);
  }
  return out;
}

IntegralEstimate integrate(const GroupSpec& g, const Integrand& f, const Annulus& support,
                           const IntegrationConfig& cfg) {
  auto multi = integrate_many(
      g, [&f](const Point& x, std::span<double> out) { out[0] = f(x); }, 1, support, cfg);
  return multi.components.front();
}

bool tensor_grid_supported(const GroupSpec& g) {
  if (g.is_abelian()) return g.m() <= 3;
  return g.m() == 2 && g.k() == 1;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

double muckenhoupt_a2_estimate(const GroupSpec& g, double alpha, const A2Options& opts) {
  const int q = g.homogeneous_dimension();
  if (!opts.allow_inadmissible && !(alpha > 2.0 - q && alpha < q)) {
    throw std::invalid_argument("muckenhoupt_a2_estimate: alpha outside (2 - Q, Q)");
  }
  if (alpha == 0.0) return 1.0;
  std::mt19937_64 rng(detail::splitmix64(opts.seed ^ 0xa2a2a2a2ULL));
  double best = 0.0;
  for (int b = 0; b < opts.balls; ++b) {
    // By dilation invariance of the product only N(centre)/radius matters; use radius 1.
    Point dir = uniform_in_unit_ball(g, rng);
    const double n0 = homogeneous_norm(g, dir);
    const double ratio = opts.max_center_ratio * detail::unit_double(rng());
    const Point centre = (n0 > 0.0 && ratio > 0.0) ? dilate(g, ratio / n0, dir) : g.zero();
    double sw = 0.0, sinv = 0.0;
    for (std::size_t s = 0; s < opts.samples_per_ball; ++s) {
      const Point y = multiply(g, centre, uniform_in_unit_ball(g, rng));
      const double w = std::pow(homogeneous_norm(g, y), alpha);
      sw += w;
      sinv += 1.0 / w;
    }
    const double n = static_cast<double>(opts.samples_per_ball);
    best = std::max(best, (sw / n) * (sinv / n));
  }
  return best;
}

std::string to_string(QuadratureMethod m) { return m == QuadratureMethod::TensorGrid ? "tensor-grid" : "stratified-mc"; }

void to_json(nlohmann::json& out, const IntegrationConfig& cfg) {
  out = {{"method", to_string(cfg.method)},
         {"samples_per_shell", cfg.samples_per_shell},
         {"shells", cfg.shells},
         {"max_shell_ratio", cfg.max_shell_ratio},
         {"core_fraction", cfg.core_fraction},
         {"seed", cfg.seed},
         {"target_rel_error", cfg.target_rel_error},
         {"grid_nodes", cfg.grid_nodes}};
}

IntegrationConfig config_from_json(const nlohmann::json& in, IntegrationConfig cfg) {
  if (in.contains("method")) {
    const auto m = in.at("method").get<std::string>();
    if (m == "stratified-mc") {
      cfg.method = QuadratureMethod::StratifiedMC;
    } else if (m == "tensor-grid") {
      cfg.method = QuadratureMethod::TensorGrid;
    } else {
      throw std::invalid_argument("unknown quadrature method '" + m + "'");
    }
  }
  if (in.contains("samples_per_shell")) cfg.samples_per_shell = in.at("samples_per_shell").get<std::size_t>();
  if (in.contains("shells")) cfg.shells = in.at("shells").get<int>();
  if (in.contains("max_shell_ratio")) cfg.max_shell_ratio = in.at("max_shell_ratio").get<double>();
  if (in.contains("core_fraction")) cfg.core_fraction = in.at("core_fraction").get<double>();
  if (in.contains("seed")) cfg.seed = in.at("seed").get<std::uint64_t>();
  if (in.contains("target_rel_error")) cfg.target_rel_error = in.at("target_rel_error").get<double>();
  if (in.contains("grid_nodes")) cfg.grid_nodes = in.at("grid_nodes").get<int>();
  if (in.contains("threads")) cfg.threads = in.at("threads").get<int>();
  if (cfg.samples_per_shell < 100) throw std::invalid_argument("samples_per_shell must be >= 100");
  if (cfg.shells < 1) throw std::invalid_argument("shells must be >= 1");
  return cfg;
}

void to_json(nlohmann::json& out, const IntegralEstimate& e) {
  out = {{"value", e.value}, {"std_error", e.std_error}, {"samples", e.samples}};
}

}  // namespace carnot
