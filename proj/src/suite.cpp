#include "carnot/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "carnot/identities.hpp"

namespace carnot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::pair<Suite, const char*> kSuiteNames[] = {
    {Suite::Identities, "identities"}, {Suite::Hardy, "hardy"},         {Suite::Rellich, "rellich"},
    {Suite::Uncertainty, "uncertainty"}, {Suite::Ckn, "ckn"},           {Suite::Remainder, "remainder"},
    {Suite::Sharpness, "sharpness"},   {Suite::All, "all"},
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string kv(const char* k, double v) { return std::string(k) + "=" + fmt(v); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Runner {
 public:
  explicit Runner(const RunManifest& m) : m_(m), g_(m.group), q_(g_.homogeneous_dimension()) {}

  SuiteResult run() {
    const Suite s = m_.suite;
    const bool all = s == Suite::All;
    if (all || s == Suite::Identities) identities();
    if (all || s == Suite::Hardy) hardy();
    if (all || s == Suite::Rellich) rellich();
    if (all || s == Suite::Uncertainty) uncertainty();
    if (all || s == Suite::Ckn) ckn();
    if (all || s == Suite::Remainder) remainder();
    if (all || s == Suite::Sharpness) sharpness();
    return std::move(out_);
  }

 private:
  std::vector<double> grid(const std::optional<std::vector<double>>& v, std::vector<double> def) const {
    return v ? *v : def;
  }

  // Each suite draws from its own stream so results do not depend on which other suites ran.
  struct Stream {
    std::uint64_t base;
    std::uint64_t n = 0;
    std::uint64_t next() { return detail::splitmix64(base ^ detail::splitmix64(++n)); }
  };
  Stream stream(const std::string& tag) const { return {detail::splitmix64(m_.seed ^ fnv1a(tag))}; }

  IntegrationConfig cfg(std::uint64_t seed) const {
    IntegrationConfig c = m_.integration;
    c.seed = seed;
    return c;
  }

  void skip(const std::string& what) { out_.skipped.push_back(g_.name() + ": " + what); }

  ReportRow& add(const QuotientReport& r, std::string detail) {
    ReportRow row;
    row.group = r.group;
    row.inequality = r.inequality;
    row.alpha = r.alpha;
    row.param = r.param;
    row.quotient = r.quotient;
    row.sigma = r.sigma;
    row.sharp_constant = r.sharp_constant;
    row.verdict = r.verdict;
    row.detail = std::move(detail);
    row.data = r;
    out_.rows.push_back(std::move(row));
    return out_.rows.back();
  }

  void add_identity(const IdentityResult& r, std::optional<double> alpha = std::nullopt) {
    ReportRow row;
    row.group = g_.name();
    row.inequality = r.check;
    row.alpha = alpha;
    row.param = r.param;
    row.quotient = r.max_error;
    row.verdict = r.pass() ? Verdict::Holds : Verdict::Violated;
    row.detail = "max relative residual; points=" + std::to_string(r.points) + " tol=" + short_fmt(r.tolerance);
    row.data = {{"check", r.check},         {"param", r.param}, {"max_error", r.max_error},
                {"tolerance", r.tolerance}, {"points", r.points}};
    out_.rows.push_back(std::move(row));
  }

  // Battery rows for an existential constant, followed by the battery minimum.
  void battery_min(std::size_t first, const std::string& label) {
    if (first >= out_.rows.size()) return;
    std::size_t best = first;
    for (std::size_t i = first; i < out_.rows.size(); ++i)
      if (out_.rows[i].quotient < out_.rows[best].quotient) best = i;
    ReportRow row = out_.rows[best];
    row.verdict = positive_verdict(row.quotient, row.sigma);
    row.detail = "battery-min over " + std::to_string(out_.rows.size() - first) + " fields (" + label + ")";
    row.data = {{"battery_min_of", out_.rows[best].detail}, {"report", out_.rows[best].data}};
    out_.rows.push_back(std::move(row));
  }

  std::vector<FieldPtr> battery(std::uint64_t seed, double lo, double hi) const {
    std::vector<FieldPtr> out;
    for (const auto& spec : random_bump_battery(g_, m_.battery_size, seed, lo, hi)) out.push_back(make_field(g_, spec));
    return out;
  }

  std::string bump_label(std::size_t i, std::size_t n) const {
    return "bump " + std::to_string(i + 1) + "/" + std::to_string(n);
  }

  void identities() {
    Stream st = stream("identities");
    const int n = m_.identity_points;
    add_identity(harmonicity_check(g_, n, st.next()));
    add_identity(norm_gradient_check(g_, n, st.next()));
    for (double s : {-1.0, 0.5, 3.0}) add_identity(power_laplacian_check(g_, s, n, st.next()));
    for (double a : grid(m_.alpha, {0.0, 1.0})) add_identity(weighted_power_check(g_, a, n, st.next()), a);
    add_identity(infinity_harmonic_check(g_, n, st.next()));
    for (double gm : {1.0, 2.0}) add_identity(orthogonality_check(g_, gm, n, st.next()));
    add_identity(radial_form_check(g_, n, st.next()));
    for (double p : {1.5, 3.0}) {
      const std::uint64_t seed = st.next();
      if (p == q_) {
        skip("p-fundamental p=" + fmt(p) + " (p = Q)");
        continue;
      }
      add_identity(p_fundamental_check(g_, p, n, seed));
    }
  }

  void hardy() {
    Stream st = stream("hardy");
    const auto fields = battery(st.next(), 0.05, 4.0);
    for (double a : grid(m_.alpha, {0.0, 1.0, -1.0})) {
      if (!(q_ + a - 2.0 > 0.0)) {
        skip("hardy alpha=" + fmt(a) + " (needs Q + alpha - 2 > 0)");
        continue;
      }
      for (double gm : grid(m_.gamma, {0.0, 2.0})) {
        if (gm != 0.0 && !(gm > -1.0)) {
          skip("hardy gamma=" + fmt(gm) + " (needs gamma > -1)");
          continue;
        }
        for (std::size_t i = 0; i < fields.size(); ++i)
          add(hardy_report(g_, a, gm, *fields[i], cfg(st.next())), bump_label(i, fields.size()));
      }
    }
  }

  void rellich() {
    Stream st = stream("rellich");
    const auto fields = battery(st.next(), 0.05, 4.0);
    for (double a : grid(m_.alpha, {0.0})) {
      if (!(q_ + a - 4.0 > 0.0)) {
        skip("rellich alpha=" + fmt(a) + " (needs Q + alpha - 4 > 0)");
        continue;
      }
      for (std::size_t i = 0; i < fields.size(); ++i)
        add(rellich_report(g_, a, *fields[i], cfg(st.next())), bump_label(i, fields.size()));
    }
  }

  void uncertainty() {
    if (q_ < 3) {
      skip("uncertainty (needs Q >= 3)");
      return;
    }
    Stream st = stream("uncertainty");
    const auto fields = battery(st.next(), 0.05, 4.0);
    // 1/|grad N|^2 is not locally integrable when the horizontal layer has dimension <= 2.
    const bool grad_weight_ok = g_.is_abelian() || g_.m() > 2;
    auto run_variant = [&](UncertaintyVariant v, double a) {
      for (std::size_t i = 0; i < fields.size(); ++i)
        add(uncertainty_report(g_, v, a, *fields[i], cfg(st.next())), bump_label(i, fields.size()));
    };
    for (UncertaintyVariant v : {UncertaintyVariant::GradWeighted, UncertaintyVariant::NormWeighted}) {
      if (v == UncertaintyVariant::GradWeighted && !grad_weight_ok) {
        skip("uncertainty grad-weighted (weight not locally integrable)");
        continue;
      }
      run_variant(v, 0.0);
    }
    for (double a : grid(m_.alpha, {0.0})) {
      if (!(q_ + a - 4.0 > 0.0)) {
        skip("uncertainty rellich variants alpha=" + fmt(a) + " (needs Q + alpha - 4 > 0)");
        continue;
      }
      if (grad_weight_ok)
        run_variant(UncertaintyVariant::RellichFourMinusAlpha, a);
      else
        skip("uncertainty rellich-4-minus-alpha (weight not locally integrable)");
      run_variant(UncertaintyVariant::RellichNorm, a);
    }
    for (double b : grid(m_.beta, {0.5, 1.0, 2.0})) {
      if (!(b > 0.0)) {
        skip("gaussian beta=" + fmt(b) + " (needs beta > 0)");
        continue;
      }
      const FieldPtr phi = make_gaussian_in_norm(g_, b);
      ReportRow& row = add(uncertainty_report(g_, UncertaintyVariant::NormWeighted, 0.0, *phi, cfg(st.next()), {true}),
                           "gaussian equality case");
      row.param += ";" + kv("beta", b);
    }
  }

  void ckn() {
    if (q_ < 3) {
      skip("ckn (needs Q >= 3)");
      return;
    }
    Stream st = stream("ckn");
    const auto fields = battery(st.next(), 0.05, 1.0);
    const auto svals = grid(m_.s, {0.0, 1.0, 2.0});
    for (double a : grid(m_.alpha, {0.0})) {
      if (!(a > 2.0 - q_ && a < q_)) {
        skip("ckn alpha=" + fmt(a) + " (needs 2 - Q < alpha < Q)");
        continue;
      }
      for (double s : svals) {
        if (!(s >= 0.0 && s <= 2.0)) {
          skip("ckn s=" + fmt(s) + " (needs 0 <= s <= 2)");
          continue;
        }
        const std::size_t first = out_.rows.size();
        for (std::size_t i = 0; i < fields.size(); ++i)
          add(ckn_report(g_, s, a, *fields[i], cfg(st.next())), bump_label(i, fields.size()));
        battery_min(first, "ckn " + kv("alpha", a) + " " + kv("s", s));
      }
    }
    if (q_ <= 4) {
      skip("rellich-sobolev (needs Q > 4)");
      return;
    }
    for (double s : svals) {
      if (!(s >= 0.0 && s <= 2.0)) continue;
      const std::size_t first = out_.rows.size();
      for (std::size_t i = 0; i < fields.size(); ++i)
        add(rellich_sobolev_report(g_, s, *fields[i], cfg(st.next())), bump_label(i, fields.size()));
      battery_min(first, "rellich-sobolev " + kv("s", s));
    }
  }

  void remainder() {
    if (q_ < 3) {
      skip("remainder (needs Q >= 3)");
      return;
    }
    Stream st = stream("remainder");
    const double radius = 1.0;
    const auto fields = battery(st.next(), 0.05, radius);
    for (double a : grid(m_.alpha, {0.0})) {
      if (!(a > 2.0 - q_ && a < 2.0)) {
        skip("improved-hardy alpha=" + fmt(a) + " (needs 2 - Q < alpha < 2)");
        continue;
      }
      const std::size_t first = out_.rows.size();
      for (std::size_t i = 0; i < fields.size(); ++i)
        add(improved_hardy_report(g_, a, radius, *fields[i], cfg(st.next())), bump_label(i, fields.size()));
      battery_min(first, "improved-hardy " + kv("alpha", a));
      improved_hardy_scaling(a, radius, fields.front(), st.next());
    }
    for (double qe : grid(m_.q, {1.5})) {
      if (!(qe > 1.0 && qe < 2.0)) {
        skip("remainder q=" + fmt(qe) + " (needs 1 < q < 2)");
        continue;
      }
      std::size_t first = out_.rows.size();
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const QuotientReport r = gradient_remainder_report(g_, qe, radius, *fields[i], cfg(st.next()));
        const bool holder = r.extras.at("holder_ok").get<bool>();
        add(r, bump_label(i, fields.size()) + (holder ? "" : " holder-slack-negative"));
      }
      battery_min(first, "gradient-remainder " + kv("q", qe));
      first = out_.rows.size();
      for (std::size_t i = 0; i < fields.size(); ++i)
        add(interpolation_report(g_, qe, *fields[i], cfg(st.next())), bump_label(i, fields.size()));
      battery_min(first, "interpolation " + kv("q", qe));

      const double c = elementary_inequality_constant(qe, g_.m(), 100000, st.next());
      ReportRow row;
      row.group = g_.name();
      row.inequality = "elementary-remainder-constant";
      row.param = kv("q", qe);
      row.quotient = c;
      row.verdict = std::isfinite(c) && c > 0.0 ? Verdict::Holds : Verdict::Violated;
      row.detail = "sampled supremum over 100000 vector pairs in dimension " + std::to_string(g_.m());
      row.data = {{"q", qe}, {"dim", g_.m()}, {"pairs", 100000}, {"constant", c}};
      out_.rows.push_back(std::move(row));
    }
  }

  // The gap quotient of x -> phi(delta_lambda x) on the ball of radius r/lambda must be
  // lambda^{2-alpha} times the original. With identical seeds the samples dilate exactly.
  void improved_hardy_scaling(double a, double radius, const FieldPtr& phi, std::uint64_t seed) {
    const double lambda = 2.0, tol = 1e-8;
    const QuotientReport base = improved_hardy_report(g_, a, radius, *phi, cfg(seed));
    const QuotientReport scaled = improved_hardy_report(g_, a, radius / lambda, *make_dilated(phi, lambda), cfg(seed));
    const double ratio = scaled.quotient / (base.quotient * std::pow(lambda, 2.0 - a));
    ReportRow row;
    row.group = g_.name();
    row.inequality = "improved-hardy-scaling";
    row.alpha = a;
    row.param = kv("lambda", lambda);
    row.quotient = ratio;
    row.sharp_constant = 1.0;
    row.verdict = std::abs(ratio - 1.0) <= tol ? Verdict::Holds : Verdict::Violated;
    row.detail = "gap(phi_lambda) / (lambda^(2-alpha) gap(phi)); tol=" + short_fmt(tol);
    row.data = {{"base", base}, {"scaled", scaled}, {"ratio", ratio}, {"tolerance", tol}};
    out_.rows.push_back(std::move(row));
  }

  void sweep_rows(SweepInequality ineq, double a, double gm, const std::vector<double>& eps, std::uint64_t seed) {
    const bool hardy = ineq == SweepInequality::Hardy;
    const std::string name = hardy ? "hardy" : "rellich";
    const double constant = hardy ? hardy_constant(q_, a) : rellich_constant(q_, a);
    ReportRow row;
    row.group = g_.name();
    row.inequality = name + "-sweep-limit";
    row.alpha = a;
    row.param = hardy ? kv("gamma", gm) : "";
    row.sharp_constant = constant;
    SweepResult r;
    try {
      r = sharpness_sweep(g_, ineq, a, gm, eps, cfg(seed));
    } catch (const std::runtime_error& e) {
      row.quotient = std::nan("");
      row.verdict = Verdict::Inconclusive;
      row.detail = std::string("sweep rejected: ") + e.what();
      out_.rows.push_back(std::move(row));
      return;
    }
    for (const SweepPoint& p : r.points) {
      ReportRow pr;
      pr.group = r.group;
      pr.inequality = name + "-extremizer";
      pr.alpha = a;
      pr.param = (hardy ? kv("gamma", gm) + ";" : std::string()) + kv("eps", p.eps);
      pr.quotient = p.quotient;
      pr.sigma = p.sigma;
      pr.sharp_constant = constant;
      pr.verdict = sharp_verdict(p.quotient, p.sigma, constant);
      pr.detail = "mollified extremizer";
      pr.data = {{"eps", p.eps}, {"quotient", p.quotient}, {"sigma", p.sigma}};
      out_.rows.push_back(std::move(pr));
    }
    // Extrapolation is not a proof; a limit away from C is flagged inconclusive, never violated.
    const double rel_tol = hardy ? 0.05 : 0.10;
    row.quotient = r.limit;
    row.sigma = r.limit_sigma;
    row.verdict = std::abs(r.limit - constant) <= std::max(3.0 * r.limit_sigma, rel_tol * constant)
                      ? Verdict::Holds
                      : Verdict::Inconclusive;
    row.detail = "rational extrapolation to eps=0; rel_tol=" + short_fmt(rel_tol);
    row.data = r;
    out_.rows.push_back(std::move(row));
  }

  void sharpness() {
    Stream st = stream("sharpness");
    const auto eps = grid(m_.eps, {0.5, 0.2, 0.1, 0.05});
    for (double a : grid(m_.alpha, {0.0})) {
      const std::uint64_t hs = st.next(), rs = st.next();
      if (q_ + a - 2.0 > 0.0) {
        for (double gm : grid(m_.gamma, {0.0})) sweep_rows(SweepInequality::Hardy, a, gm, eps, hs ^ fnv1a(fmt(gm)));
      } else {
        skip("hardy sweep alpha=" + fmt(a) + " (needs Q + alpha - 2 > 0)");
      }
      if (q_ + a - 4.0 > 0.0)
        sweep_rows(SweepInequality::Rellich, a, 0.0, eps, rs);
      else
        skip("rellich sweep alpha=" + fmt(a) + " (needs Q + alpha - 4 > 0)");
    }
  }

  const RunManifest& m_;
  const GroupSpec& g_;
  const int q_;
  SuiteResult out_;
};

std::vector<double> read_grid(const json& v, const std::string& key) {
  if (!v.is_array()) throw ManifestError("grid '" + key + "' must be an array of numbers");
  if (v.empty()) throw ManifestError("grid '" + key + "' is empty");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ManifestError("grid '" + key + "' must contain only numbers");
    const double d = x.get<double>();
    if (!std::isfinite(d)) throw ManifestError("grid '" + key + "' contains a non-finite value");
    out.push_back(d);
  }
  return out;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw ManifestError("cannot write " + p.string());
  f << content;
  f.close();
  if (!f) throw ManifestError("failed writing " + p.string());
}

}  // namespace

std::string to_string(Suite s) {
  for (const auto& [k, n] : kSuiteNames)
    if (k == s) return n;
  return "unknown";
}

Suite suite_from_string(const std::string& s) {
  for (const auto& [k, n] : kSuiteNames)
    if (s == n) return k;
  throw ManifestError("unknown suite '" + s + "'");
}

RunManifest manifest_from_json(const json& in, const fs::path& base_dir) {
  if (!in.is_object()) throw ManifestError("manifest must be a JSON object");
  static const char* known[] = {"group", "suite", "seed", "grids", "integration", "battery_size", "identity_points",
                                "output_dir"};
  for (const auto& [key, _] : in.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      throw ManifestError("unknown manifest key '" + key + "'");
  }
  RunManifest m;
  try {
    if (!in.contains("group")) throw ManifestError("manifest needs a 'group'");
    const json& gj = in.at("group");
    if (gj.is_string()) {
      fs::path p = gj.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      std::ifstream f(p);
      if (!f) throw ManifestError("group file not found: " + p.string());
      m.group = group_from_json(json::parse(f));
    } else {
      m.group = group_from_json(gj);
    }
    if (!in.contains("suite")) throw ManifestError("manifest needs a 'suite'");
    m.suite = suite_from_string(in.at("suite").get<std::string>());
    if (in.contains("seed")) {
      const json& sj = in.at("seed");
      if (!sj.is_number_unsigned() && !(sj.is_number_integer() && sj.get<std::int64_t>() >= 0))
        throw ManifestError("seed must be a non-negative integer");
      m.seed = in.at("seed").get<std::uint64_t>();
    }
    if (in.contains("grids")) {
      const json& gr = in.at("grids");
      if (!gr.is_object()) throw ManifestError("'grids' must be an object");
      for (const auto& [key, v] : gr.items()) {
        auto vals = read_grid(v, key);
        if (key == "alpha") m.alpha = vals;
        else if (key == "gamma") m.gamma = vals;
        else if (key == "s") m.s = vals;
        else if (key == "q") m.q = vals;
        else if (key == "eps") m.eps = vals;
        else if (key == "beta") m.beta = vals;
        else throw ManifestError("unknown grid '" + key + "'");
      }
    }
    IntegrationConfig base;
    base.samples_per_shell = default_samples_per_shell(m.group);
    m.integration = in.contains("integration") ? config_from_json(in.at("integration"), base) : base;
    if (in.contains("battery_size")) m.battery_size = in.at("battery_size").get<int>();
    if (in.contains("identity_points")) m.identity_points = in.at("identity_points").get<int>();
    if (m.battery_size < 1) throw ManifestError("battery_size must be at least 1");
    if (m.identity_points < 1) throw ManifestError("identity_points must be at least 1");
    if (in.contains("output_dir")) {
      fs::path p = in.at("output_dir").get<std::string>();
      m.output_dir = p.is_relative() ? base_dir / p : p;
    }
  } catch (const ManifestError&) {
    throw;
  } catch (const std::exception& e) {
    throw ManifestError(std::string("invalid manifest: ") + e.what());
  }
  if (m.eps && m.eps->size() < 3) throw ManifestError("grid 'eps' needs at least three values");
  return m;
}

RunManifest load_manifest(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ManifestError("cannot open manifest " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const std::exception& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  return manifest_from_json(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

void to_json(json& out, const RunManifest& m) {
  out = {{"group", m.group},
         {"suite", to_string(m.suite)},
         {"seed", m.seed},
         {"integration", m.integration},
         {"battery_size", m.battery_size},
         {"identity_points", m.identity_points}};
  json grids = json::object();
  auto put = [&](const char* k, const std::optional<std::vector<double>>& v) {
    if (v) grids[k] = *v;
  };
  put("alpha", m.alpha);
  put("gamma", m.gamma);
  put("s", m.s);
  put("q", m.q);
  put("eps", m.eps);
  put("beta", m.beta);
  out["grids"] = grids;
}

int SuiteResult::count(Verdict v) const {
  int n = 0;
  for (const auto& r : rows) n += r.verdict == v;
  return n;
}

SuiteResult run_checks(const RunManifest& m) { return Runner(m).run(); }

std::string to_csv(const SuiteResult& r) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& row : r.rows) {
    os << csv_field(row.group) << ',' << csv_field(row.inequality) << ',' << (row.alpha ? fmt(*row.alpha) : "") << ','
       << csv_field(row.param) << ',' << fmt(row.quotient) << ',' << fmt(row.sigma) << ','
       << (row.sharp_constant ? fmt(*row.sharp_constant) : "") << ',' << to_string(row.verdict) << ','
       << csv_field(row.detail) << '\n';
  }
  return os.str();
}

json summary_json(const SuiteResult& r) {
  return {{"rows", r.rows.size()},
          {"holds", r.count(Verdict::Holds)},
          {"violated", r.count(Verdict::Violated)},
          {"inconclusive", r.count(Verdict::Inconclusive)},
          {"skipped", r.skipped}};
}

int exit_code(const SuiteResult& r) { return r.count(Verdict::Violated) > 0 ? 1 : 0; }

SuiteResult run_and_write(const RunManifest& m, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(m.output_dir, ec);
  if (ec || !fs::is_directory(m.output_dir))
    throw ManifestError("cannot create output directory " + m.output_dir.string());

  log << "group " << m.group.name() << ", suite " << to_string(m.suite) << ", seed " << m.seed << '\n';
  SuiteResult r = run_checks(m);

  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"group", row.group},
                    {"inequality", row.inequality},
                    {"alpha", row.alpha ? json(*row.alpha) : json()},
                    {"param", row.param},
                    {"quotient", row.quotient},
                    {"sigma", row.sigma},
                    {"sharp_constant", row.sharp_constant ? json(*row.sharp_constant) : json()},
                    {"verdict", to_string(row.verdict)},
                    {"detail", row.detail},
                    {"data", row.data}});
  }
  const json summary = summary_json(r);
  const json report = {{"manifest", m}, {"summary", summary}, {"rows", rows}};

  const std::pair<std::string, std::string> files[] = {
      {"report.csv", to_csv(r)}, {"report.json", report.dump(1) + "\n"}, {"summary.json", summary.dump(1) + "\n"}};
  std::vector<fs::path> temps;
  try {
    for (const auto& [name, content] : files) {
      temps.push_back(m.output_dir / ("." + name + ".tmp"));
      write_file(temps.back(), content);
    }
    for (std::size_t i = 0; i < temps.size(); ++i) fs::rename(temps[i], m.output_dir / files[i].first);
  } catch (...) {
    for (const auto& t : temps) fs::remove(t, ec);
    throw;
  }
  log << summary.dump() << '\n';
  return r;
}

}  // namespace carnot
