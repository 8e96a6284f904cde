#include "tci/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "tci/concentration.hpp"
#include "tci/corpus.hpp"
#include "tci/functional.hpp"
#include "tci/isotropy.hpp"
#include "tci/parallel.hpp"
#include "tci/suite.hpp"
#include "tci/transport.hpp"

namespace tci {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------- helpers

std::vector<double> number_list(JsonReader& r, const std::string& key, std::vector<double> fallback) {
  if (!r.has(key)) {
    r.number(key, 0.0);  // marks the key as known
    return fallback;
  }
  const Json& j = r.raw(key);
  if (j.is_number()) return {checked_number(j, r.child_path(key))};
  auto out = r.numbers(key);
  if (out.empty()) r.fail(key, "list is empty");
  return out;
}

std::int64_t bounded_int(JsonReader& r, const std::string& key, std::int64_t fallback, std::int64_t lo,
                         std::int64_t hi) {
  const auto v = r.integer(key, fallback);
  if (v < lo || v > hi)
    r.fail(key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

void check_p(JsonReader& r, const std::string& key, const std::vector<double>& ps, bool integer_only) {
  for (double p : ps) {
    if (integer_only ? (p != 1.0 && p != 2.0) : !(p >= 1.0))
      r.fail(key, integer_only ? "p must be 1 or 2" : "p must be >= 1");
  }
}

Matrix points_of(JsonReader& r, const std::string& key) { return r.matrix(key).transpose(); }

DiscreteMeasure measure_from_json(JsonReader r) {
  Matrix support = points_of(r, "points");
  std::optional<Vector> weights;
  if (r.has("weights")) {
    const auto w = r.numbers("weights");
    if (static_cast<Eigen::Index>(w.size()) != support.cols()) r.fail("weights", "needs one weight per point");
    weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
  }
  r.finish();
  try {
    return weights ? DiscreteMeasure(std::move(support), *weights) : DiscreteMeasure::uniform(std::move(support));
  } catch (const InvalidArgument& e) {
    throw SchemaError(r.path(), e.what());
  }
}

struct NamedDomains {
  std::vector<NamedDomain> list;
};

NamedDomains domains_from(JsonReader& r, const std::string& key) {
  NamedDomains out;
  const Json& j = r.raw(key);
  if (j.is_string()) {
    if (j.get<std::string>() != "standard") r.fail(key, "the only named domain set is \"standard\"");
    out.list = standard_domains();
    return out;
  }
  for (auto& d : r.objects(key)) {
    const std::string name = d.string("name", "domain " + std::to_string(out.list.size()));
    out.list.push_back({name, domain_from_json(d.object("domain"))});
    d.finish();
  }
  if (out.list.empty()) r.fail(key, "no domains");
  return out;
}

// Functions for a given dimension; a family without "dim" adopts it.
std::vector<TestFunction> functions_for_dim(const Json& j, const std::string& path, int dim) {
  if (j.is_object() && j.contains("family") && !j.contains("dim")) {
    Json copy = j;
    copy["dim"] = dim;
    return functions_from_json(copy, path);
  }
  auto fs = functions_from_json(j, path);
  for (std::size_t i = 0; i < fs.size(); ++i)
    if (fs[i].dim() != dim)
      throw SchemaError(path, "function " + std::to_string(i) + " has dimension " + std::to_string(fs[i].dim()) +
                                  ", the domain has " + std::to_string(dim));
  return fs;
}

std::string verdict_text(bool pass) { return pass ? "PASS" : "VIOLATION"; }

CommandResult start(const ExperimentManifest& m) {
  CommandResult res;
  res.report.command = m.command;
  res.report.manifest = m.to_json();
  res.report.manifest_hash = m.hash();
  res.report.seed = m.seed;
  return res;
}

void violation(CommandResult& res, const std::string& what) {
  res.exit_code = 1;
  res.violations.push_back(what);
}

// --------------------------------------------------------------------- ot

struct OtParams {
  std::vector<double> ps;
  OtSolver solver = OtSolver::exact;
  double epsilon_factor = 1e-3;
  std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>> instances;
  bool oracle = false;
};

OtParams parse_ot(const ExperimentManifest& m) {
  JsonReader r(m.params, "params");
  OtParams p;
  p.ps = number_list(r, "p", {1.0, 2.0});
  check_p(r, "p", p.ps, true);
  const std::string solver = r.string("solver", "exact");
  if (solver == "sinkhorn")
    p.solver = OtSolver::sinkhorn;
  else if (solver != "exact")
    r.fail("solver", "expected \"exact\" or \"sinkhorn\"");
  p.epsilon_factor = r.number("epsilon_factor", 1e-3);
  if (!(p.epsilon_factor > 0.0)) r.fail("epsilon_factor", "must be positive");
  p.oracle = m.oracle || r.boolean("oracle", false);
  if (r.has("instances") == r.has("random")) r.fail("", "give exactly one of \"instances\" and \"random\"");
  if (r.has("instances")) {
    for (auto& inst : r.objects("instances")) {
      auto mu = measure_from_json(inst.object("mu"));
      auto nu = measure_from_json(inst.object("nu"));
      if (mu.dim() != nu.dim()) inst.fail("nu", "dimension differs from mu");
      inst.finish();
      p.instances.emplace_back(std::move(mu), std::move(nu));
    }
    if (p.instances.empty()) r.fail("instances", "no instances");
  } else {
    JsonReader g = r.object("random");
    const auto count = bounded_int(g, "count", 500, 1, 1'000'000);
    const auto points = bounded_int(g, "points", 7, 1, kExactSolverCap);
    const auto dim = bounded_int(g, "dim", 2, 1, 64);
    g.finish();
    for (std::int64_t i = 0; i < count; ++i)
      p.instances.push_back(random_ot_instance(static_cast<int>(points), static_cast<int>(dim),
                                               derive_seed(m.seed, static_cast<std::uint64_t>(i))));
  }
  r.finish();
  return p;
}

CommandResult run_ot(const ExperimentManifest& m, unsigned workers) {
  const OtParams p = parse_ot(m);
  CommandResult res = start(m);
  struct Row {
    CouplingPlan plan;
    double oracle = kNaN;
  };
  const std::size_t np = p.ps.size();
  const auto rows = parallel_map<Row>(p.instances.size() * np, [&](std::size_t k) {
    const auto& [mu, nu] = p.instances[k / np];
    const double pp = p.ps[k % np];
    Row row;
    if (p.solver == OtSolver::exact) {
      row.plan = exact_ot(mu, nu, pp);
    } else {
      SinkhornOptions opt;
      opt.epsilon = p.epsilon_factor * median_cost(mu, nu, pp);
      row.plan = sinkhorn(mu, nu, pp, opt);
    }
    if (p.oracle && mu.is_uniform() && nu.is_uniform() && mu.size() == nu.size() && mu.size() <= 8)
      row.oracle = permutation_oracle(mu, nu, pp).cost;
    return row;
  }, workers);
  CsvTable t({"instance", "p", "solver", "size_mu", "size_nu", "cost", "oracle_cost", "abs_diff",
              "marginal_residual"});
  const double tol = 1e-9 * m.tolerance_scale;
  double worst = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& [mu, nu] = p.instances[k / np];
    const double diff = std::abs(rows[k].plan.cost - rows[k].oracle);
    if (!std::isnan(diff)) {
      worst = std::max(worst, diff);
      if (diff > tol)
        violation(res, "instance " + std::to_string(k / np) + " p=" + format_number(p.ps[k % np]) +
                           ": |cost - oracle| = " + format_number(diff));
    }
    t.add_row({static_cast<std::int64_t>(k / np), p.ps[k % np], std::string(to_string(rows[k].plan.solver)),
               static_cast<std::int64_t>(mu.size()), static_cast<std::int64_t>(nu.size()), rows[k].plan.cost,
               rows[k].oracle, diff, rows[k].plan.marginal_residual});
  }
  res.report.summary = {{"instances", p.instances.size()}, {"solves", rows.size()},
                        {"oracle", p.oracle}, {"max_oracle_diff", worst}, {"tolerance", tol}};
  res.report.tables.emplace_back("", std::move(t));
  res.messages.push_back("ot: " + std::to_string(rows.size()) + " solves" +
                         (p.oracle ? ", max |cost - oracle| = " + format_number(worst) : ""));
  return res;
}

// ------------------------------------------------------------ wasserstein

struct WassersteinParams {
  std::optional<ConvexBody> A, B;
  double p = 1.0;
  std::int64_t m = 1024;
  bool point_mass = false;
  std::int64_t point_mass_samples = 100'000;
  std::vector<double> a, b;
};

WassersteinParams parse_wasserstein(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  WassersteinParams p;
  p.p = r.number("p", 1.0);
  check_p(r, "p", {p.p}, true);
  if (r.has("samples") == r.has("A")) r.fail("", "give either bodies \"A\" and \"B\" or \"samples\"");
  if (r.has("samples")) {
    JsonReader s = r.object("samples");
    p.a = s.numbers("a");
    p.b = s.numbers("b");
    if (p.a.empty() || p.a.size() != p.b.size()) s.fail("b", "samples must be non-empty and of equal size");
    s.finish();
  } else {
    p.A = body_from_json(r.object("A"));
    p.B = body_from_json(r.object("B"));
    if (p.A->dim() != p.B->dim()) r.fail("B", "dimension differs from A");
    p.m = bounded_int(r, "m", 1024, 1, kExactSolverCap);
    p.point_mass = r.boolean("point_mass", false);
    p.point_mass_samples = bounded_int(r, "point_mass_samples", 100'000, 1, 100'000'000);
  }
  r.finish();
  return p;
}

CommandResult run_wasserstein(const ExperimentManifest& m, unsigned) {
  const auto p = parse_wasserstein(m);
  CommandResult res = start(m);
  CsvTable t({"quantity", "value", "std_error", "count"});
  if (!p.a.empty()) {
    const double w = wasserstein_1d(p.a, p.b, p.p);
    t.add_row({std::string("W_p(a, b) 1-d"), w, 0.0, static_cast<std::int64_t>(p.a.size())});
    res.report.summary = {{"w", w}};
    res.messages.push_back("wasserstein: W_" + format_number(p.p) + " = " + format_number(w));
  } else {
    const Estimate w = wasserstein_empirical(*p.A, *p.B, p.p, p.m, m.seed);
    t.add_row({std::string("W_p(m_A, m_B)"), w.value, w.std_error, w.count});
    res.report.summary = {{"w", w.value}, {"std_error", w.std_error}};
    if (p.point_mass) {
      const Estimate wa = w1_to_point_mass(*p.A, p.point_mass_samples, derive_seed(m.seed, 0xA));
      const Estimate wb = w1_to_point_mass(*p.B, p.point_mass_samples, derive_seed(m.seed, 0xB));
      t.add_row({std::string("W_1(m_A, delta_0)"), wa.value, wa.std_error, wa.count});
      t.add_row({std::string("W_1(m_B, delta_0)"), wb.value, wb.std_error, wb.count});
    }
    res.messages.push_back("wasserstein: W_" + format_number(p.p) + " = " + format_number(w.value) + " +- " +
                           format_number(w.std_error));
  }
  res.report.tables.emplace_back("", std::move(t));
  return res;
}

// --------------------------------------------------------------- isotropy

struct IsotropyParams {
  std::optional<ConvexBody> body, K;
  std::int64_t m = 200'000;
  VolumeRatioOptions ratio;
  bool relative_entropy = false;
};

IsotropyParams parse_isotropy(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  IsotropyParams p;
  p.body = body_from_json(r.object("body"));
  p.m = bounded_int(r, "m", 200'000, 100, 100'000'000);
  if (r.has("K")) {
    p.K = body_from_json(r.object("K"));
    if (p.K->dim() != p.body->dim()) r.fail("K", "dimension differs from body");
    const std::string mode = r.string("mode", "concentric_scaling");
    if (mode == "given_map") {
      p.ratio.mode = VolumeRatioMode::given_map;
      JsonReader mp = r.object("map");
      p.ratio.map.linear = mp.matrix("linear");
      const auto shift = mp.numbers("shift");
      p.ratio.map.shift = Eigen::Map<const Vector>(shift.data(), static_cast<Eigen::Index>(shift.size()));
      const auto n = p.body->dim();
      if (p.ratio.map.linear.rows() != n || p.ratio.map.linear.cols() != n || p.ratio.map.shift.size() != n)
        mp.fail("", "map dimensions must match the body");
      mp.finish();
    } else if (mode != "concentric_scaling") {
      r.fail("mode", "expected \"concentric_scaling\" or \"given_map\"");
    }
    p.relative_entropy = r.boolean("relative_entropy", false);
  }
  r.finish();
  return p;
}

CommandResult run_isotropy(const ExperimentManifest& m, unsigned) {
  const auto p = parse_isotropy(m);
  CommandResult res = start(m);
  const IsotropyReport iso = isotropic_position(*p.body, p.m, m.seed);
  const Estimate L = isotropic_constant(*p.body, p.m, m.seed);
  CsvTable t({"quantity", "value", "std_error"});
  t.add_row({std::string("L_estimate"), L.value, L.std_error});
  t.add_row({std::string("isotropy_defect"), iso.isotropy_defect, 0.0});
  t.add_row({std::string("centroid_norm"), iso.centroid.norm(), 0.0});
  t.add_row({std::string("transformed_centroid_norm"), iso.transformed_centroid.norm(), 0.0});
  res.report.summary = {{"L", L.value}, {"L_std_error", L.std_error}, {"isotropy_defect", iso.isotropy_defect}};
  if (p.K) {
    VolumeRatioOptions opt = p.ratio;
    opt.seed = derive_seed(m.seed, 0x7A);
    const auto vr = volume_ratio(*p.body, *p.K, opt);
    t.add_row({std::string("volume_ratio"), vr.ratio.value, vr.ratio.std_error});
    t.add_row({std::string("scale"), vr.scale, 0.0});
    res.report.summary["volume_ratio"] = vr.ratio.value;
    res.report.summary["volume_ratio_exact"] = vr.exact;
    if (p.relative_entropy) {
      const double h = relative_entropy_uniform(*p.K, *p.body, 10'000, derive_seed(m.seed, 0x7B));
      const Estimate mc = relative_entropy_monte_carlo(*p.K, *p.body, p.m, derive_seed(m.seed, 0x7C));
      t.add_row({std::string("relative_entropy"), h, 0.0});
      t.add_row({std::string("relative_entropy_monte_carlo"), mc.value, mc.std_error});
      res.report.summary["relative_entropy"] = h;
    }
  }
  res.report.tables.emplace_back("", std::move(t));
  res.messages.push_back("isotropy: L = " + format_number(L.value) + " +- " + format_number(L.std_error) +
                         ", defect " + format_number(iso.isotropy_defect));
  return res;
}

// -------------------------------------------------------------- tci-bound

struct TciBoundParams {
  std::optional<ConvexBody> B;
  std::vector<ConvexBody> subs;
  double p = 1.0;
  std::int64_t m = 1024;
};

TciBoundParams parse_tci_bound(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  TciBoundParams p;
  p.B = body_from_json(r.object("B"));
  for (auto& s : r.objects("sub_bodies")) {
    p.subs.push_back(body_from_json(std::move(s)));
    if (p.subs.back().dim() != p.B->dim()) r.fail("sub_bodies", "dimension mismatch");
  }
  if (p.subs.empty()) r.fail("sub_bodies", "no sub-bodies");
  p.p = r.number("p", 1.0);
  check_p(r, "p", {p.p}, true);
  p.m = bounded_int(r, "m", 1024, 2, kExactSolverCap);
  r.finish();
  return p;
}

CommandResult run_tci_bound(const ExperimentManifest& m, unsigned) {
  const auto p = parse_tci_bound(m);
  CommandResult res = start(m);
  const TauBound tb = tci_tau_upper_bound(*p.B, p.subs, p.p, p.m, m.seed);
  CsvTable t({"index", "entropy", "wasserstein", "std_error", "bound", "skipped"});
  for (std::size_t i = 0; i < tb.entries.size(); ++i) {
    const auto& e = tb.entries[i];
    t.add_row({static_cast<std::int64_t>(i), e.entropy, e.wasserstein.value, e.wasserstein.std_error, e.bound,
               std::int64_t{e.skipped}});
  }
  res.report.summary = {{"tau_upper_bound", tb.value.value}, {"std_error", tb.value.std_error},
                        {"argmin", tb.argmin}, {"warnings", tb.warnings}};
  res.report.tables.emplace_back("", std::move(t));
  res.messages.push_back("tci-bound: tau_" + format_number(p.p) + " <= " + format_number(tb.value.value));
  for (const auto& w : tb.warnings) res.messages.push_back("warning: " + w);
  return res;
}

// ------------------------------------------------------------ tlsi-verify

struct TlsiInstance {
  std::size_t domain, function;
  double p;
};

struct TlsiParams {
  NamedDomains domains;
  std::vector<std::vector<TestFunction>> functions;  // per domain
  std::vector<double> ps;
  int resolution = 128;
  std::vector<TlsiInstance> instances;
};

TlsiParams parse_tlsi(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  TlsiParams p;
  p.domains = domains_from(r, "domains");
  const Json& fj = r.raw("functions");
  for (const auto& d : p.domains.list) p.functions.push_back(functions_for_dim(fj, r.child_path("functions"), d.domain.dim()));
  p.ps = number_list(r, "p", {1.0, 2.0, 3.0});
  check_p(r, "p", p.ps, false);
  p.resolution = static_cast<int>(bounded_int(r, "resolution", 128, 16, 4096));
  r.finish();
  for (std::size_t d = 0; d < p.domains.list.size(); ++d)
    for (std::size_t f = 0; f < p.functions[d].size(); ++f)
      for (double pp : p.ps) p.instances.push_back({d, f, pp});
  return p;
}

CommandResult run_tlsi(const ExperimentManifest& m, unsigned workers) {
  const auto p = parse_tlsi(m);
  CommandResult res = start(m);
  const auto reports = parallel_map<TLSIReport>(p.instances.size(), [&](std::size_t i) {
    const auto& in = p.instances[i];
    return tlsi_verify(p.domains.list[in.domain].domain, p.functions[in.domain][in.function], in.p, p.resolution,
                       m.tolerance_scale);
  }, workers);
  CsvTable t({"instance", "domain", "function", "p", "lhs", "grad_term", "bdry_term", "slack", "tolerance",
              "resolution", "verdict"});
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& in = p.instances[i];
    const auto& rep = reports[i];
    min_slack = std::min(min_slack, rep.slack);
    if (rep.verdict == Verdict::violation) {
      violation(res, "instance " + std::to_string(i) + " (" + p.domains.list[in.domain].name + ", function " +
                         std::to_string(in.function) + ", p=" + format_number(in.p) + "): slack " +
                         format_number(rep.slack) + " < -tolerance " + format_number(rep.tolerance));
      res.report.records.push_back({{"instance", i}, {"lhs", rep.lhs}, {"grad_term", rep.grad_term},
                                    {"bdry_term", rep.bdry_term}, {"slack", rep.slack},
                                    {"tolerance", rep.tolerance}});
    }
    t.add_row({static_cast<std::int64_t>(i), p.domains.list[in.domain].name, static_cast<std::int64_t>(in.function),
               in.p, rep.lhs, rep.grad_term, rep.bdry_term, rep.slack, rep.tolerance,
               std::int64_t{rep.resolution}, std::string(to_string(rep.verdict))});
  }
  res.report.summary = {{"instances", reports.size()}, {"violations", res.violations.size()},
                        {"min_slack", min_slack}, {"resolution", p.resolution}};
  res.report.tables.emplace_back("", std::move(t));
  res.messages.push_back("tlsi-verify: " + std::to_string(reports.size()) + " instances, " +
                         std::to_string(res.violations.size()) + " violations");
  return res;
}

// ---------------------------------------------------- dirichlet-sharpness

struct DirichletParams {
  NamedDomains domains;
  int resolution = 256;
};

DirichletParams parse_dirichlet(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  DirichletParams p;
  p.domains = domains_from(r, "domains");
  p.resolution = static_cast<int>(bounded_int(r, "resolution", 256, 16, 4096));
  r.finish();
  return p;
}

CommandResult run_dirichlet(const ExperimentManifest& m, unsigned workers) {
  const auto p = parse_dirichlet(m);
  CommandResult res = start(m);
  const auto out = parallel_map<DirichletConstants>(p.domains.list.size(), [&](std::size_t i) {
    return dirichlet_lsi_constants(p.domains.list[i].domain, p.resolution);
  }, workers);
  CsvTable t({"domain", "volume", "prop_constant", "classical_bound", "ratio", "error", "verdict"});
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& d = out[i];
    // prop_constant <= classical_bound, equality only for balls
    const bool ok = d.ratio - 1.0 <= m.tolerance_scale * d.error + 1e-12;
    if (!ok)
      violation(res, p.domains.list[i].name + ": ratio " + format_number(d.ratio) + " exceeds 1 by more than " +
                         format_number(m.tolerance_scale * d.error));
    t.add_row({p.domains.list[i].name, p.domains.list[i].domain.volume(), d.prop_constant, d.classical_bound,
               d.ratio, d.error, verdict_text(ok)});
    res.messages.push_back("dirichlet-sharpness: " + p.domains.list[i].name + " ratio " + format_number(d.ratio));
  }
  res.report.tables.emplace_back("", std::move(t));
  return res;
}

// ------------------------------------------------------------- brenier-1d

struct BrenierParams {
  std::vector<TestFunction> functions;
  double a = 0.0, b = 1.0;
  std::vector<double> ps;
  int nodes = 4097;
};

BrenierParams parse_brenier(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  BrenierParams p;
  p.functions = functions_for_dim(r.raw("functions"), r.child_path("functions"), 1);
  if (r.has("interval")) {
    const auto iv = r.numbers("interval");
    if (iv.size() != 2 || !(iv[1] > iv[0])) r.fail("interval", "expected [a, b] with a < b");
    p.a = iv[0];
    p.b = iv[1];
  }
  p.ps = number_list(r, "p", {1.5, 2.0, 3.0});
  check_p(r, "p", p.ps, false);
  p.nodes = static_cast<int>(bounded_int(r, "nodes", 4097, 9, 1 << 22));
  if (p.nodes % 2 == 0) r.fail("nodes", "must be odd");
  r.finish();
  return p;
}

CommandResult run_brenier(const ExperimentManifest& m, unsigned workers) {
  const auto p = parse_brenier(m);
  CommandResult res = start(m);
  const std::size_t np = p.ps.size();
  const auto chains = parallel_map<BrenierChain1D>(p.functions.size() * np, [&](std::size_t k) {
    return brenier_chain_check_1d(p.functions[k / np], p.a, p.b, p.ps[k % np], p.nodes, m.tolerance_scale);
  }, workers);
  CsvTable t({"instance", "function", "p", "step", "lhs", "rhs", "slack", "tolerance", "identity", "pass"});
  int failed = 0;
  for (std::size_t k = 0; k < chains.size(); ++k) {
    const auto& ch = chains[k];
    for (const auto& s : ch.steps)
      t.add_row({static_cast<std::int64_t>(k), static_cast<std::int64_t>(k / np), ch.p, s.name, s.lhs, s.rhs,
                 s.slack, s.tolerance, std::int64_t{s.identity}, std::int64_t{s.pass}});
    res.report.records.push_back({{"instance", k}, {"p", ch.p}, {"R", ch.R}, {"tv_distance", ch.tv_distance},
                                  {"total_slack", ch.total_slack}, {"pass", ch.pass}});
    if (!ch.pass) {
      ++failed;
      std::string which;
      for (const auto& s : ch.steps)
        if (!s.pass) which += " " + s.name + " (slack " + format_number(s.slack) + ")";
      if (ch.tv_distance > 1e-3) which += " push-forward TV " + format_number(ch.tv_distance);
      violation(res, "chain " + std::to_string(k) + " p=" + format_number(ch.p) + ":" + which);
    }
  }
  res.report.summary = {{"chains", chains.size()}, {"failed", failed}};
  res.report.tables.emplace_back("", std::move(t));
  res.messages.push_back("brenier-1d: " + std::to_string(chains.size() - static_cast<std::size_t>(failed)) + "/" +
                         std::to_string(chains.size()) + " chains pass");
  return res;
}

// ---------------------------------------------------------- concentration

struct ConcentrationParams {
  std::optional<ConvexBody> body;
  std::vector<LipschitzFunctional> functionals;
  std::int64_t m = 100'000;
  std::vector<double> t_grid;
  bool tau1 = false;
  int random_directions = 0;
};

ConcentrationParams parse_concentration(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  ConcentrationParams p;
  p.body = body_from_json(r.object("body"));
  const int n = p.body->dim();
  if (r.has("functionals")) {
    const Json& fs = r.raw("functionals");
    if (!fs.is_array() || fs.empty()) r.fail("functionals", "expected a non-empty array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const std::string path = r.element_path("functionals", i);
      if (fs[i].is_string()) {
        const auto s = fs[i].get<std::string>();
        if (s == "norm") {
          p.functionals.push_back(LipschitzFunctional::norm());
        } else if (s.size() > 1 && s[0] == 'x' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
          const int idx = std::stoi(s.substr(1));
          if (idx < 1 || idx > n) throw SchemaError(path, "coordinate out of range");
          p.functionals.push_back(LipschitzFunctional::coordinate(idx - 1));
        } else {
          throw SchemaError(path, "expected \"norm\", \"x<i>\" or {\"direction\": [...]}");
        }
      } else {
        JsonReader d(fs[i], path);
        const auto u = d.numbers("direction");
        d.finish();
        if (static_cast<int>(u.size()) != n) throw SchemaError(path, "direction dimension mismatch");
        try {
          p.functionals.push_back(
              LipschitzFunctional::along(Eigen::Map<const Vector>(u.data(), static_cast<Eigen::Index>(n))));
        } catch (const InvalidArgument& e) {
          throw SchemaError(path, e.what());
        }
      }
    }
  } else {
    p.functionals = {LipschitzFunctional::coordinate(0), LipschitzFunctional::norm()};
  }
  p.m = bounded_int(r, "m", 100'000, 10'000, 100'000'000);
  if (r.has("t_grid")) {
    p.t_grid = r.numbers("t_grid");
    for (std::size_t k = 0; k < p.t_grid.size(); ++k)
      if (!(p.t_grid[k] > 0.0) || (k > 0 && !(p.t_grid[k] > p.t_grid[k - 1])))
        r.fail("t_grid", "must be positive and increasing");
  }
  p.tau1 = r.boolean("tau1", false);
  p.random_directions = static_cast<int>(bounded_int(r, "random_directions", 0, 0, 10'000));
  r.finish();
  return p;
}

CommandResult run_concentration(const ExperimentManifest& m, unsigned workers) {
  const auto p = parse_concentration(m);
  CommandResult res = start(m);
  const auto fits = parallel_map<ConcentrationFit>(p.functionals.size(), [&](std::size_t i) {
    return concentration_profile(*p.body, p.functionals[i], p.t_grid, p.m, m.seed);
  }, workers);
  CsvTable t({"functional", "t", "raw_tail", "tail", "count", "usable"});
  Json alphas = Json::object();
  for (std::size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    const std::string name = p.functionals[i].name() + (p.functionals[i].kind ==
                             LipschitzFunctional::Kind::direction ? "#" + std::to_string(i) : "");
    std::vector<char> usable(f.t_grid.size(), 0);
    for (int k : f.usable_points) usable[static_cast<std::size_t>(k)] = 1;
    for (std::size_t k = 0; k < f.t_grid.size(); ++k)
      t.add_row({name, f.t_grid[k], f.raw_tails[k], f.tails[k], f.counts[k], std::int64_t{usable[k]}});
    alphas[name] = {{"alpha_hat", f.alpha_hat}, {"std_error", f.alpha_std_error}, {"mean", f.mean}};
    res.messages.push_back("concentration: " + name + " alpha_hat = " + format_number(f.alpha_hat));
  }
  res.report.summary = {{"alpha", alphas}};
  res.report.tables.emplace_back("", std::move(t));
  if (p.tau1) {
    Tau1ProxyOptions opt;
    opt.random_directions = p.random_directions;
    const auto proxy = tau1_proxy(*p.body, p.m, derive_seed(m.seed, 0x7A1), opt);
    CsvTable tt({"probe", "alpha_hat"});
    for (std::size_t i = 0; i < proxy.probes.size(); ++i) tt.add_row({proxy.probes[i], proxy.alphas[i]});
    res.report.summary["tau1_proxy"] = proxy.value.value;
    res.report.summary["tau1_proxy_std_error"] = proxy.value.std_error;
    res.report.tables.emplace_back("tau1", std::move(tt));
    res.messages.push_back("concentration: tau1 proxy = " + format_number(proxy.value.value));
  }
  return res;
}

// ----------------------------------------------------------- lemma1-audit

struct Lemma1Params {
  std::optional<ConvexBody> K, B;
  Lemma1Options options;
};

Lemma1Params parse_lemma1(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  Lemma1Params p;
  p.K = body_from_json(r.object("K"));
  p.B = body_from_json(r.object("B"));
  if (p.K->dim() != p.B->dim()) r.fail("B", "dimension differs from K");
  p.options.ot_samples = bounded_int(r, "ot_samples", 1024, 2, kExactSolverCap);
  p.options.moment_samples = bounded_int(r, "moment_samples", 200'000, 1000, 100'000'000);
  p.options.tau_samples = bounded_int(r, "tau_samples", 400'000, 10'000, 100'000'000);
  r.finish();
  p.options.sigmas = 4.0 * man.tolerance_scale;
  return p;
}

CommandResult run_lemma1(const ExperimentManifest& m, unsigned) {
  const auto p = parse_lemma1(m);
  CommandResult res = start(m);
  const auto a = lemma1_audit(*p.K, *p.B, m.seed, p.options);
  CsvTable t({"step", "lhs", "rhs", "std_error", "verdict"});
  for (const auto& s : a.steps) {
    const std::string v = s.asserted ? verdict_text(s.pass) : "RECORDED";
    t.add_row({s.name, s.lhs, s.rhs, s.std_error, v});
    res.report.records.push_back({{"name", s.name}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"stderr", s.std_error},
                                  {"verdict", v}});
    if (s.asserted && !s.pass)
      violation(res, s.name + ": " + format_number(s.lhs) + " > " + format_number(s.rhs) + " + " +
                         format_number(p.options.sigmas) + " stderr");
  }
  res.report.summary = {{"v", a.v}, {"entropy", a.entropy}, {"tau_proxy", a.tau_proxy.value},
                        {"L_K", a.L_K.value}, {"borell_ratio", a.borell_ratio}, {"tau_upper", a.tau_upper},
                        {"c_implied", a.c_implied}};
  res.report.tables.emplace_back("", std::move(t));
  res.messages.push_back("lemma1-audit: v = " + format_number(a.v) + ", c_implied = " + format_number(a.c_implied));
  return res;
}

// ------------------------------------------------------------------ suite

std::vector<int> parse_suite(const ExperimentManifest& man) {
  JsonReader r(man.params, "params");
  std::vector<int> ids;
  if (r.has("criteria")) {
    ids = r.integers("criteria");
    for (int id : ids)
      if (id < 1 || id > kCriterionCount) r.fail("criteria", "criterion ids are 1.." + std::to_string(kCriterionCount));
  }
  r.finish();
  return ids;
}

CommandResult run_suite_command(const ExperimentManifest& m, unsigned workers,
                                const std::function<void(const std::string&)>& progress) {
  SuiteConfig cfg;
  cfg.seed = m.seed;
  cfg.tolerance_scale = m.tolerance_scale;
  cfg.workers = workers;
  cfg.criteria = parse_suite(m);
  CommandResult res = start(m);
  const auto results = run_suite(cfg, [&](const CriterionResult& r) {
    if (progress) progress(format_line(r));
  });
  CsvTable t({"criterion", "name", "verdict"});
  for (const auto& r : results) {
    t.add_row({std::int64_t{r.id}, r.name, std::string(r.pass ? "PASS" : "FAIL")});
    char name[8];
    std::snprintf(name, sizeof name, "c%02d", r.id);
    res.report.tables.emplace_back(name, r.table);
    res.report.records.push_back({{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    res.report.timing[std::to_string(r.id)] = r.seconds;
    res.messages.push_back(format_line(r));
    if (!r.pass) violation(res, "criterion " + std::to_string(r.id) + " " + r.name + ": " + r.detail);
  }
  res.report.tables.insert(res.report.tables.begin(), {"", std::move(t)});
  return res;
}

}  // namespace

void validate_manifest(const ExperimentManifest& m) {
  const std::string& c = m.command;
  if (c == "ot") parse_ot(m);
  else if (c == "wasserstein") parse_wasserstein(m);
  else if (c == "isotropy") parse_isotropy(m);
  else if (c == "tci-bound") parse_tci_bound(m);
  else if (c == "tlsi-verify") parse_tlsi(m);
  else if (c == "dirichlet-sharpness") parse_dirichlet(m);
  else if (c == "brenier-1d") parse_brenier(m);
  else if (c == "concentration") parse_concentration(m);
  else if (c == "lemma1-audit") parse_lemma1(m);
  else if (c == "suite") parse_suite(m);
  else throw SchemaError("command", "unknown command '" + c + "'");
}

CommandResult run_manifest(const ExperimentManifest& m, unsigned workers,
                           const std::function<void(const std::string&)>& progress) {
  const auto t0 = std::chrono::steady_clock::now();
  CommandResult res;
  const std::string& c = m.command;
  if (c == "ot") res = run_ot(m, workers);
  else if (c == "wasserstein") res = run_wasserstein(m, workers);
  else if (c == "isotropy") res = run_isotropy(m, workers);
  else if (c == "tci-bound") res = run_tci_bound(m, workers);
  else if (c == "tlsi-verify") res = run_tlsi(m, workers);
  else if (c == "dirichlet-sharpness") res = run_dirichlet(m, workers);
  else if (c == "brenier-1d") res = run_brenier(m, workers);
  else if (c == "concentration") res = run_concentration(m, workers);
  else if (c == "lemma1-audit") res = run_lemma1(m, workers);
  else if (c == "suite") res = run_suite_command(m, workers, progress);
  else throw SchemaError("command", "unknown command '" + c + "'");
  res.report.summary["violations"] = res.violations;
  res.report.timing["total_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (progress && c != "suite")
    for (const auto& line : res.messages) progress(line);
  return res;
}

}  // namespace tci
