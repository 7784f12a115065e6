#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "lattice.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace specshift {

namespace {

double get_tol(const json& c, const char* key, double fallback) {
  const double v = c.value(key, fallback);
  require(v > 0, Errc::invalid_argument, std::string(key) + " must be > 0");
  return v;
}

int get_int(const json& c, const char* key, int fallback, int lo, int hi) {
  const int v = c.value(key, fallback);
  require(v >= lo && v <= hi,
          Errc::invalid_argument, std::string(key) + " out of range");
  return v;
}

uint64_t get_seed(const json& c) { return c.value("seed", 12345ull); }

ScalarFunction get_function(const json& c, const char* fallback = "gaussian") {
  if (c.contains("f") && c.at("f").is_object()) return function_from_json(c.at("f"));
  return function_from_spec(c.value("f", fallback));
}

std::vector<int> get_dims(const json& c, std::vector<int> fallback) {
  if (!c.contains("dims")) return fallback;
  auto dims = c.at("dims").get<std::vector<int>>();
  require(!dims.empty(), Errc::invalid_argument, "dims must be nonempty");
  for (int d : dims) require(d >= 1 && d <= 256, Errc::invalid_argument, "dim out of range");
  return dims;
}

HermitianMatrix get_hermitian(const json& c, const char* key, int dim, uint64_t seed,
                              const std::string& kind, double profile_p = 1.0) {
  if (c.contains(key)) {
    const auto& v = c.at(key);
    if (v.is_string()) return load_hermitian(v.get<std::string>());
    return hermitian_from_json(v);
  }
  Rng rng(seed);
  if (kind == "gue") return random_gue(dim, rng);
  if (kind == "weak_profile") return random_weak_profile(dim, profile_p, rng);
  fail(Errc::invalid_argument, "unknown ensemble kind: " + kind);
}

struct SubReport {
  json results;
  std::map<std::string, std::string> tables;
  bool pass = false;
};

// dd-scale normalization: |f^[n]| <= sup|f^{(n)}| / n!
double dd_scale(const ScalarFunction& f, int n, double value_mag) {
  double fact = 1;
  for (int j = 2; j <= n; ++j) fact *= j;
  const double sup = f.sup_derivative(n);
  const double bound = std::isfinite(sup) ? sup / fact : 0.0;
  return std::max({value_mag, bound, 1e-30});
}

SubReport run_divdiff(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int n = get_int(c, "n", 2, 1, 6);
  require(c.contains("lambda"), Errc::invalid_argument, "divdiff needs a lambda array");
  const auto lam = c.at("lambda").get<std::vector<double>>();
  require(static_cast<int>(lam.size()) == n + 1, Errc::invalid_argument,
          "lambda must hold n+1 values");
  const LambdaTuple tuple = LambdaTuple::make(lam);
  const int level = get_int(c, "level", 10, 1, 16);
  const double truncation = get_tol(c, "truncation", 16.0);
  const double tol = get_tol(c, "tol", 1e-4);

  const DivDiffValue rec = divdiff_recursive(f, tuple);
  const double scale = dd_scale(f, n, std::abs(rec.value));

  CsvBuilder csv({"route", "re", "im", "rel_discrepancy_vs_recursive", "note"});
  csv.row({"recursive", format_double(rec.value.real()), format_double(rec.value.imag()),
           "0", rec.coalescence_switched ? "coalescence_switch" : ""});
  json routes;
  routes["recursive"] = {rec.value.real(), rec.value.imag()};

  double worst = 0;
  const auto want = [&](const std::string& name) {
    if (!c.contains("routes") || c.at("routes").is_null()) return true;
    if (c.at("routes").is_string()) {
      const auto s = c.at("routes").get<std::string>();
      return s == "all" || s.find(name) != std::string::npos;
    }
    for (const auto& r : c.at("routes"))
      if (r.get<std::string>() == name) return true;
    return false;
  };

  if (want("rational") && f.kind() == ScalarFunction::Kind::rational) {
    const cx v = divdiff_rational(f, tuple);
    const double d = std::abs(v - rec.value) / scale;
    worst = std::max(worst, d);
    csv.row({"rational", format_double(v.real()), format_double(v.imag()),
             format_double(d), ""});
    routes["rational"] = {v.real(), v.imag()};
  }
  if (want("simplex")) {
    const SimplexValue v = divdiff_simplex(f, tuple, std::min(tol, 1e-7) * scale);
    const double d = std::abs(v.value - rec.value) / scale;
    worst = std::max(worst, d);
    csv.row({"simplex", format_double(v.value.real()), format_double(v.value.imag()),
             format_double(d), v.converged ? "" : "quadrature_budget"});
    routes["simplex"] = {v.value.real(), v.value.imag()};
    routes["simplex_error_estimate"] = v.error_estimate;
  }
  if (want("fourier") && f.kind() == ScalarFunction::Kind::gaussian) {
    const ConeValue v = divdiff_fourier_cone(f, tuple, level, truncation);
    const double d = std::abs(v.value - rec.value) / scale;
    worst = std::max(worst, d);
    csv.row({"fourier", format_double(v.value.real()), format_double(v.value.imag()),
             format_double(d), ""});
    routes["fourier"] = {v.value.real(), v.value.imag()};
    routes["fourier_tail_bound"] = v.tail_bound;
  }

  rep.results["routes"] = std::move(routes);
  rep.results["max_relative_discrepancy"] = worst;
  rep.results["scale"] = scale;
  rep.results["coalescence_switched"] = rec.coalescence_switched;
  rep.tables["routes"] = csv.text();
  rep.pass = worst <= tol;
  return rep;
}

SubReport run_moi(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int n = get_int(c, "n", 1, 1, 3);
  const int dim = get_int(c, "dim", 4, 1, 16);
  const uint64_t seed = get_seed(c);
  const int m_max = get_int(c, "levels", 12, 2, 14);
  const double tol = get_tol(c, "tol", 1e-3);

  const HermitianMatrix h = get_hermitian(c, "H", dim, derive_seed(seed, 0), "gue");
  std::vector<CMat> args;
  for (int j = 0; j < n; ++j) {
    Rng rng(derive_seed(seed, 1 + j));
    args.push_back(random_gue(h.dim(), rng).mat());
  }
  MoiRequest req{MoiSymbol::divided_difference(f, n), h, args, m_max,
                 get_tol(c, "truncation", 16.0), tol};
  const MoiResult res = moi_dyadic(req);
  const double oracle_norm = std::max(res.reference.frobenius_norm(), 1e-300);

  CsvBuilder csv({"m", "norm_Sm_fro", "err_vs_spectral_fro", "rel_err", "tail_bound"});
  for (int m = 1; m <= m_max; ++m)
    csv.row_values({static_cast<double>(m), res.level_norms[m - 1], res.level_errors[m - 1],
                    res.level_errors[m - 1] / oracle_norm, res.tail_bound});
  rep.tables["levels"] = csv.text();
  rep.results["fitted_order"] = res.fitted_order;
  rep.results["final_rel_err"] = res.level_errors.back() / oracle_norm;
  rep.results["tail_bound"] = res.tail_bound;
  rep.results["converged"] = res.converged;
  rep.results["note"] = res.note;
  rep.pass = res.converged;
  return rep;
}

SubReport run_deriv(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int n = get_int(c, "n", 1, 1, 3);
  const int dim = get_int(c, "dim", 6, 1, 24);
  const uint64_t seed = get_seed(c);
  const double tol_fd = get_tol(c, "tol", 1e-5);

  const HermitianMatrix h = get_hermitian(c, "H", dim, derive_seed(seed, 0), "gue");
  const HermitianMatrix v = get_hermitian(c, "V", dim, derive_seed(seed, 1), "gue");
  const PerturbationPair pair(h, v);

  const CMat via_moi = gateaux_derivative_moi(f, pair, n);
  const double scale = std::max(via_moi.frobenius_norm(), 1e-30);
  CsvBuilder csv({"route", "norm_fro", "rel_err_vs_moi"});
  csv.row({"moi", format_double(via_moi.frobenius_norm()), "0"});

  double worst = 0;
  {
    const CMat via_fd = gateaux_derivative_fd_complex(f, pair, n);
    const double d = (via_fd - via_moi).frobenius_norm() / scale;
    worst = std::max(worst, d);
    csv.row({"fd", format_double(via_fd.frobenius_norm()), format_double(d)});
    rep.results["rel_err_fd"] = d;
  }
  if (f.kind() == ScalarFunction::Kind::rational) {
    CMat via_res(pair.dim());
    for (const auto& t : f.rational_terms())
      via_res += t.coef * resolvent_derivative(t.order, t.pole, pair, n);
    const double d = (via_res - via_moi).frobenius_norm() / scale;
    worst = std::max(worst, d);
    csv.row({"resolvent", format_double(via_res.frobenius_norm()), format_double(d)});
    rep.results["rel_err_resolvent"] = d;
  }
  rep.tables["routes"] = csv.text();
  rep.results["max_rel_err"] = worst;
  rep.pass = worst <= tol_fd;
  return rep;
}

SubReport run_remainder(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int n = get_int(c, "n", 2, 1, 4);
  const int dim = get_int(c, "dim", 6, 1, 24);
  const uint64_t seed = get_seed(c);
  std::vector<double> scales = c.value("scales", std::vector<double>{0.2, 0.1, 0.05, 0.025});
  require(scales.size() >= 2, Errc::invalid_argument, "remainder needs >= 2 scales");
  for (double s : scales) require(s > 0, Errc::invalid_argument, "scales must be > 0");
  const double window = get_tol(c, "tol", 0.25);

  const HermitianMatrix h = get_hermitian(c, "H", dim, derive_seed(seed, 0), "gue");
  const HermitianMatrix v0 = get_hermitian(c, "V", dim, derive_seed(seed, 1), "gue");

  CsvBuilder csv({"s", "remainder_norm_fro", "ratio_to_previous"});
  std::vector<double> norms;
  for (double s : scales) {
    const PerturbationPair pair(h, HermitianMatrix::trusted(cx(s) * v0.mat()));
    norms.push_back(taylor_remainder(f, pair, n).frobenius_norm());
    csv.row_values({s, norms.back(),
                    norms.size() > 1 ? norms[norms.size() - 2] / norms.back() : 0.0});
  }
  const double expect = std::pow(2.0, n);
  const double last_ratio = norms[norms.size() - 2] / norms.back();
  rep.tables["scaling"] = csv.text();
  rep.results["expected_ratio"] = expect;
  rep.results["last_ratio"] = last_ratio;
  rep.pass = last_ratio >= expect * (1.0 - window) && last_ratio <= expect * (1.0 + window);
  return rep;
}

SubReport run_ssf(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int dim = get_int(c, "dim", 20, 1, 128);
  const uint64_t seed = get_seed(c);
  const double tol = get_tol(c, "tol", 1e-8);

  const HermitianMatrix h = get_hermitian(c, "H", dim, derive_seed(seed, 0), "gue");
  const HermitianMatrix v = get_hermitian(c, "V", dim, derive_seed(seed, 1), "gue");
  const PerturbationPair pair(h, v);

  const StepFunction xi = krein_ssf(pair);
  const double tr_v = pair.V.mat().trace().real();
  const double mass_err = std::abs(xi.integral() - tr_v) / std::max(1.0, std::abs(tr_v));
  const KreinResidual kr = krein_residual(f, pair);

  CsvBuilder csv({"breakpoint", "value_on_right"});
  for (size_t i = 0; i < xi.breakpoints.size(); ++i)
    csv.row_values({xi.breakpoints[i], i < xi.values.size() ? xi.values[i] : 0.0});
  rep.tables["xi"] = csv.text();
  rep.results["xi"] = step_function_to_json(xi);
  rep.results["integral_xi"] = xi.integral();
  rep.results["trace_V"] = tr_v;
  rep.results["mass_rel_err"] = mass_err;
  rep.results["krein_residual"] = kr.residual;
  rep.results["krein_scale"] = kr.scale;
  rep.pass = kr.residual <= tol * kr.scale && mass_err <= 1e-10;
  return rep;
}

SubReport run_cyclic(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int n = get_int(c, "n", 2, 1, 3);
  const int dim = get_int(c, "dim", 5, 1, 16);
  const int trials = get_int(c, "trials", 20, 1, 10000);
  const uint64_t seed = get_seed(c);
  const double tol = get_tol(c, "tol", 1e-9);

  std::vector<double> residuals(trials);
  parallel_for_index(trials, [&](long t) {
    Rng rng(derive_seed(seed, t));
    const HermitianMatrix h = random_gue(dim, rng);
    const HermitianMatrix v = random_gue(dim, rng);
    residuals[t] = cyclic_identity_residual(f, PerturbationPair(h, v), n);
  });
  CsvBuilder csv({"trial", "relative_residual"});
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    worst = std::max(worst, residuals[t]);
    csv.row_values({static_cast<double>(t), residuals[t]});
  }
  rep.tables["residuals"] = csv.text();
  rep.results["max_relative_residual"] = worst;
  rep.pass = worst <= tol;
  return rep;
}

SubReport run_scan(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int n = get_int(c, "n", 2, 1, 3);
  const int trials = get_int(c, "trials", 20, 1, 10000);
  const uint64_t seed = get_seed(c);
  const double growth_tol = get_tol(c, "growth_tol", 2.0);
  const std::vector<int> dims = get_dims(c, {8, 16, 32, 64});
  const std::string kind = c.value("ideal", "weak");
  const IdealSpec ideal = kind == "dmconvex" ? IdealSpec::dm_convex(n)
                                             : IdealSpec::weak_schatten(n);

  const EstimateReport er = estimate_scan(f, n, ideal, dims, trials, seed);
  CsvBuilder csv({"dim", "max_trace_ratio", "max_trace_ratio_normalized", "max_tphi_ratio"});
  for (size_t i = 0; i < er.dims.size(); ++i)
    csv.row_values({static_cast<double>(er.dims[i]), er.max_trace_ratio[i],
                    er.max_trace_ratio_normalized[i], er.max_tphi_ratio[i]});
  rep.tables["scan"] = csv.text();
  rep.results["ideal"] = er.ideal;
  rep.results["fitted_constant"] = er.fitted_constant;
  rep.results["trace_growth_factor"] = er.trace_growth_factor;
  rep.results["tphi_growth_factor"] = er.tphi_growth_factor;
  rep.pass = er.trace_growth_factor <= growth_tol &&
             (n < 2 || er.tphi_growth_factor <= growth_tol);
  return rep;
}

SubReport run_norms(const json& c) {
  SubReport rep;
  CMat a(1);
  if (c.contains("matrix")) {
    const auto& m = c.at("matrix");
    a = m.is_string() ? load_matrix(m.get<std::string>()) : matrix_from_json(m);
  } else {
    const int dim = get_int(c, "dim", 8, 1, 256);
    Rng rng(get_seed(c));
    a = c.value("ensemble", "gue") == "ginibre" ? random_ginibre(dim, rng)
                                                : random_gue(dim, rng).mat();
  }
  const IdealNormReport rn = ideal_norm_report(a);
  json norms;
  bool finite = true;
  CsvBuilder csv({"norm", "value"});
  for (const auto& [name, value] : rn.norms) {
    norms[name] = value;
    finite = finite && std::isfinite(value);
    csv.row({name, format_double(value)});
  }
  rep.results["singular_values"] = rn.singular_values;
  rep.results["norms"] = std::move(norms);
  rep.tables["norms"] = csv.text();
  rep.pass = finite;
  return rep;
}

SubReport run_propcheck(const json& c) {
  SubReport rep;
  const int dim = get_int(c, "dim", 4, 1, 32);
  const int trials = get_int(c, "trials", 1000, 1, 1000000);
  const QuasinormReport qr = quasinorm_property_suite(dim, trials, get_seed(c));
  CsvBuilder csv({"inequality", "lhs", "rhs", "trial_seed"});
  for (const auto& v : qr.violations)
    csv.row({v.inequality, format_double(v.lhs), format_double(v.rhs),
             std::to_string(v.trial_seed)});
  rep.tables["violations"] = csv.text();
  rep.results["trials"] = qr.trials;
  rep.results["checks"] = qr.checks;
  rep.results["violations"] = qr.violations.size();
  rep.results["max_relative_excess"] = qr.max_relative_excess;
  rep.pass = qr.violations.empty();
  return rep;
}

SubReport run_interp(const json& c) {
  SubReport rep;
  const ScalarFunction f = get_function(c);
  const int n = get_int(c, "n", 2, 2, 4);
  const int trials = get_int(c, "trials", 12, 1, 10000);
  const uint64_t seed = get_seed(c);
  const double growth_tol = get_tol(c, "growth_tol", 2.0);
  const std::vector<int> dims = get_dims(c, {4, 8, 16, 32});
  std::vector<double> alphas = c.value("alphas", std::vector<double>(n, static_cast<double>(n)));
  require(static_cast<int>(alphas.size()) == n, Errc::invalid_argument,
          "alphas must list one exponent per argument");
  double inv = 0;
  for (double a : alphas) inv += 1.0 / a;
  const double alpha_out = 1.0 / inv;

  // R = T_{f^[n]} with a fresh GUE base per dimension
  InterpolationReport ir;
  {
    std::vector<HermitianMatrix> bases;
    for (int d : dims) {
      Rng rng(derive_seed(seed, 1000 + d));
      bases.push_back(random_gue(d, rng));
    }
    auto map = [&](std::span<const CMat> xs) {
      const int d = xs[0].dim();
      size_t which = 0;
      for (size_t i = 0; i < bases.size(); ++i)
        if (bases[i].dim() == d) which = i;
      MoiRequest req{MoiSymbol::divided_difference(f, n), bases[which],
                     {xs.begin(), xs.end()}};
      return moi_spectral(req).value;
    };
    ir = interpolation_check(map, n, alphas, alpha_out, dims, trials, seed);
  }
  CsvBuilder csv({"dim", "max_ratio", "mean_ratio"});
  for (size_t i = 0; i < ir.dims.size(); ++i)
    csv.row_values({static_cast<double>(ir.dims[i]), ir.max_ratio[i], ir.mean_ratio[i]});
  rep.tables["ratios"] = csv.text();
  rep.results["fitted_constant"] = ir.fitted_constant;
  rep.results["growth_factor"] = ir.growth_factor;
  rep.pass = ir.growth_factor <= growth_tol;
  return rep;
}

}  // namespace

RunOutcome run_config(const json& config) {
  require(config.is_object(), Errc::parse, "config must be a json object");
  require(config.contains("subcommand"), Errc::parse, "config needs a 'subcommand'");
  const std::string sub = config.at("subcommand").get<std::string>();

  const auto t0 = std::chrono::steady_clock::now();
  SubReport sr;
  if (sub == "divdiff") sr = run_divdiff(config);
  else if (sub == "moi") sr = run_moi(config);
  else if (sub == "deriv") sr = run_deriv(config);
  else if (sub == "remainder") sr = run_remainder(config);
  else if (sub == "ssf") sr = run_ssf(config);
  else if (sub == "cyclic") sr = run_cyclic(config);
  else if (sub == "scan") sr = run_scan(config);
  else if (sub == "norms") sr = run_norms(config);
  else if (sub == "propcheck") sr = run_propcheck(config);
  else if (sub == "interp") sr = run_interp(config);
  else fail(Errc::parse, "unknown subcommand: " + sub);
  const auto t1 = std::chrono::steady_clock::now();

  RunOutcome out;
  out.pass = sr.pass;
  json report;
  report["config"] = config;
  report["config_hash"] = json_fingerprint(config);
  report["results"] = std::move(sr.results);
  json tables;
  for (const auto& [name, text] : sr.tables) tables[name] = text;
  report["tables"] = std::move(tables);
  report["pass"] = sr.pass;
  report["report_hash"] = json_fingerprint(report);  // over the deterministic payload
  report["timings_ms"] = {
      {sub, std::chrono::duration<double, std::milli>(t1 - t0).count()}};
  out.report = std::move(report);
  return out;
}

}  // namespace specshift
