#include "moi.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "eigh.hpp"

namespace specshift {

MoiSymbol MoiSymbol::divided_difference(ScalarFunction fn, int order) {
  require(order >= 1, Errc::invalid_argument, "divided difference order must be >= 1");
  MoiSymbol s;
  s.kind = Kind::divided_difference;
  s.f = std::move(fn);
  s.dd_order = order;
  s.lambda_arity = order + 1;
  return s;
}

MoiSymbol MoiSymbol::phi(ScalarFunction fn, int order) {
  require(order >= 1, Errc::invalid_argument, "phi order must be >= 1");
  MoiSymbol s;
  s.kind = Kind::phi;
  s.f = std::move(fn);
  s.dd_order = order;
  s.lambda_arity = order;
  return s;
}

MoiSymbol MoiSymbol::custom_symbol(int lambda_arity,
                                   std::function<cx(std::span<const double>)> fn) {
  require(lambda_arity >= 1, Errc::invalid_argument, "symbol needs at least one slot");
  MoiSymbol s;
  s.kind = Kind::custom;
  s.lambda_arity = lambda_arity;
  s.custom = std::move(fn);
  return s;
}

cx MoiSymbol::eval(std::span<const double> lambdas) const {
  require(static_cast<int>(lambdas.size()) == lambda_arity, Errc::invalid_argument,
          "symbol arity mismatch");
  switch (kind) {
    case Kind::divided_difference:
      return divdiff_recursive(*f, LambdaTuple::make({lambdas.begin(), lambdas.end()})).value;
    case Kind::phi: {
      std::vector<double> doubled;
      doubled.reserve(lambdas.size() + 1);
      doubled.push_back(lambdas[0]);
      doubled.insert(doubled.end(), lambdas.begin(), lambdas.end());
      return cx(0, -1) * divdiff_recursive(*f, LambdaTuple::make(std::move(doubled))).value;
    }
    case Kind::custom:
      return custom(lambdas);
  }
  return 0;
}

namespace {

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Confluent tables over a fixed node set with cached derivative values;
// tuples are sorted so repeated cluster ids sit adjacent.
class SymbolTable {
 public:
  SymbolTable(const MoiSymbol& sym, std::span<const double> nodes) : sym_(sym) {
    nodes_.assign(nodes.begin(), nodes.end());
    if (sym_.kind != MoiSymbol::Kind::custom) {
      const int maxd = sym_.dd_order + 1;
      dcache_.resize(nodes_.size());
      for (size_t c = 0; c < nodes_.size(); ++c) {
        dcache_[c].resize(maxd + 1);
        for (int j = 0; j <= maxd; ++j)
          dcache_[c][j] = sym_.f->derivative(nodes_[c], j) / factorial(j);
      }
    }
  }

  // value at the tuple of node ids (size = lambda_arity)
  cx eval_ids(std::span<const int> ids) const {
    if (sym_.kind == MoiSymbol::Kind::custom) {
      std::vector<double> lam(ids.size());
      for (size_t i = 0; i < ids.size(); ++i) lam[i] = nodes_[ids[i]];
      return sym_.custom(lam);
    }
    int sorted[8];
    int count = 0;
    if (sym_.kind == MoiSymbol::Kind::phi) sorted[count++] = ids[0];
    for (int id : ids) sorted[count++] = id;
    std::sort(sorted, sorted + count);
    const cx v = table(sorted, count);
    return sym_.kind == MoiSymbol::Kind::phi ? cx(0, -1) * v : v;
  }

 private:
  cx table(const int* ids, int count) const {
    // Newton table over sorted node ids; equal ids take the derivative branch.
    cx t[8][8];
    for (int i = 0; i < count; ++i) t[i][0] = dcache_[ids[i]][0];
    for (int j = 1; j < count; ++j) {
      for (int i = 0; i + j < count; ++i) {
        if (ids[i + j] != ids[i]) {
          t[i][j] = (t[i + 1][j - 1] - t[i][j - 1]) / (nodes_[ids[i + j]] - nodes_[ids[i]]);
        } else {
          t[i][j] = dcache_[ids[i]][j];
        }
      }
    }
    return t[0][count - 1];
  }

  const MoiSymbol& sym_;
  std::vector<double> nodes_;
  std::vector<std::vector<cx>> dcache_;
};

// Elementwise assembly in the eigenbasis:
//   out_{i0 iq} = sum over paths (i0..iq) symval(cluster ids) prod_j X_j[i_{j-1}, i_j]
CMat assemble_paths(const SpectralDecomposition& dec, const std::vector<CMat>& xs,
                    const std::function<cx(std::span<const int>)>& symval) {
  const int d = dec.dim;
  const int q = static_cast<int>(xs.size());
  CMat out(d);
  std::vector<int> ids(q + 1);
  std::function<void(int, int, cx, int)> walk = [&](int depth, int prev, cx partial, int row) {
    if (depth > q) {
      out(row, prev) += partial * symval(std::span<const int>(ids.data(), q + 1));
      return;
    }
    for (int i = 0; i < d; ++i) {
      const cx e = xs[depth - 1](prev, i);
      if (e == cx{}) continue;
      ids[depth] = dec.cluster_of[i];
      walk(depth + 1, i, partial * e, row);
    }
  };
  for (int i0 = 0; i0 < d; ++i0) {
    ids[0] = dec.cluster_of[i0];
    walk(1, i0, cx(1.0), i0);
  }
  return out;
}

void validate_request(const MoiRequest& req) {
  const int q = req.symbol.arg_count();
  require(static_cast<int>(req.args.size()) == q, Errc::invalid_argument,
          "argument count does not match the symbol arity");
  for (const auto& x : req.args)
    require(x.dim() == req.base.dim(), Errc::invalid_argument,
            "argument dimension does not match the base");
}

long ipow_l(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

MoiResult moi_spectral(const MoiRequest& req) {
  validate_request(req);
  const SpectralDecomposition dec = eigh(req.base, req.cluster_tol);
  const int q = req.symbol.arg_count();
  const SymbolTable table(req.symbol, dec.eigenvalues);

  MoiResult out;
  if (q == 0) {
    // zero-argument integral: functional calculus with the symbol
    CMat acc(dec.dim);
    for (int c = 0; c < dec.cluster_count(); ++c) {
      const int ids[1] = {c};
      acc += table.eval_ids(std::span<const int>(ids, 1)) * dec.projections[c];
    }
    out.value = std::move(acc);
    return out;
  }

  std::vector<CMat> xs;
  xs.reserve(q);
  for (const auto& x : req.args) xs.push_back(dec.to_eigenbasis(x));

  const int k = dec.cluster_count();
  const int slots = req.symbol.lambda_arity;
  const long memo_size = ipow_l(k, slots);
  if (memo_size <= (1L << 22)) {
    std::vector<cx> memo(memo_size);
    std::vector<int> ids(slots, 0);
    for (long code = 0; code < memo_size; ++code) {
      long c = code;
      for (int j = slots - 1; j >= 0; --j) {
        ids[j] = static_cast<int>(c % k);
        c /= k;
      }
      memo[code] = table.eval_ids(ids);
    }
    auto symval = [&](std::span<const int> t) {
      long code = 0;
      for (int id : t) code = code * k + id;
      return memo[code];
    };
    out.value = dec.from_eigenbasis(assemble_paths(dec, xs, symval));
  } else {
    auto symval = [&](std::span<const int> t) { return table.eval_ids(t); };
    out.value = dec.from_eigenbasis(assemble_paths(dec, xs, symval));
  }
  return out;
}

namespace {

// Two-cone scalar dyadic value of the symbol at one eigenvalue tuple.
cx symbol_cone_value(const MoiSymbol& sym, std::span<const double> lam, int level,
                     double truncation) {
  const ScalarFunction& f = *sym.f;
  auto psi = [&](double t) { return f.fourier(t); };
  const bool weighted = sym.kind == MoiSymbol::Kind::phi;
  const int n = sym.dd_order;
  const cx plus =
      scalar_cone_sum(lam, level, truncation, +1.0, psi, BoundaryWeighting::half_face, weighted);
  const cx minus =
      scalar_cone_sum(lam, level, truncation, -1.0, psi, BoundaryWeighting::half_face, weighted);
  // f^[n]  = i^n     [C+ + (-1)^n C-]
  // phi    = i^{n-1} [W+ + (-1)^n W-]   (W has the t_0 weight)
  const int ipower = weighted ? n - 1 : n;
  cx pref = 1;
  for (int j = 0; j < ipower; ++j) pref *= cx(0, 1);
  const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
  return pref * (plus + sgn * minus);
}

}  // namespace

MoiResult moi_dyadic(const MoiRequest& req) {
  validate_request(req);
  require(req.symbol.kind != MoiSymbol::Kind::custom, Errc::unsupported,
          "dyadic evaluation needs a divided-difference or phi symbol; use the box-sum API "
          "for custom integrands");
  require(req.symbol.f->schwartz(), Errc::unsupported,
          "dyadic evaluation requires the gaussian (Schwartz) family");
  require(req.symbol.arg_count() >= 1, Errc::invalid_argument,
          "dyadic evaluation needs at least one argument");

  MoiResult oracle = moi_spectral(req);
  const SpectralDecomposition dec = eigh(req.base, req.cluster_tol);
  const int q = req.symbol.arg_count();
  const int k = dec.cluster_count();
  const int slots = req.symbol.lambda_arity;

  std::vector<CMat> xs;
  xs.reserve(q);
  for (const auto& x : req.args) xs.push_back(dec.to_eigenbasis(x));

  double weight_sup = 1.0;
  for (const auto& x : req.args) weight_sup *= x.frobenius_norm();

  const ScalarFunction& f = *req.symbol.f;
  const bool weighted = req.symbol.kind == MoiSymbol::Kind::phi;

  MoiResult out;
  out.dyadic = true;
  out.reference = oracle.value;
  const double oracle_norm = oracle.value.frobenius_norm();

  // tail feasibility at the requested truncation (the bound only improves
  // with the level, so level 1 is the worst case)
  {
    const double tail =
        weight_sup * fourier_cone_tail(f, req.symbol.dd_order, 1, req.truncation, weighted);
    if (tail > 0.1 * req.tolerance * std::max(oracle_norm, 1e-30))
      fail(Errc::enlarge_truncation,
           "certified truncation tail exceeds tolerance/10; increase the truncation radius");
  }

  const double noise_floor = std::max(1e-13 * std::max(oracle_norm, 1e-300), 1e-300);
  std::vector<double> lam(slots);
  for (int m = 1; m <= req.m_max; ++m) {
    std::unordered_map<long, cx> memo;
    auto symval = [&](std::span<const int> t) {
      int sorted[8];
      for (int i = 0; i < slots; ++i) sorted[i] = t[i];
      std::sort(sorted, sorted + slots);
      long code = 0;
      for (int i = 0; i < slots; ++i) code = code * k + sorted[i];
      auto it = memo.find(code);
      if (it != memo.end()) return it->second;
      for (int i = 0; i < slots; ++i) lam[i] = dec.eigenvalues[sorted[i]];
      const cx v = symbol_cone_value(req.symbol, lam, m, req.truncation);
      memo.emplace(code, v);
      return v;
    };
    CMat sm = dec.from_eigenbasis(assemble_paths(dec, xs, symval));
    out.level_norms.push_back(sm.frobenius_norm());
    out.level_errors.push_back((sm - oracle.value).frobenius_norm());
    out.tail_bound =
        weight_sup * fourier_cone_tail(f, req.symbol.dd_order, m, req.truncation, weighted);
    if (dec.dim <= 32) out.levels.push_back(sm);
    if (m == req.m_max) out.value = std::move(sm);
  }

  // observed order: least-squares slope of log2(err) over usable levels
  {
    std::vector<double> xs_fit, ys_fit;
    for (int m = 1; m <= req.m_max; ++m) {
      const double e = out.level_errors[m - 1];
      if (e > noise_floor) {
        xs_fit.push_back(m);
        ys_fit.push_back(std::log2(e));
      }
    }
    if (xs_fit.size() >= 3) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(xs_fit.size());
      for (size_t i = 0; i < xs_fit.size(); ++i) {
        sx += xs_fit[i];
        sy += ys_fit[i];
        sxx += xs_fit[i] * xs_fit[i];
        sxy += xs_fit[i] * ys_fit[i];
      }
      out.fitted_order = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    } else {
      // everything at the noise floor: converged faster than measurable
      out.fitted_order = 2.0;
    }
  }

  const double final_rel = out.level_errors.back() / std::max(oracle_norm, 1e-300);
  if (out.fitted_order < 0.3) {
    out.converged = false;
    out.note = "no convergence: fitted order below 0.3";
  } else if (final_rel > req.tolerance) {
    out.converged = false;
    out.note = "final level error above tolerance";
  }
  return out;
}

LatticeIntegrand fourier_moi_integrand(const SpectralDecomposition& dec,
                                       const std::vector<CMat>& args, const ScalarFunction& f,
                                       double sign) {
  const int n = static_cast<int>(args.size());
  require(n >= 0, Errc::invalid_argument, "negative arity");
  LatticeIntegrand u;
  u.order_n = n;
  u.dim = dec.dim;
  // prefactor i^n on the + cone, i^n (-1)^n on the - cone
  cx pref = 1;
  for (int j = 0; j < n; ++j) pref *= cx(0, 1);
  if (sign < 0 && n % 2 == 1) pref = -pref;

  u.weight = [dec, args, sign](std::span<const double> s) {
    CMat w = unitary_exp(dec, sign * s[0]);
    for (size_t j = 0; j < args.size(); ++j)
      w = w * args[j] * unitary_exp(dec, sign * s[j + 1]);
    return w;
  };
  u.density = [f, pref, sign](std::span<const double> s) {
    double total = 0;
    for (double v : s) total += v;
    return pref * f.fourier(sign * total);
  };
  double wsup = 1.0;
  for (const auto& x : args) wsup *= x.frobenius_norm();
  u.weight_sup = args.empty() ? std::sqrt(static_cast<double>(dec.dim)) : wsup;
  u.density_decay.clear();
  for (int alpha = n + 2; alpha <= ScalarFunction::kMaxAlpha; ++alpha)
    u.density_decay.emplace_back(alpha, f.fourier_decay_constant(alpha));
  u.grad_alpha = std::min(n + 2, ScalarFunction::kMaxAlpha);
  u.density_grad_c =
      f.fourier_derivative_decay_constant(static_cast<int>(u.grad_alpha)) * std::sqrt(n + 1.0);
  double hnorm = dec.operator_norm();
  double schatten_prod = 1.0;
  for (const auto& x : args) {
    const auto sv = singular_values_jacobi(x);
    double s = 0;
    for (double v : sv) s += std::pow(v, std::max(n, 1));
    schatten_prod *= std::pow(s, 1.0 / std::max(n, 1));
  }
  u.weight_lipschitz = hnorm * std::sqrt(n + 1.0) * schatten_prod;
  return u;
}

TraceSwapReport trace_swap_check(const MoiRequest& req, const CMat& d) {
  validate_request(req);
  require(req.symbol.kind == MoiSymbol::Kind::divided_difference, Errc::unsupported,
          "trace swap check runs on divided-difference symbols");
  require(req.symbol.f->schwartz(), Errc::unsupported, "gaussian family required");
  const SpectralDecomposition dec = eigh(req.base, req.cluster_tol);
  const int n = req.symbol.dd_order;

  const LatticeIntegrand plus = fourier_moi_integrand(dec, req.args, *req.symbol.f, +1.0);
  const LatticeIntegrand minus = fourier_moi_integrand(dec, req.args, *req.symbol.f, -1.0);

  TraceSwapReport rep;
  const MoiResult oracle = moi_spectral(req);
  rep.scale = std::max({std::abs((d * oracle.value).trace()),
                        d.frobenius_norm() * oracle.value.frobenius_norm(), 1e-30});

  for (int m = 1; m <= req.m_max; ++m) {
    double pts = std::pow(req.truncation * std::pow(2.0, m) + 1.0, n + 1);
    if (pts > 2e6) break;
    const TracedBoxSum a = dyadic_box_sum_traced(plus, d, m, req.truncation);
    const TracedBoxSum b = dyadic_box_sum_traced(minus, d, m, req.truncation);
    const cx tr_of_sum = a.trace_of_sum + b.trace_of_sum;
    const cx sum_of_tr = a.sum_of_traces + b.sum_of_traces;
    rep.max_linearity_residual =
        std::max(rep.max_linearity_residual, std::abs(tr_of_sum - sum_of_tr));
    ++rep.levels_checked;
  }

  MoiResult dy = moi_dyadic(req);
  rep.limit_vs_reference = std::abs((d * dy.value).trace() - (d * oracle.value).trace());
  return rep;
}

}  // namespace specshift
