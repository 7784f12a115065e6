#include "perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "rng.hpp"

namespace specshift {

CMat gateaux_derivative_moi(const ScalarFunction& f, const PerturbationPair& pair, int order) {
  require(order >= 1 && order <= 6, Errc::invalid_argument, "order must be in [1, 6]");
  MoiRequest req{MoiSymbol::divided_difference(f, order), pair.H,
                 std::vector<CMat>(order, pair.V.mat())};
  CMat value = moi_spectral(req).value;
  double fact = 1;
  for (int j = 2; j <= order; ++j) fact *= j;
  value *= cx(fact);
  if (f.real_valued()) value = value.hermitian_part();
  return value;
}

namespace {

// coefficient mask of the order-4 five-point first-derivative stencil,
// composed n times; offsets run -2n..2n, denominator (12 h)^n
std::vector<double> composed_stencil(int n) {
  std::vector<double> mask{1.0};  // offset 0
  int half = 0;
  const double base[5] = {1.0, -8.0, 0.0, 8.0, -1.0};  // offsets -2..2
  for (int it = 0; it < n; ++it) {
    std::vector<double> next(mask.size() + 4, 0.0);
    for (size_t i = 0; i < mask.size(); ++i)
      for (int j = 0; j < 5; ++j) next[i + j] += mask[i] * base[j];
    mask = std::move(next);
    half += 2;
  }
  return mask;  // size 4n+1, offsets -2n..2n
}

CMat fd_apply(const ScalarFunction& f, const PerturbationPair& pair, int n, double h) {
  const std::vector<double> mask = composed_stencil(n);
  const int half = 2 * n;
  const int d = pair.dim();
  CMat acc(d);
  for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
    if (mask[i] == 0.0) continue;
    const double t = (i - half) * h;
    const HermitianMatrix ht = HermitianMatrix::trusted(pair.H.mat() + cx(t) * pair.V.mat());
    acc += cx(mask[i]) * apply_function(f, ht).mat();
  }
  acc *= cx(1.0 / std::pow(12.0 * h, n));
  return acc;
}

}  // namespace

CMat gateaux_derivative_fd(const ScalarFunction& f, const PerturbationPair& pair, int order,
                           double step, double* err_estimate) {
  require(order >= 1 && order <= 4, Errc::invalid_argument, "fd path supports order 1..4");
  require(f.real_valued(), Errc::invalid_argument,
          "finite differences need a real-valued function; split complex f first");
  double h = step;
  if (h <= 0) {
    const double hn = eigh(pair.H).operator_norm();
    const double vn = eigh(pair.V).operator_norm();
    h = std::pow(2.220446049250313e-16, 1.0 / (order + 4)) * (1.0 + hn) / (1.0 + vn);
  }
  CMat v1 = fd_apply(f, pair, order, h);
  CMat v2 = fd_apply(f, pair, order, 2.0 * h);
  const double est = (v2 - v1).frobenius_norm() / 15.0;
  if (err_estimate) *err_estimate = est;
  const double scale = std::max(v1.frobenius_norm(), 1e-300);
  if (est > 1e-3 * scale && scale > 1e-200)
    fail(Errc::step_size, "finite-difference error estimate exceeds 1e-3 * scale");
  return v1;
}

CMat gateaux_derivative_fd_complex(const ScalarFunction& f, const PerturbationPair& pair,
                                   int order, double step) {
  if (f.real_valued()) return gateaux_derivative_fd(f, pair, order, step);
  CMat re = gateaux_derivative_fd(f.real_part(), pair, order, step);
  CMat im = gateaux_derivative_fd(f.imag_part(), pair, order, step);
  return re + cx(0, 1) * im;
}

namespace {

void compositions_fixed(int slots, int budget, int cap, std::vector<int>& cur,
                        const std::function<void(const std::vector<int>&)>& emit) {
  if (slots == 1) {
    if (budget >= 1 && budget <= cap) {
      cur.push_back(budget);
      emit(cur);
      cur.pop_back();
    }
    return;
  }
  const int lo = std::max(1, budget - cap * (slots - 1));
  const int hi = std::min(cap, budget - (slots - 1));
  for (int v = lo; v <= hi; ++v) {
    cur.push_back(v);
    compositions_fixed(slots - 1, budget - v, cap, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

CMat resolvent_derivative(int power_m, cx z, const PerturbationPair& pair, int order) {
  require(z.imag() != 0.0, Errc::invalid_argument, "resolvent derivative needs Im z != 0");
  require(power_m >= 1 && order >= 1, Errc::invalid_argument, "m and n must be >= 1");
  const SpectralDecomposition dec = eigh(pair.H);
  std::vector<CMat> rp;  // rp[p-1] = (zI-H)^{-p}
  for (int p = 1; p <= power_m; ++p) rp.push_back(resolvent_power(dec, z, p));

  CMat acc(pair.dim());
  std::vector<int> cur;
  compositions_fixed(order + 1, power_m + order, power_m, cur,
                     [&](const std::vector<int>& ms) {
                       CMat term = rp[ms[0] - 1];
                       for (int i = 1; i <= order; ++i)
                         term = term * pair.V.mat() * rp[ms[i] - 1];
                       acc += term;
                     });
  double fact = 1;
  for (int j = 2; j <= order; ++j) fact *= j;
  acc *= cx(fact);
  return acc;
}

CMat taylor_remainder(const ScalarFunction& f, const PerturbationPair& pair, int order) {
  require(order >= 1, Errc::invalid_argument, "remainder order must be >= 1");
  const HermitianMatrix sum = HermitianMatrix::trusted(pair.H.mat() + pair.V.mat());
  CMat acc = apply_function(f, sum).mat() - apply_function(f, pair.H).mat();
  double fact = 1;
  for (int j = 1; j < order; ++j) {
    fact *= j;
    acc -= cx(1.0 / fact) * gateaux_derivative_moi(f, pair, j);
  }
  return acc;
}

double StepFunction::integral() const {
  double s = 0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
    s += values[i] * (breakpoints[i + 1] - breakpoints[i]);
  return s;
}

double StepFunction::eval(double t) const {
  if (breakpoints.empty() || t < breakpoints.front() || t >= breakpoints.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  const size_t idx = static_cast<size_t>(it - breakpoints.begin()) - 1;
  return idx < values.size() ? values[idx] : 0.0;
}

StepFunction krein_ssf(const PerturbationPair& pair) {
  const std::vector<double> eh = eigh(pair.H).raw_eigenvalues;
  const std::vector<double> ehv =
      eigh(HermitianMatrix::trusted(pair.H.mat() + pair.V.mat())).raw_eigenvalues;

  // events: +1 at eigenvalues of H, -1 at eigenvalues of H+V
  std::vector<std::pair<double, int>> events;
  events.reserve(eh.size() + ehv.size());
  for (double x : eh) events.emplace_back(x, +1);
  for (double x : ehv) events.emplace_back(x, -1);
  std::sort(events.begin(), events.end());

  StepFunction xi;
  int level = 0;
  for (size_t i = 0; i < events.size();) {
    const double t = events[i].first;
    const int before = level;
    while (i < events.size() && events[i].first == t) level += events[i++].second;
    if (level == before) continue;  // events cancel at this point
    xi.breakpoints.push_back(t);
    xi.values.push_back(level);
  }
  // both spectra have dim points, so the level after the last jump is 0;
  // dropping it leaves values[i] = xi on [b_i, b_{i+1})
  if (!xi.values.empty()) xi.values.pop_back();
  return xi;
}

KreinResidual krein_residual(const ScalarFunction& f, const PerturbationPair& pair) {
  require(f.real_valued(), Errc::invalid_argument, "krein residual needs real-valued f");
  const HermitianMatrix sum = HermitianMatrix::trusted(pair.H.mat() + pair.V.mat());
  const double tr_after = apply_function(f, sum).mat().trace().real();
  const double tr_before = apply_function(f, pair.H).mat().trace().real();
  const StepFunction xi = krein_ssf(pair);
  double rhs = 0;  // int f' xi = sum_i xi_i (f(b_{i+1}) - f(b_i))
  for (size_t i = 0; i + 1 < xi.breakpoints.size(); ++i)
    rhs += xi.values[i] *
           (f.eval(xi.breakpoints[i + 1]).real() - f.eval(xi.breakpoints[i]).real());
  KreinResidual out;
  out.lhs = tr_after - tr_before;
  out.rhs = rhs;
  out.residual = std::abs(out.lhs - rhs);
  out.scale = 1.0 + std::abs(tr_after) + std::abs(tr_before);
  return out;
}

double cyclic_identity_residual(const ScalarFunction& f, const PerturbationPair& pair,
                                int order) {
  require(order >= 1, Errc::invalid_argument, "order must be >= 1");
  MoiRequest lhs_req{MoiSymbol::divided_difference(f, order), pair.H,
                     std::vector<CMat>(order, pair.V.mat())};
  const cx lhs = moi_spectral(lhs_req).value.trace();

  MoiRequest rhs_req{MoiSymbol::phi(f, order), pair.H,
                     std::vector<CMat>(order - 1, pair.V.mat())};
  const cx rhs = cx(0, 1) * (moi_spectral(rhs_req).value * pair.V.mat()).trace();

  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

EstimateReport estimate_scan(const ScalarFunction& f, int order, const IdealSpec& ideal,
                             std::span<const int> dims, int trials, uint64_t seed) {
  require(order >= 1, Errc::invalid_argument, "order must be >= 1");
  require(ideal.kind == IdealSpec::Kind::weak_schatten ||
              ideal.kind == IdealSpec::Kind::dm_convex,
          Errc::invalid_argument, "scan ideals: weak_schatten(n) or dm_convex(n)");
  EstimateReport rep;
  rep.order = order;
  rep.ideal = ideal.name();
  const double fsup = f.sup_derivative(order);

  for (int dim : dims) {
    std::vector<double> tr_ratio(trials, 0.0), tp_ratio(trials, 0.0), tr_norm(trials, 0.0);
    parallel_for_index(trials, [&](long t) {
      Rng rng(derive_seed(seed ^ (0x5851F42Dull * dim), static_cast<uint64_t>(t)));
      const HermitianMatrix h = random_gue(dim, rng);
      const HermitianMatrix v = random_weak_profile(dim, order, rng);
      const PerturbationPair pair(h, v);
      const double vnorm = ideal_norm(v.mat(), ideal);
      const double hop = eigh(h).operator_norm();

      const CMat dn = gateaux_derivative_moi(f, pair, order);
      const double denom = fsup * std::pow(vnorm, order);
      tr_ratio[t] = std::abs(dn.trace()) / std::max(denom, 1e-300);
      tr_norm[t] = tr_ratio[t] / std::pow(1.0 + hop, order);

      if (order >= 2) {
        MoiRequest req{MoiSymbol::phi(f, order), h, std::vector<CMat>(order - 1, v.mat())};
        const CMat tphi = moi_spectral(req).value;
        const double num =
            ideal_norm(tphi, IdealSpec::weak_schatten(order / (order - 1.0)));
        tp_ratio[t] = num / std::max(fsup * std::pow(vnorm, order - 1), 1e-300);
      }
    });
    rep.dims.push_back(dim);
    rep.max_trace_ratio.push_back(*std::max_element(tr_ratio.begin(), tr_ratio.end()));
    rep.max_tphi_ratio.push_back(*std::max_element(tp_ratio.begin(), tp_ratio.end()));
    rep.max_trace_ratio_normalized.push_back(
        *std::max_element(tr_norm.begin(), tr_norm.end()));
  }
  const double base_tr = std::max(rep.max_trace_ratio.front(), 1e-300);
  rep.trace_growth_factor =
      *std::max_element(rep.max_trace_ratio.begin(), rep.max_trace_ratio.end()) / base_tr;
  if (order >= 2) {
    const double base_tp = std::max(rep.max_tphi_ratio.front(), 1e-300);
    rep.tphi_growth_factor =
        *std::max_element(rep.max_tphi_ratio.begin(), rep.max_tphi_ratio.end()) / base_tp;
  }
  rep.fitted_constant =
      *std::max_element(rep.max_trace_ratio.begin(), rep.max_trace_ratio.end());
  return rep;
}

}  // namespace specshift
