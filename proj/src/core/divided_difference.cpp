#include "divided_difference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace specshift {

LambdaTuple LambdaTuple::make(std::vector<double> v, double tol) {
  require(!v.empty(), Errc::invalid_argument, "lambda tuple must be nonempty");
  if (tol < 0) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    tol = 1e-7 * (1.0 + m);
  }
  return LambdaTuple{std::move(v), tol};
}

namespace {

// Sorted nodes with clusters (adjacent gaps < tol) snapped to their mean.
std::vector<double> snapped_nodes(const LambdaTuple& t, bool* switched) {
  std::vector<double> z = t.values;
  std::sort(z.begin(), z.end());
  const int n = static_cast<int>(z.size());
  if (switched) *switched = false;
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && z[j] - z[j - 1] < t.coalescence_tol) ++j;
    if (j - i > 1) {
      double mean = 0;
      for (int k = i; k < j; ++k) mean += z[k];
      mean /= (j - i);
      bool exact = true;
      for (int k = i; k < j; ++k) exact = exact && (z[k] == mean);
      if (!exact && switched) *switched = true;
      for (int k = i; k < j; ++k) z[k] = mean;
    }
    i = j;
  }
  return z;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

cx confluent_table(const ScalarFunction& f, const std::vector<double>& z) {
  const int n = static_cast<int>(z.size()) - 1;
  std::vector<std::vector<cx>> t(n + 1, std::vector<cx>(n + 1));
  for (int i = 0; i <= n; ++i) t[i][0] = f.eval(z[i]);
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i + j <= n; ++i) {
      if (z[i + j] != z[i]) {
        t[i][j] = (t[i + 1][j - 1] - t[i][j - 1]) / (z[i + j] - z[i]);
      } else {
        t[i][j] = f.derivative(z[i], j) / factorial(j);
      }
    }
  }
  return t[0][n];
}

}  // namespace

DivDiffValue divdiff_recursive(const ScalarFunction& f, const LambdaTuple& t) {
  DivDiffValue out;
  const std::vector<double> z = snapped_nodes(t, &out.coalescence_switched);
  out.value = confluent_table(f, z);
  return out;
}

namespace {

void compositions(int slots, int budget, int cap, std::vector<int>& cur,
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
    compositions(slots - 1, budget - v, cap, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

cx divdiff_rational_term(int m, cx pole, const LambdaTuple& t) {
  require(pole.imag() != 0.0, Errc::invalid_argument, "pole must be non-real");
  require(m >= 1, Errc::invalid_argument, "pole order must be >= 1");
  const int n = t.order();
  // cache (z - lambda_i)^{-p} for p = 1..m
  std::vector<std::array<cx, 13>> pw(n + 1);
  for (int i = 0; i <= n; ++i) {
    const cx w = 1.0 / (pole - t.values[i]);
    cx acc = 1;
    for (int p = 1; p <= m; ++p) {
      acc *= w;
      pw[i][p] = acc;
    }
  }
  cx sum = 0;
  std::vector<int> cur;
  compositions(n + 1, m + n, m, cur, [&](const std::vector<int>& ms) {
    cx prod = 1;
    for (int i = 0; i <= n; ++i) prod *= pw[i][ms[i]];
    sum += prod;
  });
  return sum;
}

cx divdiff_rational(const ScalarFunction& f, const LambdaTuple& t) {
  require(f.kind() == ScalarFunction::Kind::rational, Errc::unsupported,
          "closed-form route requires the rational family");
  cx sum = 0;
  for (const auto& term : f.rational_terms())
    sum += term.coef * divdiff_rational_term(term.order, term.pole, t);
  return sum;
}

void SimplexRule::for_each_node(
    const std::function<void(std::span<const double>, double)>& fn) const {
  if (n_ == 0) {
    const double s0 = 1.0;
    fn(std::span<const double>(&s0, 1), 1.0);
    return;
  }
  const double h = 1.0 / res_;
  const double cell = std::pow(h, n_);
  std::vector<int> idx(n_, 0);
  std::vector<double> s(n_ + 1, 0.0);
  while (true) {
    double remaining = 1.0;
    double jac = 1.0;
    for (int j = 0; j < n_; ++j) {
      const double u = (idx[j] + 0.5) * h;
      jac *= remaining;
      s[j] = u * remaining;
      remaining -= s[j];
    }
    s[n_] = remaining;
    fn(std::span<const double>(s.data(), n_ + 1), jac * cell);
    int j = n_ - 1;
    while (j >= 0 && ++idx[j] >= res_) idx[j--] = 0;
    if (j < 0) break;
  }
}

double SimplexRule::weight_sum() const {
  double s = 0;
  for_each_node([&](std::span<const double>, double w) { s += w; });
  return s;
}

long SimplexRule::node_count() const {
  if (n_ == 0) return 1;
  long c = 1;
  for (int j = 0; j < n_; ++j) c *= res_;
  return c;
}

namespace {

// Romberg ladder over resolution doublings of the midpoint rule.
struct Romberg {
  std::vector<std::vector<cx>> rows;
  void add(cx midpoint_value) {
    std::vector<cx> row{midpoint_value};
    if (!rows.empty()) {
      const auto& prev = rows.back();
      for (size_t k = 0; k < prev.size(); ++k) {
        const double w = std::pow(4.0, k + 1);
        row.push_back((w * row[k] - prev[k]) / (w - 1.0));
      }
    }
    rows.push_back(std::move(row));
  }
  cx best() const { return rows.back().back(); }
  double error_estimate() const {
    if (rows.size() < 2) return std::numeric_limits<double>::infinity();
    return std::abs(rows.back().back() - rows[rows.size() - 2].back());
  }
};

int initial_resolution(int n) {
  switch (n) {
    case 1: return 32;
    case 2: return 12;
    case 3: return 8;
    default: return 6;
  }
}

}  // namespace

SimplexValue divdiff_simplex(const ScalarFunction& f, const LambdaTuple& t, double tol,
                             long node_budget) {
  const int n = t.order();
  SimplexValue out;
  if (n == 0) {
    out.value = f.eval(t.values[0]);
    out.error_estimate = 0.0;
    out.nodes_used = 1;
    out.resolution = 1;
    return out;
  }
  require(n <= ScalarFunction::kMaxDerivative, Errc::unsupported, "order too large");
  const std::vector<double>& lam = t.values;
  auto g = [&](std::span<const double> s) {
    double x = 0;
    for (int j = 0; j <= n; ++j) x += lam[j] * s[j];
    return f.derivative(x, n);
  };

  Romberg romberg;
  long used = 0;
  int res = initial_resolution(n);
  for (;;) {
    const SimplexRule rule(n, res);
    const long count = rule.node_count();
    if (used > 0 && used + count > node_budget) {
      out.converged = false;
      break;
    }
    romberg.add(rule.integrate(g));
    used += count;
    out.resolution = res;
    if (romberg.error_estimate() <= tol) break;
    res *= 2;
  }
  out.value = romberg.best();
  out.error_estimate = romberg.error_estimate();
  out.nodes_used = used;
  if (romberg.error_estimate() > tol) out.converged = false;
  return out;
}

double fourier_cone_tail(const ScalarFunction& f, int order_n, int level, double truncation,
                         bool t0_weighted) {
  const double h = std::pow(2.0, -level);
  const long big_l = (order_n + 1) * std::llround(truncation / h);
  double best = std::numeric_limits<double>::infinity();
  for (int alpha = order_n + 2; alpha <= ScalarFunction::kMaxAlpha; ++alpha) {
    // with the t_0 weight, bound t_0 <= sum t and lower alpha by one
    const double c = f.fourier_decay_constant(alpha);
    const double eff_alpha = t0_weighted ? alpha - 1.0 : static_cast<double>(alpha);
    if (eff_alpha <= order_n + 1) continue;
    best = std::min(best, c * simplex_count_tail(order_n, h, big_l, eff_alpha));
  }
  require(std::isfinite(best), Errc::invalid_argument, "no usable decay certificate");
  return 2.0 * best;  // both cones
}

ConeValue divdiff_fourier_cone(const ScalarFunction& f, const LambdaTuple& t, int level,
                               double truncation, double tol, BoundaryWeighting bw) {
  require(f.kind() == ScalarFunction::Kind::gaussian, Errc::unsupported,
          "fourier-cone route requires the gaussian (Schwartz) family");
  const int n = t.order();
  auto psi = [&](double arg) { return f.fourier(arg); };

  const cx plus = scalar_cone_sum(t.values, level, truncation, +1.0, psi, bw);
  const cx minus = scalar_cone_sum(t.values, level, truncation, -1.0, psi, bw);

  // f^[n] = i^n [ C+ + (-1)^n C- ]
  cx in = 1;
  for (int j = 0; j < n; ++j) in *= cx(0, 1);
  ConeValue out;
  out.value = in * (plus + ((n % 2 == 0) ? minus : -minus));
  out.tail_bound = fourier_cone_tail(f, n, level, truncation);
  if (tol > 0 && out.tail_bound > tol)
    fail(Errc::enlarge_truncation, "certified lattice tail exceeds the requested tolerance; "
                                   "increase the truncation radius");
  return out;
}

PhiValue phi_eval(const ScalarFunction& f, std::span<const double> lambda, double quad_tol) {
  const int n = static_cast<int>(lambda.size());
  require(n >= 1, Errc::invalid_argument, "phi needs at least one argument");
  const cx minus_i(0, -1);

  std::vector<double> doubled;
  doubled.reserve(n + 1);
  doubled.push_back(lambda[0]);
  for (double v : lambda) doubled.push_back(v);
  PhiValue out;
  out.doubled = minus_i * divdiff_recursive(f, LambdaTuple::make(doubled)).value;

  // -i int_{S^{n-1}} s_0 f^{(n)}(sum lambda_j s_j) dsigma_{n-1}
  auto g = [&](std::span<const double> s) {
    double x = 0;
    for (int j = 0; j < n; ++j) x += lambda[j] * s[j];
    return s[0] * f.derivative(x, n);
  };
  Romberg romberg;
  int res = initial_resolution(n - 1);
  if (n == 1) {
    const double s0 = 1.0;
    out.simplex = minus_i * g(std::span<const double>(&s0, 1));
  } else {
    for (;;) {
      const SimplexRule rule(n - 1, res);
      romberg.add(rule.integrate(g));
      if (romberg.error_estimate() <= quad_tol || rule.node_count() > 20000000) break;
      res *= 2;
    }
    out.simplex = minus_i * romberg.best();
  }
  out.discrepancy = std::abs(out.doubled - out.simplex);
  const double scale =
      std::max({std::abs(out.doubled), std::abs(out.simplex), 1e-12});
  const double allowance =
      std::max(10.0 * (n == 1 ? 0.0 : romberg.error_estimate()), 1e-7 * scale);
  if (out.discrepancy > allowance)
    fail(Errc::inconsistency,
         "phi routes disagree beyond the quadrature error; this indicates a defect");
  return out;
}

}  // namespace specshift
