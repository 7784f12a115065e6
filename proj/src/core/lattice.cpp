#include "lattice.hpp"

#include <cmath>
#include <limits>

namespace specshift {

double inverse_square_sum() {
  // sum_{k=1}^N k^{-2} + Euler-Maclaurin remainder at N
  constexpr long N = 2000;
  double s = 0;
  for (long k = N; k >= 1; --k) s += 1.0 / (static_cast<double>(k) * k);
  const double x = static_cast<double>(N) + 1.0;
  const double tail = 1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x * x * x) -
                      1.0 / (30.0 * x * x * x * x * x);
  return s + tail;
}

namespace {

// C(l+n, n) as a double, stable for the ranges used here
double simplex_count(double l, int n) {
  double c = 1;
  for (int i = 1; i <= n; ++i) c *= (l + i) / i;
  return c;
}

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double simplex_count_tail(int n, double h, long l_start, double alpha) {
  require(alpha > n + 1, Errc::invalid_argument, "tail bound needs alpha > n+1");
  const long l2 = 2 * l_start + 1024;
  double partial = 0;
  for (long l = l_start + 1; l <= l2; ++l)
    partial += simplex_count(static_cast<double>(l), n) * std::pow(1.0 + l * h, -alpha);
  // integral remainder past l2: count(x) <= (y/h)^n (1 + n h / y0)^n / n!,  y = 1 + x h
  const double y0 = 1.0 + static_cast<double>(l2) * h;
  const double remainder = std::pow(1.0 + n * h / y0, n) / (factorial(n) * (alpha - n - 1.0)) *
                           std::pow(y0, n + 1.0 - alpha);
  return std::pow(h, n + 1) * partial + remainder;
}

double lattice_density_sum(int n, int level) {
  const double h = std::pow(2.0, -level);
  const double alpha = n + 2.0;
  double acc = 0;
  long l = 0;
  for (; l < 100000000; ++l) {
    const double term = simplex_count(static_cast<double>(l), n) * std::pow(1.0 + l * h, -alpha);
    acc += term;
    if (l > 64 && term < 1e-13 * acc && term < simplex_count(static_cast<double>(l - 1), n) *
                                                    std::pow(1.0 + (l - 1) * h, -alpha))
      break;
  }
  acc += simplex_count_tail(n, h, l, alpha) * std::pow(h, -(n + 1.0));
  return acc;
}

double integrand_tail_bound(const LatticeIntegrand& u, double h, long k_max) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [alpha, c] : u.density_decay)
    best = std::min(best, c * simplex_count_tail(u.order_n, h, k_max, alpha));
  return u.weight_sup * best;
}

BoxSum dyadic_box_sum(const LatticeIntegrand& u, int level, double truncation) {
  const int n = u.order_n;
  const double h = std::pow(2.0, -level);
  const long k_max = std::llround(truncation / h);
  double points_est = 1;
  for (int j = 0; j <= n; ++j) points_est *= static_cast<double>(k_max + 1);
  require(points_est <= 5e7, Errc::budget_exceeded,
          "box lattice too large; lower the level or truncation");

  PairwiseReducer<CMat> red;
  std::vector<long> k(n + 1, 0);
  std::vector<double> s(n + 1, 0.0);
  long points = 0;
  while (true) {
    for (int j = 0; j <= n; ++j) s[j] = k[j] * h;
    const cx v = u.density(s);
    if (v != cx{}) {
      CMat w = u.weight(s);
      w *= v;
      red.push(std::move(w));
    }
    ++points;
    int j = n;
    while (j >= 0 && ++k[j] > k_max) k[j--] = 0;
    if (j < 0) break;
  }
  BoxSum out{red.finish([&] { return CMat(u.dim); }), 0.0, points};
  out.value *= cx(std::pow(h, n + 1));
  out.tail_bound = integrand_tail_bound(u, h, k_max);
  return out;
}

TracedBoxSum dyadic_box_sum_traced(const LatticeIntegrand& u, const CMat& d, int level,
                                   double truncation) {
  const int n = u.order_n;
  const double h = std::pow(2.0, -level);
  const long k_max = std::llround(truncation / h);
  double points_est = 1;
  for (int j = 0; j <= n; ++j) points_est *= static_cast<double>(k_max + 1);
  require(points_est <= 5e7, Errc::budget_exceeded,
          "box lattice too large; lower the level or truncation");

  PairwiseReducer<CMat> mat_red;
  PairwiseReducer<cx> tr_red;
  std::vector<long> k(n + 1, 0);
  std::vector<double> s(n + 1, 0.0);
  while (true) {
    for (int j = 0; j <= n; ++j) s[j] = k[j] * h;
    const cx v = u.density(s);
    if (v != cx{}) {
      CMat w = u.weight(s);
      w *= v;
      tr_red.push((d * w).trace());
      mat_red.push(std::move(w));
    }
    int j = n;
    while (j >= 0 && ++k[j] > k_max) k[j--] = 0;
    if (j < 0) break;
  }
  const double vol = std::pow(h, n + 1);
  CMat s_m = mat_red.finish([&] { return CMat(u.dim); });
  s_m *= cx(vol);
  TracedBoxSum out;
  out.trace_of_sum = (d * s_m).trace();
  out.sum_of_traces = tr_red.finish([] { return cx{}; }) * vol;
  out.tail_bound = integrand_tail_bound(u, h, k_max) * d.frobenius_norm();
  return out;
}

cx scalar_cone_sum(std::span<const double> lambda, int level, double truncation, double sign,
                   const std::function<cx(double)>& psi, BoundaryWeighting bw,
                   bool first_coordinate_weight) {
  const int n = static_cast<int>(lambda.size()) - 1;
  require(n >= 0, Errc::invalid_argument, "cone sum needs at least one coordinate");
  const double h = std::pow(2.0, -level);
  const long k_max = std::llround(truncation / h);
  const long big_l = (n + 1) * k_max;
  const bool half = bw == BoundaryWeighting::half_face;

  // seed with coordinate 0: exact phases to avoid drift over long runs
  std::vector<cx> a(big_l + 1);
  for (long l = 0; l <= big_l; ++l) {
    const double phase = sign * lambda[0] * h * static_cast<double>(l);
    a[l] = std::polar(first_coordinate_weight ? h * static_cast<double>(l) : 1.0, phase);
  }
  if (half && !first_coordinate_weight) a[0] = 0.5;

  // fold remaining coordinates: full geometric convolution, then the
  // half-face correction subtracts half of the previous layer (k_j = 0 term).
  std::vector<cx> b(big_l + 1);
  for (int j = 1; j <= n; ++j) {
    const cx r = std::polar(1.0, sign * lambda[j] * h);
    cx acc = 0;
    for (long l = 0; l <= big_l; ++l) {
      acc = acc * r + a[l];
      b[l] = acc;
    }
    if (half) {
      for (long l = 0; l <= big_l; ++l) a[l] = b[l] - 0.5 * a[l];
    } else {
      std::swap(a, b);
    }
  }

  PairwiseReducer<cx> red;
  for (long l = 0; l <= big_l; ++l) {
    const cx p = psi(sign * h * static_cast<double>(l));
    if (p != cx{} && a[l] != cx{}) red.push(a[l] * p);
  }
  return red.finish([] { return cx{}; }) * std::pow(h, n + 1);
}

}  // namespace specshift
