#pragma once

// Divided differences f^[n] by four independent routes:
//   recursive   confluent Newton table with exact derivatives at repeated nodes
//   rational    closed-form composition sum for f(x) = (z-x)^{-m}
//   simplex     f^[n](lambda) = int_{S^n} f^{(n)}(sum lambda_j s_j) dsigma_n,
//               midpoint product rule on the triangular cube map + Romberg
//   fourier     two-cone dyadic lattice sum of the Fourier representation
//
// plus the reduced symbol phi(l_0..l_{n-1}) = -i f^[n](l_0, l_0, l_1..l_{n-1})
// evaluated both by the doubled-argument table and by the s_0-weighted
// simplex integral.

#include <span>
#include <vector>

#include "lattice.hpp"
#include "scalar_function.hpp"

namespace specshift {

struct LambdaTuple {
  std::vector<double> values;
  double coalescence_tol = 0.0;

  // tol < 0 selects the default 1e-7 * (1 + max|lambda|).
  static LambdaTuple make(std::vector<double> v, double tol = -1.0);
  int order() const { return static_cast<int>(values.size()) - 1; }
};

struct DivDiffValue {
  cx value;
  // true when nearby-but-unequal nodes were merged onto the derivative branch
  bool coalescence_switched = false;
};

DivDiffValue divdiff_recursive(const ScalarFunction& f, const LambdaTuple& t);

// Lemma-style closed form for a single pole term (z - x)^{-m}: the sum of
// prod_i (z - lambda_i)^{-m_i} over compositions m_0+...+m_n = m+n with
// 1 <= m_i <= m.  Exact for repeated nodes.
cx divdiff_rational_term(int m, cx pole, const LambdaTuple& t);
// Sum of the closed form over the terms of a rational function.
cx divdiff_rational(const ScalarFunction& rational_f, const LambdaTuple& t);

struct SimplexValue {
  cx value;
  double error_estimate = 0.0;
  bool converged = true;
  long nodes_used = 0;
  int resolution = 0;
};

// Midpoint product rule over the triangular parametrization of
// R^n = {s >= 0, sum s <= 1}, refined with Romberg extrapolation until the
// error estimate drops below tol or the node budget runs out (in which case
// the partial result is returned with converged=false).
SimplexValue divdiff_simplex(const ScalarFunction& f, const LambdaTuple& t, double tol = 1e-8,
                             long node_budget = 40000000);

// Streaming quadrature over R^n used by divdiff_simplex and phi_eval; g is
// called with the n+1 barycentric coordinates (s_0..s_{n-1}, 1 - sum).
class SimplexRule {
 public:
  SimplexRule(int n, int resolution) : n_(n), res_(resolution) {}
  template <class Fn>
  cx integrate(Fn&& g) const;
  // node/weight enumeration (tests use this to check the measure)
  void for_each_node(const std::function<void(std::span<const double>, double)>& fn) const;
  double weight_sum() const;
  long node_count() const;

 private:
  int n_;
  int res_;
};

struct ConeValue {
  cx value;
  double tail_bound = 0.0;
};

// Certified bound on the part of the two-cone lattice sum outside the
// total-degree truncation, taking the sharpest available decay exponent.
// t0_weighted covers the phi-symbol density t_0 * Ff(sum t).
double fourier_cone_tail(const ScalarFunction& f, int order_n, int level, double truncation,
                         bool t0_weighted = false);

// Two-cone dyadic lattice sum at a single level; throws enlarge_truncation
// when tol > 0 and the certified tail exceeds it.  Gaussian f only.
ConeValue divdiff_fourier_cone(const ScalarFunction& f, const LambdaTuple& t, int level,
                               double truncation, double tol = -1.0,
                               BoundaryWeighting bw = BoundaryWeighting::half_face);

struct PhiValue {
  cx doubled;     // -i * recursive table at (l0, l0, l1, .., l_{n-1})
  cx simplex;     // -i * int_{S^{n-1}} s_0 f^{(n)}(sum l_j s_j) dsigma
  double discrepancy = 0.0;
};

// Inconsistency between the two routes beyond max(10*quadrature error, floor)
// raises Errc::inconsistency: the routes are algebraically equal.
PhiValue phi_eval(const ScalarFunction& f, std::span<const double> lambda, double quad_tol = 1e-9);

// ---- implementation of the streaming rule ----

template <class Fn>
cx SimplexRule::integrate(Fn&& g) const {
  if (n_ == 0) {
    const double s0 = 1.0;
    return g(std::span<const double>(&s0, 1));
  }
  const double h = 1.0 / res_;
  std::vector<int> idx(n_, 0);
  std::vector<double> s(n_ + 1, 0.0);
  PairwiseReducer<cx> red;
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
    red.push(g(std::span<const double>(s.data(), n_ + 1)) * jac);
    int j = n_ - 1;
    while (j >= 0 && ++idx[j] >= res_) idx[j--] = 0;
    if (j < 0) break;
  }
  const double cell = std::pow(h, n_);
  return red.finish([] { return cx{}; }) * cell;
}

}  // namespace specshift
