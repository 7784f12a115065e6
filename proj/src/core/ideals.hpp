#pragma once

// Singular values and the battery of operator-ideal (quasi-)norms, all in the
// degree-1 homogeneous convention:
//   schatten(p)        (sum mu^p)^{1/p}
//   weak_schatten(p)   sup (k+1)^{1/p} mu(k)
//   lorentz(p,q)       (sum (k+1)^{q/p-1} mu^q(k))^{1/q}
//   dixmier_macaev     sup_{n>=1} (1/log(1+n)) sum_{k<n} mu(k)
//   dm_convex(q)       sup_{1<s<=s_max} (s-1)^{1/q} schatten(sq)
// The degree-n functional sup (k+1) mu^n(k) is exposed separately.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cmat.hpp"
#include "eigh.hpp"

namespace specshift {

std::vector<double> singular_values(const CMat& a);

struct IdealSpec {
  enum class Kind { schatten, weak_schatten, lorentz, dixmier_macaev, dm_convex };
  Kind kind = Kind::schatten;
  double p = 1.0;
  double q = 1.0;  // lorentz second index / dm_convex exponent

  static IdealSpec schatten(double p) { return {Kind::schatten, p, p}; }
  static IdealSpec weak_schatten(double p) { return {Kind::weak_schatten, p, p}; }
  static IdealSpec lorentz(double p, double q) { return {Kind::lorentz, p, q}; }
  static IdealSpec dixmier_macaev() { return {Kind::dixmier_macaev, 1.0, 1.0}; }
  static IdealSpec dm_convex(double q) { return {Kind::dm_convex, 1.0, q}; }
  static IdealSpec parse(const std::string& kind, double p, double q);
  std::string name() const;
};

double ideal_norm_sv(std::span<const double> mu, const IdealSpec& spec);
double ideal_norm(const CMat& a, const IdealSpec& spec);

// The literal degree-n functional sup_k (k+1) mu(k)^n; equals
// weak_schatten(n)^n under the degree-1 convention.
double weak_paper_functional(std::span<const double> mu, int n);

struct IdealNormReport {
  std::vector<double> singular_values;
  std::vector<std::pair<std::string, double>> norms;
};
IdealNormReport ideal_norm_report(const CMat& a);

// Property suite: the p<1 quasi-triangle inequality, its finite
// Riesz-Fischer extension, and Hoelder, on seeded random ensembles.
struct QuasinormViolation {
  std::string inequality;
  double lhs, rhs;
  uint64_t trial_seed;
};
struct QuasinormReport {
  int trials = 0;
  int checks = 0;
  std::vector<QuasinormViolation> violations;
  double max_relative_excess = 0.0;
};
QuasinormReport quasinorm_property_suite(int dim, int trials, uint64_t seed);

// Weak-norm boundedness scan for a multilinear map, dim by dim:
//   ratio = ||R(x_1..x_q)||_{weak(alpha)} / prod ||x_j||_{weak(alpha_j)}
struct InterpolationReport {
  std::vector<int> dims;
  std::vector<double> max_ratio;   // per dim
  std::vector<double> mean_ratio;  // per dim
  double growth_factor = 1.0;      // max over dims / value at smallest dim
  double fitted_constant = 0.0;    // overall max ratio
};
InterpolationReport interpolation_check(
    const std::function<CMat(std::span<const CMat>)>& map, int arity,
    std::span<const double> arg_exponents, double out_exponent, std::span<const int> dims,
    int trials, uint64_t seed);

}  // namespace specshift
