#pragma once

// Multiple operator integrals T_phi(x_1..x_n) for a base H, evaluated two
// ways:
//
//  * moi_spectral: the exact finite-dimensional formula
//        sum over cluster tuples  phi(l_{c0},..,l_{cn}) P_{c0} x_1 P_{c1} ... x_n P_{cn}
//    assembled elementwise in the eigenbasis (O(d^{n+1}) paths).
//
//  * moi_dyadic: the two-cone dyadic lattice sums of the Fourier
//    representation, S_1..S_m, with certified truncation tails.  In the
//    eigenbasis the lattice sum factorizes over eigenvalue tuples into scalar
//    cone sums, which is an exact regrouping of the same S_m.
//
// Symbols: f^[n] (divided difference), phi = -i f^[n](l0,l0,l1..) (the
// trace-reduced symbol), or a custom tuple function.

#include <optional>
#include <vector>

#include "divided_difference.hpp"
#include "spectral.hpp"

namespace specshift {

struct MoiSymbol {
  enum class Kind { divided_difference, phi, custom };
  Kind kind = Kind::custom;
  std::optional<ScalarFunction> f;
  int dd_order = 1;      // n of the underlying f^[n]
  int lambda_arity = 2;  // slots; matrix argument count is lambda_arity - 1
  std::function<cx(std::span<const double>)> custom;

  static MoiSymbol divided_difference(ScalarFunction fn, int order);
  static MoiSymbol phi(ScalarFunction fn, int order);
  static MoiSymbol custom_symbol(int lambda_arity, std::function<cx(std::span<const double>)> fn);

  int arg_count() const { return lambda_arity - 1; }
  cx eval(std::span<const double> lambdas) const;
};

struct MoiRequest {
  MoiSymbol symbol;
  HermitianMatrix base;
  std::vector<CMat> args;
  int m_max = 12;
  double truncation = 16.0;
  double tolerance = 1e-3;
  double cluster_tol = -1.0;
};

struct MoiResult {
  CMat value;
  bool dyadic = false;
  bool converged = true;
  std::string note;
  // dyadic diagnostics (empty for the spectral path)
  std::vector<double> level_norms;   // ||S_m||_F, m = 1..m_max
  std::vector<double> level_errors;  // ||S_m - reference||_F
  std::vector<CMat> levels;          // kept when dim <= 32
  double tail_bound = 0.0;
  double fitted_order = 0.0;
  CMat reference;  // moi_spectral value (the S_infinity stand-in)
};

MoiResult moi_spectral(const MoiRequest& req);
MoiResult moi_dyadic(const MoiRequest& req);

// Direct-enumeration integrand for one cone of the Fourier representation of
// T_{f^[n]}; sign = +1/-1 selects the cone, prefactors folded into the
// density so that (cone +1) + (cone -1) = the full integrand.
LatticeIntegrand fourier_moi_integrand(const SpectralDecomposition& dec,
                                       const std::vector<CMat>& args, const ScalarFunction& f,
                                       double sign);

struct TraceSwapReport {
  double max_linearity_residual = 0.0;  // max_m |Tr(D S_m) - sum_k Tr(D u_k) h^{n+1}|
  double limit_vs_reference = 0.0;      // |Tr(D S_dyadic) - Tr(D T_spectral)|
  double scale = 1.0;
  int levels_checked = 0;
};

// tau(integral) vs integral(tau) with tau = Tr(D .), per level by direct
// enumeration (small levels), plus the limit comparison at m_max.
TraceSwapReport trace_swap_check(const MoiRequest& req, const CMat& d);

}  // namespace specshift
